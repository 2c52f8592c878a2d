#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ssalab/error_analysis.hpp"

namespace ssalab {

struct CriterionResult {
  int id = 0;
  std::string title;
  double measured = 0.0;
  std::string relation;
  double threshold = 0.0;
  double seconds = 0.0;
  double time_limit = 0.0;
  bool value_pass = false;
  std::string detail;

  bool pass() const { return value_pass && seconds <= time_limit; }
};

using TailModel = std::function<TailCoefficients(const ModelParams&, std::size_t)>;

struct AcceptanceOptions {
  /// Source of the tail coefficients used by criteria 5-7; swapped out by
  /// mutation tests.
  TailModel tail = [](const ModelParams& p, std::size_t ell) { return tail_coefficients(p, ell); };
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
};

inline constexpr int kCriterionCount = 10;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

/// One line: "[PASS] 3 title: measured=... (<= threshold) time=...s/limit ... detail"
std::string format_result(const CriterionResult& r);

}  // namespace ssalab
