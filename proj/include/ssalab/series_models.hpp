#pragma once

#include <cstddef>
#include <vector>

namespace ssalab {

enum class Scheme { FixedStep, Discretized };

const char* to_string(Scheme s);
Scheme scheme_from_string(const char* name);

/// Full parameterization of one experiment: the series
///   f_n = x_n + delta * cos(xi * n + phi),  n = 0..N-1,
/// with x_n = a^n (FixedStep) or x_n = a^(n T / N) (Discretized).
struct ModelParams {
  Scheme scheme = Scheme::FixedStep;
  double a = 1.05;
  double T = 1.0;  // horizon; only read by the Discretized scheme
  double delta = 0.1;
  double omega = 2.0 / 9.0;  // cycles per sample
  double phi = 0.0;
  std::size_t N = 300;
  std::size_t L = 105;

  double xi() const;
  std::size_t K() const { return N - L + 1; }

  /// Growth factor per sample: a or a^(T/N).
  double base() const;
  double log_base() const;

  /// Checks a, omega, phi, T, delta and N >= 1 (everything a series
  /// generator needs).
  void validate_series() const;
  /// validate_series() plus the window constraint L >= 2, K >= 2.
  void validate() const;
};

/// FixedStep series with N ln a > 700 are refused (NumericalFailure).
inline constexpr double kOverflowGuardLog = 700.0;
void check_overflow_guard(const ModelParams& p);

std::vector<double> signal(const ModelParams& p);
std::vector<double> noise(const ModelParams& p);
std::vector<double> perturbed(const ModelParams& p);

/// L = floor(alpha * N); throws InvalidArgument unless 1 < L < N - 1.
std::size_t window_from_ratio(std::size_t N, double alpha);

/// The parameter block of the rational-frequency figure (a = 1.05,
/// delta = 0.1, omega = 2/9, phi = 0, L = floor(0.35 N)).
ModelParams fig2_params(std::size_t N, Scheme scheme = Scheme::FixedStep);

/// Wrap an angle into [-pi, pi].
double wrap_angle(double x);
/// Phase n * xi + phi reduced to [-pi, pi], with the product formed in
/// extended precision.
double phase(double n, double xi, double phi);

}  // namespace ssalab
