#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssalab/series_models.hpp"

namespace ssalab {

struct Verdict {
  std::string id;
  std::string description;
  double measured = 0.0;
  std::string relation;  // e.g. "<=", "in"
  double threshold = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string id;
  nlohmann::json parameters;  // full parameter block plus grid spec
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Verdict> verdicts;
  nlohmann::json extra = nlohmann::json::object();

  bool all_pass() const;
};

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const ExperimentReport& r);

std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);

struct PlotSeries {
  enum class Style { Points, Line, Step };
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  Style style = Style::Points;
  std::string color = "#1f77b4";
};

/// Standalone SVG document with linear axes.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_x = false, bool log_y = false);

/// Writes <id>.csv, <id>.json and, if non-empty, <id>.svg under dir.
void write_report(const std::filesystem::path& dir, const ExperimentReport& r, const std::string& svg = {});

}  // namespace ssalab
