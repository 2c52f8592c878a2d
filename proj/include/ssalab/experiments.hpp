#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssalab/error_analysis.hpp"
#include "ssalab/report.hpp"
#include "ssalab/series_models.hpp"

namespace ssalab {

/// Base parameters plus an N-grid. N and L of `params` are overwritten per
/// grid point with L = floor(alpha N).
struct ExperimentConfig {
  ModelParams params;
  double alpha = 0.35;
  std::vector<std::size_t> grid;
  std::filesystem::path out_dir;  // empty: no files written
};

ExperimentConfig fig2_defaults();
ExperimentConfig histogram_defaults();
ExperimentConfig proj_decay_defaults(Scheme scheme);
ExperimentConfig err_decay_defaults();
ExperimentConfig bounds_defaults();

ExperimentReport run_fig2(const ExperimentConfig& cfg);
ExperimentReport run_histogram(const ExperimentConfig& cfg);
ExperimentReport run_proj_decay(const ExperimentConfig& cfg);
ExperimentReport run_err_decay(const ExperimentConfig& cfg);
ExperimentReport run_bounds(const ExperimentConfig& cfg);

/// Courtesy plot for a report produced by one of the runners above.
std::string render_svg(const ExperimentReport& r);

/// base with N set and L = floor(alpha N).
ModelParams at_length(ModelParams base, std::size_t N, double alpha);

/// num/den with den <= max_den matching omega to 1e-12, if any.
std::optional<std::pair<long, long>> rational_frequency(double omega, long max_den = 64);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Largest N <= target with N = k + 1 (mod den).
std::size_t residue_length(std::size_t target, long k, long den);

/// Fitted constants reported by the bounds experiment at one N. The envelope
/// constant uses the fixed-step scheme, the rest the discretized one.
struct BoundConstants {
  double envelope_C = 0.0;  // max_j |rho_j| / envelope(j)
  double z_C2 = 0.0;        // N max|Z| / |delta|
  double bh = 0.0;          // max|B H| / N
  double s0b = 0.0;         // N^2 max|S0 B|
  double bs0e = 0.0;        // N^2 max|B S0 E|
  double pe = 0.0;          // N max|P0perp E|
};
BoundConstants bound_constants(const ModelParams& base, std::size_t N, double alpha);

/// Single numeric column, optional header line.
std::vector<double> read_series_csv(const std::filesystem::path& path);
/// Rank-r SSA: embed, keep the top `rank` left singular directions, hankelize.
std::vector<double> ssa_reconstruct(const std::vector<double>& series, std::size_t L, std::size_t rank);
/// Writes index,original,reconstructed,residual and returns the reconstruction.
std::vector<double> reconstruct_csv(const std::filesystem::path& input, std::size_t L, std::size_t rank,
                                    const std::filesystem::path& output);

}  // namespace ssalab
