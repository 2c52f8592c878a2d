#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ssalab/series_models.hpp"

namespace ssalab {

enum class ErrorMethod { Exact, Direct, MainTerm };
const char* to_string(ErrorMethod m);

/// Reconstruction errors r_0..r_{N-1} of rank-1 SSA applied to the
/// perturbed series, with the parameters that produced them.
struct ErrorSeries {
  std::vector<double> values;
  ModelParams params;
  double delta = 0.0;
  ErrorMethod method = ErrorMethod::Exact;

  double max_abs() const;
};

/// Hankelized (P0perp(delta) - P0perp) H(delta) + delta P0perp E, assembled
/// from the split-coordinate projector. Accurate for long FixedStep series.
ErrorSeries reconstruction_errors(const ModelParams& p);
/// hankelize(u1 u1^T embed(perturbed)) - signal, u1 from power iteration
/// on the assembled trajectory matrix.
ErrorSeries reconstruction_errors_direct(const ModelParams& p);

/// Main term: rho = S(P0 E H^T S0 H) + S(P0perp E), from O(1)-per-entry
/// closed forms. r_j = delta rho_j + (higher order).
std::vector<double> rho_series(const ModelParams& p);
/// Same quantity from explicit rank-1 factors and diagonal averaging.
std::vector<double> rho_series_dense(const ModelParams& p);
ErrorSeries main_term_errors(const ModelParams& p);

/// Piecewise envelope for |rho_j| without its constant:
///   r^{-(L-j)}/(j+1) for j < L,  1/L for L <= j < K,  1/(N-j) + r^{-(N-j)} otherwise.
double rho_bound_envelope(const ModelParams& p, std::size_t j);
/// max_j |rho_j| / envelope(j).
double fit_envelope_constant(const ModelParams& p, const std::vector<double>& rho);

struct TailCoefficients {
  std::size_t ell = 0;
  double G = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double D = 0.0;
  double phi1 = 0.0;
};

/// Coefficients of the limiting oscillation of r_{N-1-ell} / delta. FixedStep only.
TailCoefficients tail_coefficients(const ModelParams& p, std::size_t ell);
/// F_N(ell) = D sin((N - 1) xi + phi1).
double tail_predictor(const TailCoefficients& tc, double xi, std::size_t N);
double tail_predictor(const ModelParams& p, std::size_t ell, std::size_t N);

/// For omega = num / den: the den limits of r_{N-1-ell} / delta along N = m den + k + 1.
std::vector<double> rational_limit_points(long num, long den, std::size_t ell, const ModelParams& p);

/// Arcsine law on [-D, D].
double arcsine_density(double D, double z);
double arcsine_cdf(double D, double z);

/// Kolmogorov-Smirnov sup distance between the empirical cdf of `samples` and `cdf`.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Single-linkage clusters of real values: sorted values split wherever
/// consecutive gaps exceed `threshold`.
std::vector<std::vector<double>> single_linkage_clusters(std::vector<double> values, double threshold);

}  // namespace ssalab
