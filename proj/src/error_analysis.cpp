#include "ssalab/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ssalab/errors.hpp"
#include "ssalab/exact_forms.hpp"
#include "ssalab/hankel_core.hpp"
#include "ssalab/kernels.hpp"
#include "ssalab/perturbation.hpp"

namespace ssalab {

namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void add_outer_hankelized(const Vector& a, const Vector& b, std::vector<double>& acc) {
  std::vector<double> tmp(acc.size());
  kernels::outer_hankelize(view(a), view(b), tmp);
  for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += tmp[j];
}

}  // namespace

const char* to_string(ErrorMethod m) {
  switch (m) {
    case ErrorMethod::Exact: return "exact";
    case ErrorMethod::Direct: return "direct";
    case ErrorMethod::MainTerm: return "main_term";
  }
  return "?";
}

double ErrorSeries::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

ErrorSeries reconstruction_errors(const ModelParams& p) {
  const SubspaceSet sub = exact_projectors(p);
  const PerturbedProjector pp = perturbed_projector(p);
  const HankelOperator E(noise(p), p.L);
  const double s = sub.scale();
  if (!std::isfinite(s)) throw NumericalFailure("signal scale overflows");
  const double d = p.delta;
  const Vector& w = sub.w_hat;
  const Vector& tau = pp.transverse;
  const double tau_sq = tau.squaredNorm();
  const double gamma = std::sqrt(std::max(0.0, 1.0 - tau_sq));
  const Vector Etw = E.apply_t(w);
  const Vector Ettau = E.apply_t(tau);

  // With u1 = gamma w + tau:
  //   w   x [gamma d E^T tau - |tau|^2 (s v + d E^T w) + d E^T w]
  //   tau x [gamma (s v + d E^T w) + d E^T tau]
  const Vector r_w = (gamma * d) * Ettau - (tau_sq * s) * sub.v_hat + (d * (1.0 - tau_sq)) * Etw;
  const Vector r_tau = (gamma * d) * Etw + d * Ettau;

  ErrorSeries out{std::vector<double>(p.N, 0.0), p, d, ErrorMethod::Exact};
  add_outer_hankelized(w, r_w, out.values);
  add_outer_hankelized(Vector((gamma * s) * tau), sub.v_hat, out.values);
  add_outer_hankelized(tau, r_tau, out.values);
  return out;
}

ErrorSeries reconstruction_errors_direct(const ModelParams& p) {
  p.validate();
  const auto x = signal(p);
  const TrajectoryMatrix M = embed(perturbed(p), p.L);
  const SingularPair sp = dominant_left_singular(M);
  Vector row(static_cast<Eigen::Index>(M.cols()));
  kernels::dense_apply_t(M.data(), M.rows(), M.cols(), view(sp.u), {row.data(), M.cols()});
  ErrorSeries out{std::vector<double>(p.N), p, p.delta, ErrorMethod::Direct};
  kernels::outer_hankelize(view(sp.u), view(row), out.values);
  for (std::size_t j = 0; j < p.N; ++j) out.values[j] -= x[j];
  return out;
}

std::vector<double> rho_series(const ModelParams& p) {
  p.validate();
  check_overflow_guard(p);
  const std::size_t N = p.N, L = p.L, K = p.K();
  const double lr = p.log_base();
  const double xi = p.xi();
  const double lnL = GeometricVector::from_log_base(lr, L).log_norm_sq();
  const double lnK = GeometricVector::from_log_base(lr, K).log_norm_sq();

  // G_M = sum_{m<M} (r e^{i xi})^m.
  const ScaledComplex GL = geometric_phasor_sum(lr, xi, 0.0, L);
  const ScaledComplex GK = geometric_phasor_sum(lr, xi, 0.0, K);
  const ScaledComplex eiphi = unit_phasor(p.phi);
  // Common factors of the three anti-diagonal sums.
  const ScaledComplex left = GL.scaled(-lnL);
  const ScaledComplex right = (eiphi * GK).scaled(-lnK);
  const ScaledComplex cross = (eiphi * GK * GL).scaled(-lnL - lnK);

  std::vector<double> rho(N);
  for (std::size_t j = 0; j < N; ++j) {
    const std::size_t lo = j + 1 > K ? j + 1 - K : 0;
    const std::size_t hi = std::min(j, L - 1);
    const std::size_t count = hi - lo + 1;
    const double dj = static_cast<double>(j);
    const double n_j = static_cast<double>(count);
    // w w^T E:  (1/n_j) Re(e^{i(j xi + phi)} G_L / |W_L|^2 sum_i (r e^{-i xi})^i)
    const ScaledComplex j1 =
        unit_phasor(phase(dj, xi, p.phi)) * left * geometric_phasor_sum(lr, -xi, static_cast<double>(lo), count);
    // E v v^T:  (1/n_j) Re(e^{i phi} G_K r^j / |W_K|^2 sum_i (e^{i xi} / r)^i)
    const ScaledComplex j2 =
        (right * geometric_phasor_sum(-lr, xi, static_cast<double>(lo), count)).scaled(dj * lr);
    // w w^T E v v^T:  Re(e^{i phi} G_K G_L) r^j / (|W_L|^2 |W_K|^2)
    const double j3 = cross.scaled(dj * lr).real();
    rho[j] = (j1.real() + j2.real()) / n_j - j3;
  }
  return rho;
}

std::vector<double> rho_series_dense(const ModelParams& p) {
  const SubspaceSet sub = exact_projectors(p);
  const HankelOperator E(noise(p), p.L);
  const Vector& w = sub.w_hat;
  Vector q = E.apply(sub.v_hat);
  q -= w * w.dot(q);
  std::vector<double> rho(p.N, 0.0);
  add_outer_hankelized(q, sub.v_hat, rho);
  add_outer_hankelized(w, E.apply_t(w), rho);
  return rho;
}

ErrorSeries main_term_errors(const ModelParams& p) {
  ErrorSeries out{rho_series(p), p, p.delta, ErrorMethod::MainTerm};
  for (double& v : out.values) v *= p.delta;
  return out;
}

double rho_bound_envelope(const ModelParams& p, std::size_t j) {
  p.validate();
  if (j >= p.N) throw InvalidArgument("rho_bound_envelope: index out of range");
  const double lr = p.log_base();
  const double dj = static_cast<double>(j);
  if (j < p.L) return std::exp(-(static_cast<double>(p.L) - dj) * lr) / (dj + 1.0);
  if (j < p.K()) return 1.0 / static_cast<double>(p.L);
  const double tail = static_cast<double>(p.N) - dj;
  return 1.0 / tail + std::exp(-tail * lr);
}

double fit_envelope_constant(const ModelParams& p, const std::vector<double>& rho) {
  double c = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) c = std::max(c, std::abs(rho[j]) / rho_bound_envelope(p, j));
  return c;
}

TailCoefficients tail_coefficients(const ModelParams& p, std::size_t ell) {
  if (p.scheme != Scheme::FixedStep) throw InvalidArgument("tail coefficients are defined for the fixed-step scheme");
  p.validate_series();
  const double a = p.a, xi = p.xi();
  const double l = static_cast<double>(ell);
  const double cx = std::cos(xi), sx = std::sin(xi);
  const double q = a * a + 1.0 - 2.0 * a * cx;
  const double a_l = std::pow(a, -l);
  TailCoefficients tc;
  tc.ell = ell;
  tc.G = (a * a - 1.0) / (a * q);
  tc.C1 = 2.0 / (1.0 + l) * (a * std::cos(phase(l, xi, 0.0)) - a_l * cx) - (q - 2.0 * sx * sx) * tc.G * a_l;
  tc.C2 = 2.0 / (1.0 + l) * (a * std::sin(phase(l, xi, 0.0)) + a_l * sx) - 2.0 * sx * (a - cx) * tc.G * a_l;
  const double R = std::hypot(tc.C1, tc.C2);
  tc.D = tc.G * R;
  const double branch = std::acos(std::clamp(tc.C2 / R, -1.0, 1.0));
  tc.phi1 = (tc.C1 < 0.0 ? -branch : branch) + p.phi;
  return tc;
}

double tail_predictor(const TailCoefficients& tc, double xi, std::size_t N) {
  if (N < 1) throw InvalidArgument("tail_predictor needs N >= 1");
  return tc.D * std::sin(phase(static_cast<double>(N - 1), xi, tc.phi1));
}

double tail_predictor(const ModelParams& p, std::size_t ell, std::size_t N) {
  return tail_predictor(tail_coefficients(p, ell), p.xi(), N);
}

std::vector<double> rational_limit_points(long num, long den, std::size_t ell, const ModelParams& p) {
  if (num <= 0 || den <= 0 || std::gcd(num, den) != 1 || 2 * num >= den)
    throw InvalidArgument("rational_limit_points: need coprime num/den in (0, 1/2)");
  ModelParams q = p;
  q.omega = static_cast<double>(num) / static_cast<double>(den);
  const TailCoefficients tc = tail_coefficients(q, ell);
  std::vector<double> out(static_cast<std::size_t>(den));
  for (long k = 0; k < den; ++k) {
    // (N - 1) xi = 2 pi (m num + k num / den) along N = m den + k + 1.
    const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * num) % den) / static_cast<double>(den);
    out[static_cast<std::size_t>(k)] = tc.D * std::sin(wrap_angle(angle + tc.phi1));
  }
  return out;
}

double arcsine_density(double D, double z) {
  if (!(D > 0.0)) throw InvalidArgument("arcsine law needs D > 0");
  if (!(std::abs(z) < D)) return 0.0;
  return 1.0 / (std::numbers::pi * std::sqrt((D - z) * (D + z)));
}

double arcsine_cdf(double D, double z) {
  if (!(D > 0.0)) throw InvalidArgument("arcsine law needs D > 0");
  if (z <= -D) return 0.0;
  if (z >= D) return 1.0;
  return 0.5 + std::asin(z / D) / std::numbers::pi;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("ks_distance needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

std::vector<std::vector<double>> single_linkage_clusters(std::vector<double> values, double threshold) {
  std::sort(values.begin(), values.end());
  std::vector<std::vector<double>> clusters;
  for (double v : values) {
    if (clusters.empty() || v - clusters.back().back() > threshold) clusters.emplace_back();
    clusters.back().push_back(v);
  }
  return clusters;
}

}  // namespace ssalab
