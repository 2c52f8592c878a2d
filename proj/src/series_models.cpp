#include "ssalab/series_models.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "ssalab/errors.hpp"

namespace ssalab {

const char* to_string(Scheme s) {
  return s == Scheme::FixedStep ? "fixed" : "discretized";
}

Scheme scheme_from_string(const char* name) {
  if (std::strcmp(name, "fixed") == 0) return Scheme::FixedStep;
  if (std::strcmp(name, "discretized") == 0) return Scheme::Discretized;
  throw InvalidArgument(std::string("unknown scheme '") + name + "'");
}

double ModelParams::xi() const { return 2.0 * std::numbers::pi * omega; }

double ModelParams::log_base() const {
  const double la = std::log(a);
  return scheme == Scheme::FixedStep ? la : la * T / static_cast<double>(N);
}

double ModelParams::base() const {
  return scheme == Scheme::FixedStep ? a : std::exp(log_base());
}

void ModelParams::validate_series() const {
  if (!(a > 1.0)) throw InvalidArgument("a must exceed 1");
  if (!(omega > 0.0 && omega < 0.5)) throw InvalidArgument("omega must lie in (0, 1/2)");
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) throw InvalidArgument("phi must lie in [0, 2pi)");
  if (!std::isfinite(delta)) throw InvalidArgument("delta must be finite");
  if (N < 1) throw InvalidArgument("N must be positive");
  if (scheme == Scheme::Discretized && !(T > 0.0)) throw InvalidArgument("T must be positive");
}

void ModelParams::validate() const {
  validate_series();
  if (L < 2 || L + 1 > N)
    throw InvalidArgument("window must satisfy L > 1 and K = N - L + 1 > 1 (L=" + std::to_string(L) +
                          ", N=" + std::to_string(N) + ")");
}

void check_overflow_guard(const ModelParams& p) {
  if (p.scheme == Scheme::FixedStep && static_cast<double>(p.N) * std::log(p.a) > kOverflowGuardLog)
    throw NumericalFailure("overflow guard: N ln a = " +
                           std::to_string(static_cast<double>(p.N) * std::log(p.a)) + " exceeds " +
                           std::to_string(kOverflowGuardLog));
}

std::vector<double> signal(const ModelParams& p) {
  p.validate_series();
  check_overflow_guard(p);
  std::vector<double> x(p.N);
  const double n_total = static_cast<double>(p.N);
  for (std::size_t n = 0; n < p.N; ++n) {
    const double dn = static_cast<double>(n);
    // (n T) / N rather than n (T / N): identical to the FixedStep grid when T == N.
    x[n] = p.scheme == Scheme::FixedStep ? std::pow(p.a, dn) : std::pow(p.a, dn * p.T / n_total);
  }
  return x;
}

std::vector<double> noise(const ModelParams& p) {
  p.validate_series();
  std::vector<double> e(p.N);
  const double xi = p.xi();
  for (std::size_t n = 0; n < p.N; ++n) e[n] = std::cos(phase(static_cast<double>(n), xi, p.phi));
  return e;
}

std::vector<double> perturbed(const ModelParams& p) {
  auto f = signal(p);
  const auto e = noise(p);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] += p.delta * e[n];
  return f;
}

std::size_t window_from_ratio(std::size_t N, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const auto L = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(N)));
  if (L <= 1 || L + 1 >= N)
    throw InvalidArgument("floor(alpha N) = " + std::to_string(L) + " violates 1 < L < N - 1");
  return L;
}

ModelParams fig2_params(std::size_t N, Scheme scheme) {
  ModelParams p;
  p.scheme = scheme;
  p.a = 1.05;
  p.T = 1.0;
  p.delta = 0.1;
  p.omega = 2.0 / 9.0;
  p.phi = 0.0;
  p.N = N;
  p.L = window_from_ratio(N, 0.35);
  return p;
}

double wrap_angle(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

double phase(double n, double xi, double phi) {
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  const long double v = static_cast<long double>(n) * static_cast<long double>(xi) +
                        static_cast<long double>(phi);
  return static_cast<double>(std::remainder(v, two_pi));
}

}  // namespace ssalab
