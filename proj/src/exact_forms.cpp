#include "ssalab/exact_forms.hpp"

#include <cmath>

#include "ssalab/errors.hpp"

namespace ssalab {

namespace {

// exp(x + i theta) - 1 without cancellation for small x and theta.
std::complex<double> cexpm1(double x, double theta) {
  const double s = std::sin(0.5 * theta);
  return {std::expm1(x) * std::cos(theta) - 2.0 * s * s, std::exp(x) * std::sin(theta)};
}

}  // namespace

ScaledComplex::ScaledComplex(std::complex<double> m, double ls) : mantissa(m), log_scale(ls) {
  const double mag = std::abs(m);
  if (mag > 0.0 && std::isfinite(mag)) {
    const double lm = std::log(mag);
    mantissa /= mag;
    log_scale += lm;
  }
}

ScaledComplex ScaledComplex::operator*(const ScaledComplex& o) const {
  return {mantissa * o.mantissa, log_scale + o.log_scale};
}

ScaledComplex ScaledComplex::operator/(const ScaledComplex& o) const {
  return {mantissa / o.mantissa, log_scale - o.log_scale};
}

double ScaledComplex::real() const { return mantissa.real() * std::exp(log_scale); }
double ScaledComplex::abs() const { return std::abs(mantissa) * std::exp(log_scale); }
std::complex<double> ScaledComplex::value() const { return mantissa * std::exp(log_scale); }

ScaledComplex unit_phasor(double angle) {
  const double a = wrap_angle(angle);
  return {std::complex<double>(std::cos(a), std::sin(a)), 0.0};
}

ScaledComplex geometric_phasor_sum(double log_r, double theta, double first, std::size_t count) {
  if (count == 0) return {};
  const double n = static_cast<double>(count);
  const auto lead = unit_phasor(phase(first, theta, 0.0)).scaled(first * log_r);
  const auto denom = cexpm1(log_r, wrap_angle(theta));
  if (std::abs(denom) == 0.0) return lead * ScaledComplex(n);
  const double n_theta = phase(n, theta, 0.0);
  if (log_r > 0.0 && n * log_r > 1.0) {
    // w^n dominates: factor it out so nothing overflows.
    const std::complex<double> tail =
        std::complex<double>(std::cos(n_theta), std::sin(n_theta)) - std::exp(-n * log_r);
    return lead * ScaledComplex(tail / denom, n * log_r);
  }
  return lead * ScaledComplex(cexpm1(n * log_r, n_theta) / denom);
}

double log_expm1(double x) {
  if (!(x > 0.0)) throw InvalidArgument("log_expm1 needs x > 0");
  return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

GeometricVector::GeometricVector(double log_r, std::size_t M, int)
    : log_r_(log_r), M_(M), log_norm_sq_(0.0) {
  if (!(log_r_ > 0.0) || !std::isfinite(log_r_)) throw InvalidArgument("geometric base must exceed 1");
  if (M_ == 0) throw InvalidArgument("geometric vector needs M >= 1");
  log_norm_sq_ = log_expm1(2.0 * static_cast<double>(M_) * log_r_) - log_expm1(2.0 * log_r_);
}

GeometricVector::GeometricVector(double r, std::size_t M) : GeometricVector(std::log(r), M, 0) {}

GeometricVector GeometricVector::from_log_base(double log_r, std::size_t M) { return {log_r, M, 0}; }

Vector GeometricVector::entries() const {
  Vector v(static_cast<Eigen::Index>(M_));
  for (std::size_t i = 0; i < M_; ++i) v(static_cast<Eigen::Index>(i)) = std::exp(static_cast<double>(i) * log_r_);
  return v;
}

Vector GeometricVector::unit() const {
  Vector v(static_cast<Eigen::Index>(M_));
  const double half = 0.5 * log_norm_sq_;
  for (std::size_t i = 0; i < M_; ++i)
    v(static_cast<Eigen::Index>(i)) = std::exp(static_cast<double>(i) * log_r_ - half);
  return v;
}

double phi_closed(double b, double psi, std::size_t M, double xi) {
  const double m = static_cast<double>(M);
  const double bm = std::pow(b, m);
  const double num = bm * b * std::cos(phase(m - 1.0, xi, psi)) - bm * std::cos(phase(m, xi, psi)) -
                     b * std::cos(wrap_angle(xi - psi)) + std::cos(wrap_angle(psi));
  return num / (b * b + 1.0 - 2.0 * b * std::cos(xi));
}

double phi_direct(double b, double psi, std::size_t M, double xi) {
  double sum = 0.0, bj = 1.0;
  for (std::size_t j = 0; j < M; ++j, bj *= b) sum += bj * std::cos(phase(static_cast<double>(j), xi, psi));
  return sum;
}

double phi_amplitude(double b, std::size_t M, double xi) {
  return geometric_phasor_sum(std::log(b), xi, 0.0, M).abs();
}

double upsilon(double b, double psi, std::size_t Tn, std::size_t M, double xi) {
  double sum = 0.0, bj = 1.0;
  for (std::size_t j = 0; j < Tn; ++j, bj *= b)
    sum += bj * phi_closed(b, phase(static_cast<double>(j), xi, psi), M, xi);
  return sum;
}

double upsilon_direct(double b, double psi, std::size_t Tn, std::size_t M, double xi) {
  double sum = 0.0, bj = 1.0;
  for (std::size_t j = 0; j < Tn; ++j, bj *= b)
    sum += bj * phi_direct(b, phase(static_cast<double>(j), xi, psi), M, xi);
  return sum;
}

double psi_sum(double psi, long k, long l, std::size_t M, double xi) {
  double sum = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const double dj = static_cast<double>(j);
    sum += std::cos(phase(dj + static_cast<double>(k), xi, psi)) *
           std::cos(phase(dj + static_cast<double>(l), xi, psi));
  }
  return sum;
}

double log_mu(const ModelParams& p) {
  p.validate();
  check_overflow_guard(p);
  const double lr = p.log_base();
  return GeometricVector::from_log_base(lr, p.L).log_norm_sq() +
         GeometricVector::from_log_base(lr, p.K()).log_norm_sq();
}

double mu_closed(const ModelParams& p) {
  const double mu = std::exp(log_mu(p));
  if (!std::isfinite(mu)) throw NumericalFailure("mu exceeds the double range; use log_mu");
  return mu;
}

}  // namespace ssalab
