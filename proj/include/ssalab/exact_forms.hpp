#pragma once

#include <complex>
#include <cstddef>

#include "ssalab/hankel_core.hpp"
#include "ssalab/series_models.hpp"

namespace ssalab {

/// Complex number stored as mantissa * exp(log_scale). Products of
/// geometric sums with bases like a^N stay representable this way.
struct ScaledComplex {
  std::complex<double> mantissa{0.0, 0.0};
  double log_scale = 0.0;

  ScaledComplex() = default;
  ScaledComplex(std::complex<double> m, double ls = 0.0);

  ScaledComplex operator*(const ScaledComplex& o) const;
  ScaledComplex operator/(const ScaledComplex& o) const;
  ScaledComplex scaled(double log_factor) const { return {mantissa, log_scale + log_factor}; }

  double real() const;
  double abs() const;
  std::complex<double> value() const;
};

/// exp(i * angle) with the angle reduced first.
ScaledComplex unit_phasor(double angle);

/// sum_{i = first}^{first + count - 1} w^i for w = exp(log_r + i theta).
ScaledComplex geometric_phasor_sum(double log_r, double theta, double first, std::size_t count);

/// log(expm1(x)) for x > 0, without overflow for large x.
double log_expm1(double x);

/// The vector (1, r, ..., r^(M-1)) with r = exp(log_r) > 1.
class GeometricVector {
 public:
  GeometricVector(double r, std::size_t M);
  static GeometricVector from_log_base(double log_r, std::size_t M);

  std::size_t size() const { return M_; }
  double base() const { return std::exp(log_r_); }
  double log_base() const { return log_r_; }

  /// (r^(2M) - 1) / (r^2 - 1); may be inf for huge M (use log_norm_sq).
  double norm_sq() const { return std::exp(log_norm_sq_); }
  double log_norm_sq() const { return log_norm_sq_; }

  /// Raw entries r^i.
  Vector entries() const;
  /// Entries divided by the norm, computed in log space.
  Vector unit() const;

 private:
  GeometricVector(double log_r, std::size_t M, int);
  double log_r_;
  std::size_t M_;
  double log_norm_sq_;
};

/// sum_{j<M} b^j cos(xi j + psi), O(1) closed form.
double phi_closed(double b, double psi, std::size_t M, double xi);
/// The same sum evaluated term by term.
double phi_direct(double b, double psi, std::size_t M, double xi);
/// sup over psi of |phi_closed(b, psi, M, xi)|: the modulus of sum (b e^{i xi})^j.
double phi_amplitude(double b, std::size_t M, double xi);

/// sum_{j<Tn} b^j Phi_M(b, xi j + psi), as a sum of closed-form Phi values.
double upsilon(double b, double psi, std::size_t Tn, std::size_t M, double xi);
/// Nested term-by-term summation of the same double sum.
double upsilon_direct(double b, double psi, std::size_t Tn, std::size_t M, double xi);

/// sum_{j<M} cos(xi (j + k) + psi) cos(xi (j + l) + psi).
double psi_sum(double psi, long k, long l, std::size_t M, double xi);

/// Leading eigenvalue of H H^T for the pure signal: |W_L|^2 |W_K|^2.
double mu_closed(const ModelParams& p);
double log_mu(const ModelParams& p);

}  // namespace ssalab
