#pragma once

#include <cstddef>

#include "ssalab/hankel_core.hpp"
#include "ssalab/series_models.hpp"

namespace ssalab {

/// Exact unperturbed subspace data in rank-1 factored form. Norms are kept
/// as logarithms because |W_L|^2 |W_K|^2 overflows for long FixedStep series.
struct SubspaceSet {
  Vector w_hat;  // W_L / |W_L|, spans the signal column space
  Vector v_hat;  // W_K / |W_K|, the matching right singular vector
  double log_norm_sq_L = 0.0;
  double log_norm_sq_K = 0.0;

  double log_mu() const { return log_norm_sq_L + log_norm_sq_K; }
  double mu() const { return std::exp(log_mu()); }
  double norm_sq_L() const { return std::exp(log_norm_sq_L); }
  double norm_sq_K() const { return std::exp(log_norm_sq_K); }
  /// sigma_1 of the signal trajectory matrix, sqrt(mu).
  double scale() const { return std::exp(0.5 * log_mu()); }

  RowMatrix p0_perp() const;  // w_hat w_hat^T
  RowMatrix p0() const;       // I - w_hat w_hat^T
  RowMatrix s0() const;       // w_hat w_hat^T / mu
};

SubspaceSet exact_projectors(const ModelParams& p);

/// Leading left singular vector u1 of H(delta) = H + delta E.
/// `transverse` is P0 u1 computed without cancellation; it carries the
/// projection gap when u1 is within rounding of w_hat.
struct PerturbedProjector {
  Vector u1;
  Vector transverse;
  double sigma1 = 0.0;
  std::size_t iterations = 0;

  RowMatrix p0_perp_delta() const { return u1 * u1.transpose(); }
};

/// Power iteration in coordinates u = w_hat + y, y orthogonal to w_hat,
/// applied to the unassembled H(delta) = s w_hat v_hat^T + delta E.
/// Falls back to the dense route when the noise dominates and u1 is far
/// from w_hat.
PerturbedProjector perturbed_projector(const ModelParams& p);
/// Power iteration on embed(perturbed(p)). Limited by the rounding of
/// a^n + delta cos(...) for long FixedStep series.
PerturbedProjector perturbed_projector_dense(const ModelParams& p);

/// sin of the angle between span(w_hat) and span(u1).
double projection_gap(const SubspaceSet& s, const PerturbedProjector& pp);
/// The same quantity for any two unit vectors.
double projection_gap(const Vector& w, const Vector& u);

/// Linear term of the projector expansion, V0 = (q w^T + w q^T) / s with
/// q = P0 E v_hat and s = sqrt(mu). It does not depend on delta.
struct FirstOrderTerm {
  Vector w_hat;
  Vector q;
  double log_scale = 0.0;  // log s

  double norm() const { return q.norm() * std::exp(-log_scale); }
  /// |delta V0| without forming 1/s separately.
  double scaled_norm(double delta) const;
  RowMatrix dense() const;
  /// V0 H, which equals q v_hat^T.
  RowMatrix times_signal(const SubspaceSet& s) const;
};

FirstOrderTerm v0_first_order(const ModelParams& p);

/// |P0perp(delta) - P0perp - delta V0| evaluated in the span of w_hat, y, q.
double first_order_residual(const PerturbedProjector& pp, const SubspaceSet& s, const FirstOrderTerm& v0,
                            double delta);

/// FixedStep limit of (a^N / sqrt N) times the projection gap.
double projection_gap_limit(const ModelParams& p);

/// B(delta) = delta (H E^T + E H^T) + delta^2 E E^T. Everything here is
/// returned divided by mu, with t = delta / s, so no entry overflows:
///   B / mu = t (w ev^T + ev w^T) + t^2 E E^T,  ev = E v_hat.
class BOperator {
 public:
  explicit BOperator(const ModelParams& p);

  const SubspaceSet& subspace() const { return sub_; }
  double delta() const { return delta_; }
  double t() const { return t_; }
  const Vector& ev() const { return ev_; }

  Vector apply_normalized(const Vector& x) const;  // B x / mu
  RowMatrix dense_normalized() const;              // B / mu
  RowMatrix a1_over_scale() const;                 // A1 / s = w ev^T + ev w^T
  RowMatrix a2() const;                            // E E^T
  /// P0 B w_hat / mu; |S0 B P0| equals its norm.
  Vector compressed_column() const;
  /// B w_hat / mu; |S0 B| equals its norm.
  Vector column() const;
  /// |B| / mu.
  double norm_normalized() const;

 private:
  ModelParams params_;
  SubspaceSet sub_;
  HankelOperator noise_;
  double delta_, t_;
  Vector ev_;
};

/// Z = P0 B(delta) P0 / mu = t^2 P0 E E^T P0.
RowMatrix z_matrix(const ModelParams& p);

/// L(delta) = w c^T + c w^T, where c = (I - Z)^{-1} P0 B w_hat / mu.
struct LDeltaTerm {
  Vector w_hat;
  Vector c;
  double z_norm = 0.0;
  double solve_residual = 0.0;
  RowMatrix dense() const { return w_hat * c.transpose() + c * w_hat.transpose(); }
};

/// Throws NumericalFailure if |Z| >= 1 or the solve residual exceeds 1e-12.
LDeltaTerm l_delta(const ModelParams& p);

/// |P0perp(delta) - P0perp - L(delta)|.
double l_delta_residual(const PerturbedProjector& pp, const SubspaceSet& s, const LDeltaTerm& l);

/// Right-hand sides of the two general projector inequalities.
struct ProjectorBounds {
  double b_norm = 0.0;      // |B| / mu
  double s0b_norm = 0.0;    // |S0 B|
  double s0bp0_norm = 0.0;  // |S0 B P0|
  bool applicable = false;  // |B| / mu < 1/4
  double gap_bound = 0.0;   // 4 C |S0 B P0| / (1 - 4 |B| / mu)
  double l_delta_bound = 0.0;  // 16 C |S0 B| |S0 B P0| / (1 - 4 |B| / mu)
};

/// C = e^{1/6} / sqrt(pi).
double projector_bound_constant();
ProjectorBounds projector_bounds(const ModelParams& p);

/// Largest delta0 with delta0 |A1| + delta0^2 |A2| = mu / 4.
double delta_zero(const ModelParams& p);

/// Largest-modulus eigenvalue of a dense symmetric matrix.
double symmetric_norm(const RowMatrix& m);

}  // namespace ssalab
