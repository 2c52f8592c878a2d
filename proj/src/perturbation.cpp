#include "ssalab/perturbation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ssalab/errors.hpp"
#include "ssalab/exact_forms.hpp"

namespace ssalab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Vector project_out(const Vector& x, const Vector& w) { return x - w * w.dot(x); }

// Spectral norm of  w d^T + d w^T + tau tau^T - |tau|^2 w w^T  with d and tau
// orthogonal to the unit vector w. The matrix acts on span{w, d, tau}.
double split_residual_norm(const Vector& d, const Vector& tau) {
  const double nd = d.norm();
  const double tau_sq = tau.squaredNorm();
  Vector e2;
  if (nd > 0.0)
    e2 = d / nd;
  else if (tau_sq > 0.0)
    e2 = tau / std::sqrt(tau_sq);
  else
    return 0.0;
  const double alpha = tau.dot(e2);
  const double beta = (tau - alpha * e2).norm();
  Eigen::Matrix3d m;
  m << -tau_sq, nd, 0.0,
       nd, alpha * alpha, alpha * beta,
       0.0, alpha * beta, beta * beta;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Residual for a term of the form w x^T + x w^T.
double rank_two_residual(const PerturbedProjector& pp, const SubspaceSet& s, const Vector& x) {
  const Vector& tau = pp.transverse;
  const double gamma = std::sqrt(std::max(0.0, 1.0 - tau.squaredNorm()));
  return split_residual_norm(gamma * tau - project_out(x, s.w_hat), tau);
}

HankelOperator noise_operator(const ModelParams& p) { return HankelOperator(noise(p), p.L); }

}  // namespace

RowMatrix SubspaceSet::p0_perp() const { return w_hat * w_hat.transpose(); }

RowMatrix SubspaceSet::p0() const {
  const auto n = w_hat.size();
  return RowMatrix::Identity(n, n) - w_hat * w_hat.transpose();
}

RowMatrix SubspaceSet::s0() const { return (w_hat * w_hat.transpose()) * std::exp(-log_mu()); }

SubspaceSet exact_projectors(const ModelParams& p) {
  p.validate();
  check_overflow_guard(p);
  const double lr = p.log_base();
  const auto gL = GeometricVector::from_log_base(lr, p.L);
  const auto gK = GeometricVector::from_log_base(lr, p.K());
  return {gL.unit(), gK.unit(), gL.log_norm_sq(), gK.log_norm_sq()};
}

namespace {

// Power iteration normalized by w_hat . u = 1. Fails when u1 is nearly
// orthogonal to w_hat, i.e. when the noise dominates the signal.
PerturbedProjector split_iteration(const ModelParams& p) {
  const SubspaceSet sub = exact_projectors(p);
  const HankelOperator E = noise_operator(p);
  const double t = p.delta * std::exp(-0.5 * sub.log_mu());
  const Vector& w = sub.w_hat;
  const Vector ev = E.apply(sub.v_hat);
  const Vector ew = E.apply_t(w);
  const Vector p0_ev = project_out(ev, w);

  constexpr std::size_t kMaxIter = 10000;
  Vector y = Vector::Zero(w.size());
  double lambda = 1.0;
  double prev_diff = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (it = 1; it <= kMaxIter; ++it) {
    const Vector Etu = ew + E.apply_t(y);
    const Vector EEtu = E.apply(Etu);
    // g = v_hat + t E^T u,  E g = ev + t E E^T u.
    const double vg = 1.0 + t * sub.v_hat.dot(Etu);
    const double wEg = w.dot(ev) + t * w.dot(EEtu);
    lambda = vg + t * wEg;
    const Vector y_new = (t / lambda) * (p0_ev + t * project_out(EEtu, w));
    const double diff = (y_new - y).norm();
    const double ny = y_new.norm();
    y = y_new;
    if (diff <= 1e-14 * ny || ny == 0.0) break;
    if (it > 20 && diff >= prev_diff) {
      // Rounding floor reached; accept only if it is tight.
      if (diff <= 1e3 * kEps * ny) break;
      throw NumericalFailure("perturbed_projector: iteration stagnated at relative step " +
                             std::to_string(diff / ny));
    }
    prev_diff = diff;
  }
  if (it > kMaxIter) throw NumericalFailure("perturbed_projector: no convergence");
  if (!(lambda > 0.0)) throw NumericalFailure("perturbed_projector: non-positive eigenvalue estimate");

  const double inv = 1.0 / std::sqrt(1.0 + y.squaredNorm());
  PerturbedProjector out;
  out.u1 = (w + y) * inv;
  out.transverse = y * inv;
  out.sigma1 = std::exp(0.5 * sub.log_mu()) * std::sqrt(lambda);
  out.iterations = it;
  return out;
}

}  // namespace

PerturbedProjector perturbed_projector(const ModelParams& p) {
  try {
    return split_iteration(p);
  } catch (const NumericalFailure&) {
    return perturbed_projector_dense(p);
  }
}

PerturbedProjector perturbed_projector_dense(const ModelParams& p) {
  const SubspaceSet sub = exact_projectors(p);
  const auto sp = dominant_left_singular(embed(perturbed(p), p.L));
  PerturbedProjector out;
  out.u1 = sp.u;
  if (out.u1.dot(sub.w_hat) < 0.0) out.u1 = -out.u1;
  out.transverse = project_out(out.u1, sub.w_hat);
  out.sigma1 = sp.sigma;
  out.iterations = sp.iterations;
  return out;
}

double projection_gap(const SubspaceSet& s, const PerturbedProjector& pp) {
  if (pp.transverse.size() != s.w_hat.size()) throw InvalidArgument("projection_gap: dimension mismatch");
  return pp.transverse.norm();
}

double projection_gap(const Vector& w, const Vector& u) {
  if (w.size() != u.size()) throw InvalidArgument("projection_gap: dimension mismatch");
  const Vector wn = w.normalized(), un = u.normalized();
  return std::min(1.0, project_out(un, wn).norm());
}

double FirstOrderTerm::scaled_norm(double delta) const {
  return std::abs(delta) * std::exp(std::log(q.norm()) - log_scale);
}

RowMatrix FirstOrderTerm::dense() const {
  return (q * w_hat.transpose() + w_hat * q.transpose()) * std::exp(-log_scale);
}

RowMatrix FirstOrderTerm::times_signal(const SubspaceSet& s) const { return q * s.v_hat.transpose(); }

FirstOrderTerm v0_first_order(const ModelParams& p) {
  const SubspaceSet sub = exact_projectors(p);
  const HankelOperator E = noise_operator(p);
  return {sub.w_hat, project_out(E.apply(sub.v_hat), sub.w_hat), 0.5 * sub.log_mu()};
}

double first_order_residual(const PerturbedProjector& pp, const SubspaceSet& s, const FirstOrderTerm& v0,
                            double delta) {
  const double t = delta * std::exp(-v0.log_scale);
  return rank_two_residual(pp, s, t * v0.q);
}

double projection_gap_limit(const ModelParams& p) {
  if (p.scheme != Scheme::FixedStep) throw InvalidArgument("projection_gap_limit is defined for the fixed-step scheme");
  p.validate();
  const double a = p.a;
  const double alpha = static_cast<double>(p.L) / static_cast<double>(p.N);
  const double denom = a * a + 1.0 - 2.0 * a * std::cos(p.xi());
  return std::abs(p.delta) * (a * a - 1.0) / a * std::sqrt(alpha * (a * a - 1.0) / (2.0 * denom));
}

BOperator::BOperator(const ModelParams& p)
    : params_(p),
      sub_(exact_projectors(p)),
      noise_(noise_operator(p)),
      delta_(p.delta),
      t_(p.delta * std::exp(-0.5 * sub_.log_mu())),
      ev_(noise_.apply(sub_.v_hat)) {}

Vector BOperator::apply_normalized(const Vector& x) const {
  const Vector& w = sub_.w_hat;
  return t_ * (w * ev_.dot(x) + ev_ * w.dot(x)) + (t_ * t_) * noise_.apply(noise_.apply_t(x));
}

RowMatrix BOperator::a1_over_scale() const {
  return sub_.w_hat * ev_.transpose() + ev_ * sub_.w_hat.transpose();
}

RowMatrix BOperator::a2() const {
  const RowMatrix Ed = noise_.to_dense().values;
  return Ed * Ed.transpose();
}

RowMatrix BOperator::dense_normalized() const { return t_ * a1_over_scale() + (t_ * t_) * a2(); }

Vector BOperator::column() const { return apply_normalized(sub_.w_hat); }

Vector BOperator::compressed_column() const { return project_out(column(), sub_.w_hat); }

double BOperator::norm_normalized() const { return symmetric_norm(dense_normalized()); }

RowMatrix z_matrix(const ModelParams& p) {
  const BOperator B(p);
  const RowMatrix P0 = B.subspace().p0();
  return (B.t() * B.t()) * (P0 * B.a2() * P0);
}

LDeltaTerm l_delta(const ModelParams& p) {
  const BOperator B(p);
  const RowMatrix P0 = B.subspace().p0();
  const RowMatrix Z = (B.t() * B.t()) * (P0 * B.a2() * P0);
  LDeltaTerm out;
  out.w_hat = B.subspace().w_hat;
  out.z_norm = symmetric_norm(Z);
  if (!(out.z_norm < 1.0))
    throw NumericalFailure("l_delta: |Z| = " + std::to_string(out.z_norm) + " >= 1, outside the resolvent regime");
  const Vector b = B.compressed_column();
  const auto n = Z.rows();
  const RowMatrix A = RowMatrix::Identity(n, n) - Z;
  const Eigen::PartialPivLU<RowMatrix> lu(A);
  Vector c = lu.solve(b);
  c += lu.solve(Vector(b - A * c));
  const double nb = b.norm();
  out.solve_residual = nb > 0.0 ? (b - A * c).norm() / nb : 0.0;
  if (out.solve_residual > 1e-12)
    throw NumericalFailure("l_delta: resolvent solve residual " + std::to_string(out.solve_residual));
  out.c = project_out(c, out.w_hat);
  return out;
}

double l_delta_residual(const PerturbedProjector& pp, const SubspaceSet& s, const LDeltaTerm& l) {
  return rank_two_residual(pp, s, l.c);
}

double projector_bound_constant() { return std::exp(1.0 / 6.0) / std::sqrt(std::numbers::pi); }

ProjectorBounds projector_bounds(const ModelParams& p) {
  const BOperator B(p);
  ProjectorBounds tb;
  tb.b_norm = B.norm_normalized();
  tb.s0b_norm = B.column().norm();
  tb.s0bp0_norm = B.compressed_column().norm();
  tb.applicable = tb.b_norm < 0.25;
  const double C = projector_bound_constant();
  const double denom = 1.0 - 4.0 * tb.b_norm;
  const double inf = std::numeric_limits<double>::infinity();
  tb.gap_bound = tb.applicable ? 4.0 * C * tb.s0bp0_norm / denom : inf;
  tb.l_delta_bound = tb.applicable ? 16.0 * C * tb.s0b_norm * tb.s0bp0_norm / denom : inf;
  return tb;
}

double delta_zero(const ModelParams& p) {
  const BOperator B(p);
  const Vector& w = B.subspace().w_hat;
  // Eigenvalues of w ev^T + ev w^T are w.ev +- |ev|.
  const double n1 = std::abs(w.dot(B.ev())) + B.ev().norm();
  const double n2 = symmetric_norm(B.a2());
  const double s = B.subspace().scale();
  if (n2 == 0.0) return s / (4.0 * n1);
  return s * (std::sqrt(n1 * n1 + n2) - n1) / (2.0 * n2);
}

double symmetric_norm(const RowMatrix& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ssalab
