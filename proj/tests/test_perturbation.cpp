#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ssalab/errors.hpp"
#include "ssalab/exact_forms.hpp"
#include "ssalab/hankel_core.hpp"
#include "ssalab/perturbation.hpp"
#include "ssalab/series_models.hpp"

using namespace ssalab;

namespace {

double max_abs(const RowMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ModelParams discretized(std::size_t N, double delta = 0.1) {
  ModelParams p = fig2_params(N, Scheme::Discretized);
  p.delta = delta;
  return p;
}

RowMatrix gram(const TrajectoryMatrix& m) { return m.values * m.values.transpose(); }

}  // namespace

TEST_CASE("exact projector example") {
  ModelParams p;
  p.a = 2.0;
  p.N = 3;
  p.L = 2;
  const auto s = exact_projectors(p);
  CHECK(s.w_hat(0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(s.w_hat(1) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-15));
  const RowMatrix pp = s.p0_perp();
  CHECK(pp(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(pp(0, 1) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(pp(1, 0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(pp(1, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s.mu() == doctest::Approx(25.0).epsilon(1e-14));
}

TEST_CASE("projector laws") {
  for (Scheme sc : {Scheme::FixedStep, Scheme::Discretized}) {
    const ModelParams p = fig2_params(60, sc);
    const auto s = exact_projectors(p);
    const RowMatrix P = s.p0_perp();
    CHECK(max_abs(P * P - P) < 1e-12);
    CHECK(max_abs(P - P.transpose()) == 0.0);
    CHECK(P.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(s.p0() + P - RowMatrix::Identity(p.L, p.L)) < 1e-15);

    const auto H = embed(signal(p), p.L);
    CHECK(max_abs(P * H.values - H.values) <= 1e-10 * max_abs(H.values));

    const RowMatrix G = gram(H), S0 = s.s0();
    CHECK(max_abs(G * S0 - P) < 1e-8);
    CHECK(max_abs(S0 * G * S0 - S0) <= 1e-8 * max_abs(S0));

    const auto sp = dominant_left_singular(H);
    const RowMatrix pinv = sp.u * sp.u.transpose() / (sp.sigma * sp.sigma);
    CHECK(max_abs(S0 - pinv) <= 1e-8 * max_abs(S0));
  }
}

TEST_CASE("perturbed projector with no noise is the exact projector") {
  ModelParams p = fig2_params(300);
  p.delta = 0.0;
  const auto s = exact_projectors(p);
  const auto pp = perturbed_projector(p);
  CHECK(max_abs(pp.p0_perp_delta() - s.p0_perp()) < 1e-10);
  CHECK(projection_gap(s, pp) == 0.0);
  const RowMatrix U = pp.p0_perp_delta();
  CHECK(max_abs(U * U - U) < 1e-12);
}

TEST_CASE("gap is linear in small noise levels") {
  ModelParams p = fig2_params(300);
  p.delta = 0.01;
  const auto s = exact_projectors(p);
  const double g1 = projection_gap(s, perturbed_projector(p));
  p.delta = 0.02;
  const double g2 = projection_gap(s, perturbed_projector(p));
  CHECK(g2 / g1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("default-parameter projector at N = 300") {
  const ModelParams p = fig2_params(300);
  const auto pp = perturbed_projector(p);
  CHECK(pp.u1.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(projection_gap(exact_projectors(p), pp) < 1e-3);
}

TEST_CASE("split and dense routes agree where the dense series is accurate") {
  for (const ModelParams& p : {discretized(200), fig2_params(100)}) {
    const auto s = exact_projectors(p);
    const double g_split = projection_gap(s, perturbed_projector(p));
    const double g_dense = projection_gap(s, perturbed_projector_dense(p));
    CHECK(g_split == doctest::Approx(g_dense).epsilon(1e-6));
  }
}

TEST_CASE("projection_gap of two vectors") {
  Vector w(3), u(3);
  w << 1, 0, 0;
  CHECK(projection_gap(w, w) == 0.0);
  u << 0, 1, 0;
  CHECK(projection_gap(w, u) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist;
  for (int k = 0; k < 5; ++k) {
    Vector a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a(i) = dist(rng);
      b(i) = dist(rng);
    }
    a.normalize();
    b.normalize();
    const RowMatrix diff = a * a.transpose() - b * b.transpose();
    CHECK(projection_gap(a, b) == doctest::Approx(spectral_norm(TrajectoryMatrix::dense(diff))).epsilon(1e-10));
  }
}

TEST_CASE("gap formula equals the spectral norm of the projector difference") {
  const ModelParams p = discretized(100, 1.0);
  const auto s = exact_projectors(p);
  const auto pp = perturbed_projector(p);
  const double cosine = pp.u1.dot(s.w_hat);
  const double via_angle = std::sqrt(1.0 - cosine * cosine);
  const double via_norm = symmetric_norm(pp.p0_perp_delta() - s.p0_perp());
  CHECK(via_angle > 1e-3);
  CHECK(via_angle == doctest::Approx(via_norm).epsilon(1e-10));
  CHECK(projection_gap(s, pp) == doctest::Approx(via_norm).epsilon(1e-10));
}

TEST_CASE("noise-dominated series use the full trajectory matrix") {
  const ModelParams p = discretized(100, 5.0);
  const auto s = exact_projectors(p);
  const auto pp = perturbed_projector(p);
  const auto dense = perturbed_projector_dense(p);
  CHECK(projection_gap(s, pp) > 0.5);
  CHECK((pp.u1 - dense.u1).norm() < 1e-10);
}

TEST_CASE("first-order term does not depend on the noise level") {
  ModelParams p = fig2_params(150);
  p.delta = 0.1;
  const auto a = v0_first_order(p);
  p.delta = 0.3;
  const auto b = v0_first_order(p);
  CHECK(a.q == b.q);
  CHECK(a.log_scale == b.log_scale);
}

TEST_CASE("first-order term applied to the signal") {
  const ModelParams p = fig2_params(60);
  const auto s = exact_projectors(p);
  const auto v0 = v0_first_order(p);
  const RowMatrix dense = v0.dense() * embed(signal(p), p.L).values;
  const RowMatrix factored = v0.times_signal(s);
  CHECK(max_abs(dense - factored) <= 1e-10 * max_abs(factored));
  CHECK(v0.norm() == doctest::Approx(symmetric_norm(v0.dense())).epsilon(1e-10));
}

TEST_CASE("first-order residual matches a dense evaluation") {
  const ModelParams p = discretized(80, 1.0);
  const auto s = exact_projectors(p);
  const auto pp = perturbed_projector(p);
  const auto v0 = v0_first_order(p);
  const double dense = symmetric_norm(pp.p0_perp_delta() - s.p0_perp() - p.delta * v0.dense());
  CHECK(first_order_residual(pp, s, v0, p.delta) == doctest::Approx(dense).epsilon(1e-8));
}

TEST_CASE("first-order norm scales like N a^-N") {
  double lo = 1e300, hi = 0.0;
  for (std::size_t N : {150, 200, 250}) {
    const auto v0 = v0_first_order(fig2_params(N));
    const double scaled = v0.norm() / (double(N) * std::pow(1.05, -double(N)));
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  CHECK(hi / lo <= 2.0);
}

// Decay example for the first-order residual. The stated rate N^2 a^-2N
// itself predicts a ratio of (250/200)^2 1.05^-100 = 1.19e-2 here.
TEST_CASE("first-order residual at N = 250 is below 1e-2 of the residual at N = 200") {
  double res[2];
  int k = 0;
  for (std::size_t N : {200, 250}) {
    const ModelParams p = fig2_params(N);
    res[k++] = first_order_residual(perturbed_projector(p), exact_projectors(p), v0_first_order(p), p.delta);
  }
  CHECK(res[1] < 1e-2 * res[0]);
}

TEST_CASE("first-order residual ratio stays within the stated rate") {
  double scaled[3];
  int k = 0;
  for (std::size_t N : {150, 200, 250}) {
    const ModelParams p = fig2_params(N);
    const double r = first_order_residual(perturbed_projector(p), exact_projectors(p), v0_first_order(p), p.delta);
    scaled[k++] = r / (double(N) * double(N) * std::pow(1.05, -2.0 * double(N)));
  }
  CHECK(*std::max_element(scaled, scaled + 3) / *std::min_element(scaled, scaled + 3) <= 2.0);
}

TEST_CASE("projection gap limit") {
  ModelParams p = fig2_params(600);
  const double lim = projection_gap_limit(p);
  const double gap = projection_gap(exact_projectors(p), perturbed_projector(p));
  CHECK(std::pow(1.05, 600.0) / std::sqrt(600.0) * gap == doctest::Approx(lim).epsilon(0.05));
  p.delta = -0.1;
  CHECK(projection_gap_limit(p) == lim);
  p.delta = 0.0;
  CHECK(projection_gap_limit(p) == 0.0);
  CHECK_THROWS_AS(projection_gap_limit(discretized(600)), InvalidArgument);
}

TEST_CASE("B operator") {
  const BOperator zero(discretized(60, 0.0));
  CHECK(max_abs(zero.dense_normalized()) == 0.0);

  const ModelParams p = discretized(60, 0.7);
  const BOperator b(p);
  const RowMatrix B = b.dense_normalized();
  CHECK(max_abs(B - B.transpose()) == 0.0);

  const RowMatrix H = embed(signal(p), p.L).values, E = embed(noise(p), p.L).values;
  const double mu = mu_closed(p);
  const RowMatrix explicit_B =
      (p.delta * (H * E.transpose() + E * H.transpose()) + p.delta * p.delta * E * E.transpose()) / mu;
  CHECK(max_abs(B - explicit_B) <= 1e-12 * max_abs(explicit_B));

  Vector x = Vector::LinSpaced(static_cast<Eigen::Index>(p.L), -1.0, 1.0);
  CHECK((b.apply_normalized(x) - B * x).norm() <= 1e-12 * (B * x).norm());
  CHECK(b.norm_normalized() == doctest::Approx(symmetric_norm(B)).epsilon(1e-10));
  const Vector col = B * b.subspace().w_hat;
  CHECK((b.column() - col).norm() <= 1e-12 * col.norm());
  CHECK((b.compressed_column() - b.subspace().p0() * col).norm() <= 1e-12 * col.norm());
}

TEST_CASE("B over mu stays under the constant fitted at N = 500") {
  const ModelParams p500 = discretized(500), p1000 = discretized(1000);
  const double c = BOperator(p500).norm_normalized() / (p500.delta * p500.delta);
  CHECK(BOperator(p1000).norm_normalized() <= c * p1000.delta * p1000.delta);
}

TEST_CASE("Z matrix") {
  CHECK(max_abs(z_matrix(discretized(300, 0.0))) == 0.0);

  const ModelParams p = discretized(300);
  const RowMatrix Z = z_matrix(p);
  const double c2 = 300.0 * max_abs(Z) / p.delta;
  const RowMatrix Z2 = Z * Z, Z3 = Z2 * Z;
  CHECK(max_abs(Z2) <= std::pow(p.delta * c2, 2) / 300.0);
  CHECK(max_abs(Z3) <= std::pow(p.delta * c2, 3) / 300.0);

  double lo = 1e300, hi = 0.0;
  for (std::size_t N : {300, 600, 1200}) {
    const double v = double(N) * max_abs(z_matrix(discretized(N)));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo <= 1.2);
}

TEST_CASE("L(delta)") {
  const auto z = l_delta(discretized(100, 0.0));
  CHECK(z.c.norm() == 0.0);

  const ModelParams p = discretized(100);
  const auto l = l_delta(p);
  CHECK(l.solve_residual <= 1e-12);
  CHECK(l.z_norm < 1.0);

  // L1 H = w c^T H vanishes because c is orthogonal to the column space.
  const RowMatrix H = embed(signal(p), p.L).values;
  const RowMatrix L1 = l.w_hat * l.c.transpose();
  CHECK(max_abs(L1 * H) <= 1e-10);

  // Neumann series limit.
  const RowMatrix Z = z_matrix(p);
  const Vector rhs = BOperator(p).compressed_column();
  Vector term = rhs, sum = rhs;
  for (int n = 1; n < 60; ++n) {
    term = Z * term;
    sum += term;
  }
  CHECK((sum - l.c).norm() <= 1e-12 * l.c.norm());
}

TEST_CASE("L(delta) residual matches a dense evaluation") {
  const ModelParams p = discretized(80, 1.0);
  const auto s = exact_projectors(p);
  const auto pp = perturbed_projector(p);
  const auto l = l_delta(p);
  const double dense = symmetric_norm(pp.p0_perp_delta() - s.p0_perp() - l.dense());
  CHECK(l_delta_residual(pp, s, l) == doctest::Approx(dense).epsilon(1e-8));
}

TEST_CASE("N^2 times the L(delta) residual stays bounded") {
  double lo = 1e300, hi = 0.0;
  for (std::size_t N : {250, 500, 1000}) {
    const ModelParams p = discretized(N);
    const double r = l_delta_residual(perturbed_projector(p), exact_projectors(p), l_delta(p));
    lo = std::min(lo, double(N) * double(N) * r);
    hi = std::max(hi, double(N) * double(N) * r);
  }
  CHECK(hi / lo <= 3.0);
}

TEST_CASE("resolvent outside the contraction regime is refused") {
  CHECK_THROWS_AS(l_delta(discretized(100, 5.0)), NumericalFailure);
}

TEST_CASE("general projector inequalities hold") {
  for (std::size_t N : {250, 500}) {
    const ModelParams p = discretized(N);
    const auto tb = projector_bounds(p);
    REQUIRE(tb.applicable);
    const auto s = exact_projectors(p);
    const auto pp = perturbed_projector(p);
    CHECK(projection_gap(s, pp) <= tb.gap_bound);
    CHECK(l_delta_residual(pp, s, l_delta(p)) <= tb.l_delta_bound);
    CHECK(tb.b_norm == doctest::Approx(BOperator(p).norm_normalized()).epsilon(1e-12));
  }
  CHECK(projector_bound_constant() == doctest::Approx(std::exp(1.0 / 6.0) / std::sqrt(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("delta0 solves the quarter-mu equation") {
  const ModelParams p = discretized(100);
  const BOperator b(p);
  const double d0 = delta_zero(p);
  const double s = b.subspace().scale();
  const double n1 = symmetric_norm(b.a1_over_scale()), n2 = symmetric_norm(b.a2());
  const double t = d0 / s;
  CHECK(t * n1 + t * t * n2 == doctest::Approx(0.25).epsilon(1e-10));
}
