#include "ssalab/hankel_core.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ssalab/errors.hpp"
#include "ssalab/kernels.hpp"

namespace ssalab {

namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Fixed-seed start vector: normalized ones plus a small deterministic
// perturbation, so the start is never exactly orthogonal to the leading
// singular direction of a structured (e.g. antisymmetric-pattern) matrix.
Vector start_vector(std::size_t n) {
  std::mt19937_64 rng(0x5eed5a1aULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector x(static_cast<Eigen::Index>(n));
  for (auto& xi : x) xi = 1.0 + 1e-3 * dist(rng);
  x.normalize();
  return x;
}

}  // namespace

TrajectoryMatrix embed(std::span<const double> series, std::size_t L) {
  const std::size_t N = series.size();
  if (L <= 1 || L >= N)
    throw InvalidArgument("embed: window length must satisfy 1 < L < N (L=" + std::to_string(L) +
                          ", N=" + std::to_string(N) + ")");
  const std::size_t K = N - L + 1;
  TrajectoryMatrix m{RowMatrix(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(K)), true};
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t k = 0; k < K; ++k) m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = series[i + k];
  return m;
}

std::vector<double> hankelize(const TrajectoryMatrix& m) {
  std::vector<double> out(m.rows() + m.cols() - 1);
  kernels::hankelize(m.data(), m.rows(), m.cols(), out);
  return out;
}

bool has_hankel_structure(const TrajectoryMatrix& m) {
  for (Eigen::Index i = 1; i < m.values.rows(); ++i)
    for (Eigen::Index k = 0; k + 1 < m.values.cols(); ++k)
      if (m.values(i, k) != m.values(i - 1, k + 1)) return false;
  return true;
}

HankelOperator::HankelOperator(std::vector<double> series, std::size_t L) : series_(std::move(series)), L_(L) {
  if (L_ < 1 || L_ > series_.size()) throw InvalidArgument("HankelOperator: invalid window length");
}

Vector HankelOperator::apply(const Vector& x) const {
  Vector out(static_cast<Eigen::Index>(rows()));
  kernels::hankel_apply(series_, L_, view(x), view(out));
  return out;
}

Vector HankelOperator::apply_t(const Vector& y) const {
  Vector out(static_cast<Eigen::Index>(cols()));
  kernels::hankel_apply_t(series_, L_, view(y), view(out));
  return out;
}

TrajectoryMatrix HankelOperator::to_dense() const { return embed(series_, L_); }

void canonical_sign(Vector& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0) v = -v;
}

SingularPair dominant_left_singular(const TrajectoryMatrix& m, const PowerOptions& opt) {
  const std::size_t L = m.rows(), K = m.cols();
  if (L == 0 || K == 0 || max_norm(m) == 0.0) throw NumericalFailure("dominant_left_singular: zero matrix");

  // Power iteration on the Gram matrix of the smaller side.
  const bool left = L <= K;
  const std::size_t n = left ? L : K;
  Vector tmp(static_cast<Eigen::Index>(left ? K : L));
  Vector y(static_cast<Eigen::Index>(n));
  auto gram = [&](const Vector& x, Vector& out) {
    if (left) {
      kernels::dense_apply_t(m.data(), L, K, view(x), view(tmp));
      kernels::dense_apply(m.data(), L, K, view(tmp), view(out));
    } else {
      kernels::dense_apply(m.data(), L, K, view(x), view(tmp));
      kernels::dense_apply_t(m.data(), L, K, view(tmp), view(out));
    }
  };

  Vector x = start_vector(n);
  double lambda = 0.0, residual = 0.0;
  std::size_t it = 0;
  bool converged = false;
  for (it = 1; it <= opt.max_iter; ++it) {
    gram(x, y);
    lambda = x.dot(y);
    residual = (y - lambda * x).norm() / std::abs(lambda);
    const double ny = y.norm();
    if (ny == 0.0) throw NumericalFailure("dominant_left_singular: start vector in the null space");
    if (residual <= opt.tol) {
      converged = true;
      break;
    }
    x = y / ny;
  }
  if (!converged)
    throw NumericalFailure("dominant_left_singular: no convergence after " + std::to_string(opt.max_iter) +
                           " iterations (residual " + std::to_string(residual) + ")");

  SingularPair out;
  out.sigma = std::sqrt(lambda);
  out.iterations = it;
  out.residual = residual;
  if (left) {
    out.u = x;
  } else {
    out.u.resize(static_cast<Eigen::Index>(L));
    kernels::dense_apply(m.data(), L, K, view(x), view(out.u));
    out.u.normalize();
  }
  canonical_sign(out.u);
  out.v.resize(static_cast<Eigen::Index>(K));
  kernels::dense_apply_t(m.data(), L, K, view(out.u), view(out.v));
  out.v /= out.sigma;
  return out;
}

std::vector<SingularPair> leading_singular_pairs(const TrajectoryMatrix& m, std::size_t rank,
                                                 const PowerOptions& opt) {
  if (rank == 0) throw InvalidArgument("rank must be at least 1");
  if (rank >= std::min(m.rows(), m.cols()))
    throw InvalidArgument("rank must be below min(L, K)");
  std::vector<SingularPair> pairs;
  TrajectoryMatrix work = m;
  work.is_hankel = false;
  for (std::size_t r = 0; r < rank; ++r) {
    SingularPair p = dominant_left_singular(work, opt);
    for (const auto& q : pairs) p.u -= q.u.dot(p.u) * q.u;
    p.u.normalize();
    canonical_sign(p.u);
    p.v = m.values.transpose() * p.u;
    p.sigma = p.v.norm();
    p.v /= p.sigma;
    work.values.noalias() -= p.sigma * p.u * p.v.transpose();
    pairs.push_back(std::move(p));
  }
  return pairs;
}

double spectral_norm(const TrajectoryMatrix& m, const PowerOptions& opt) {
  if (max_norm(m) == 0.0) return 0.0;
  return dominant_left_singular(m, opt).sigma;
}

double max_norm(const TrajectoryMatrix& m) { return m.values.size() ? m.values.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ssalab
