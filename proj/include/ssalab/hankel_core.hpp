#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace ssalab {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Dense L x K matrix. `is_hankel` records that it was produced by embed().
struct TrajectoryMatrix {
  RowMatrix values;
  bool is_hankel = false;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
  std::span<const double> data() const { return {values.data(), static_cast<std::size_t>(values.size())}; }

  static TrajectoryMatrix dense(RowMatrix m) { return {std::move(m), false}; }
};

/// Row j of the result is (x_j, ..., x_{K+j-1}); requires 1 < L < N.
TrajectoryMatrix embed(std::span<const double> series, std::size_t L);

/// Diagonal averaging: output[j] is the mean of entries (i, k) with i + k = j.
std::vector<double> hankelize(const TrajectoryMatrix& m);

/// True when every anti-diagonal is constant (exact comparison).
bool has_hankel_structure(const TrajectoryMatrix& m);

/// Matrix-free L x K Hankel matrix over a series; entry (i, k) = s[i + k].
class HankelOperator {
 public:
  HankelOperator(std::vector<double> series, std::size_t L);

  std::size_t rows() const { return L_; }
  std::size_t cols() const { return series_.size() - L_ + 1; }
  const std::vector<double>& series() const { return series_; }

  Vector apply(const Vector& x) const;    // H x
  Vector apply_t(const Vector& y) const;  // H^T y
  TrajectoryMatrix to_dense() const;

 private:
  std::vector<double> series_;
  std::size_t L_;
};

struct PowerOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
};

struct SingularPair {
  double sigma = 0.0;
  Vector u;  // unit left singular vector, largest-magnitude entry positive
  Vector v;  // unit right singular vector, v = M^T u / sigma
  std::size_t iterations = 0;
  double residual = 0.0;  // ||M M^T u - sigma^2 u|| / sigma^2
};

/// Leading singular pair by power iteration on the smaller Gram matrix.
/// Throws NumericalFailure on a zero matrix or when max_iter is exhausted.
SingularPair dominant_left_singular(const TrajectoryMatrix& m, const PowerOptions& opt = {});

/// Top `rank` pairs by repeated deflation of the leading pair.
std::vector<SingularPair> leading_singular_pairs(const TrajectoryMatrix& m, std::size_t rank,
                                                 const PowerOptions& opt = {});

double spectral_norm(const TrajectoryMatrix& m, const PowerOptions& opt = {});
double max_norm(const TrajectoryMatrix& m);

/// Fix the sign of v so that its largest-magnitude entry is positive.
void canonical_sign(Vector& v);

}  // namespace ssalab
