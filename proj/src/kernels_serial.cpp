#include <cassert>

#include "ssalab/kernels.hpp"

namespace ssalab::kernels {

namespace detail {

inline double hankel_row(const double* s, const double* x, std::size_t K) {
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) acc += s[k] * x[k];
  return acc;
}

}  // namespace detail

namespace serial {

void hankel_apply(std::span<const double> s, std::size_t L, std::span<const double> x,
                  std::span<double> out) {
  const std::size_t K = x.size();
  assert(s.size() == L + K - 1 && out.size() == L);
  for (std::size_t i = 0; i < L; ++i) out[i] = detail::hankel_row(s.data() + i, x.data(), K);
}

void hankel_apply_t(std::span<const double> s, std::size_t L, std::span<const double> y,
                    std::span<double> out) {
  const std::size_t K = out.size();
  assert(s.size() == L + K - 1 && y.size() == L);
  for (std::size_t k = 0; k < K; ++k) out[k] = detail::hankel_row(s.data() + k, y.data(), L);
}

void outer_hankelize(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t L = a.size(), K = b.size();
  assert(out.size() == L + K - 1);
  for (std::size_t j = 0; j < L + K - 1; ++j) {
    const std::size_t lo = j + 1 > K ? j + 1 - K : 0;
    const std::size_t hi = j < L - 1 ? j : L - 1;
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += a[i] * b[j - i];
    out[j] = acc / static_cast<double>(hi - lo + 1);
  }
}

void hankelize(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<double> out) {
  assert(m.size() == rows * cols && out.size() == rows + cols - 1);
  for (std::size_t j = 0; j < rows + cols - 1; ++j) {
    const std::size_t lo = j + 1 > cols ? j + 1 - cols : 0;
    const std::size_t hi = j < rows - 1 ? j : rows - 1;
    const double pivot = m[lo * cols + (j - lo)];
    double acc = 0.0;
    for (std::size_t i = lo + 1; i <= hi; ++i) acc += m[i * cols + (j - i)] - pivot;
    out[j] = pivot + acc / static_cast<double>(hi - lo + 1);
  }
}

void dense_apply(std::span<const double> m, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> out) {
  assert(m.size() == rows * cols && x.size() == cols && out.size() == rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = detail::hankel_row(m.data() + i * cols, x.data(), cols);
}

void dense_apply_t(std::span<const double> m, std::size_t rows, std::size_t cols,
                   std::span<const double> y, std::span<double> out) {
  assert(m.size() == rows * cols && y.size() == rows && out.size() == cols);
  for (std::size_t k = 0; k < cols; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += m[i * cols + k] * y[i];
    out[k] = acc;
  }
}

}  // namespace serial

void hankel_apply(std::span<const double> s, std::size_t L, std::span<const double> x,
                  std::span<double> out) {
  if (L * x.size() >= kParallelThreshold) return parallel::hankel_apply(s, L, x, out);
  serial::hankel_apply(s, L, x, out);
}

void hankel_apply_t(std::span<const double> s, std::size_t L, std::span<const double> y,
                    std::span<double> out) {
  if (L * out.size() >= kParallelThreshold) return parallel::hankel_apply_t(s, L, y, out);
  serial::hankel_apply_t(s, L, y, out);
}

void outer_hankelize(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (a.size() * b.size() >= kParallelThreshold) return parallel::outer_hankelize(a, b, out);
  serial::outer_hankelize(a, b, out);
}

void hankelize(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<double> out) {
  if (rows * cols >= kParallelThreshold) return parallel::hankelize(m, rows, cols, out);
  serial::hankelize(m, rows, cols, out);
}

void dense_apply(std::span<const double> m, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> out) {
  if (rows * cols >= kParallelThreshold) return parallel::dense_apply(m, rows, cols, x, out);
  serial::dense_apply(m, rows, cols, x, out);
}

void dense_apply_t(std::span<const double> m, std::size_t rows, std::size_t cols,
                   std::span<const double> y, std::span<double> out) {
  if (rows * cols >= kParallelThreshold) return parallel::dense_apply_t(m, rows, cols, y, out);
  serial::dense_apply_t(m, rows, cols, y, out);
}

}  // namespace ssalab::kernels
