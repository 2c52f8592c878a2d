#include <cassert>
#include <cstdint>

#include "ssalab/kernels.hpp"

namespace ssalab::kernels::parallel {

namespace {

inline double dot(const double* s, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += s[k] * x[k];
  return acc;
}

}  // namespace

void hankel_apply(std::span<const double> s, std::size_t L, std::span<const double> x,
                  std::span<double> out) {
  const std::size_t K = x.size();
  assert(s.size() == L + K - 1 && out.size() == L);
  const auto n = static_cast<std::int64_t>(L);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = dot(s.data() + i, x.data(), K);
}

void hankel_apply_t(std::span<const double> s, std::size_t L, std::span<const double> y,
                    std::span<double> out) {
  const std::size_t K = out.size();
  assert(s.size() == L + K - 1 && y.size() == L);
  const auto n = static_cast<std::int64_t>(K);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) out[k] = dot(s.data() + k, y.data(), L);
}

void outer_hankelize(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t L = a.size(), K = b.size();
  assert(out.size() == L + K - 1);
  const auto n = static_cast<std::int64_t>(L + K - 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t jj = 0; jj < n; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const std::size_t lo = j + 1 > K ? j + 1 - K : 0;
    const std::size_t hi = j < L - 1 ? j : L - 1;
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += a[i] * b[j - i];
    out[j] = acc / static_cast<double>(hi - lo + 1);
  }
}

void hankelize(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<double> out) {
  assert(m.size() == rows * cols && out.size() == rows + cols - 1);
  const auto n = static_cast<std::int64_t>(rows + cols - 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t jj = 0; jj < n; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
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
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = dot(m.data() + i * cols, x.data(), cols);
}

void dense_apply_t(std::span<const double> m, std::size_t rows, std::size_t cols,
                   std::span<const double> y, std::span<double> out) {
  assert(m.size() == rows * cols && y.size() == rows && out.size() == cols);
  const auto n = static_cast<std::int64_t>(cols);
#pragma omp parallel for schedule(static)
  for (std::int64_t kk = 0; kk < n; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += m[i * cols + k] * y[i];
    out[k] = acc;
  }
}

}  // namespace ssalab::kernels::parallel
