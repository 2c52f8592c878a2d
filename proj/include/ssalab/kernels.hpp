#pragma once

// Data-parallel inner loops. Every kernel exists twice: a serial reference
// (kept for testing and benchmarking) and an OpenMP version. Both compute
// each output element with the same inner loop in the same order, so their
// results are bitwise identical regardless of thread count.
//
// Hankel operators are never materialized: an L x K Hankel matrix built from
// a series s of length N = L + K - 1 has entry (i, k) = s[i + k].

#include <cstddef>
#include <span>

namespace ssalab::kernels {

#define SSALAB_KERNEL_DECLS                                                                    \
  /* out[i] = sum_k s[i + k] x[k],  i < L */                                                   \
  void hankel_apply(std::span<const double> s, std::size_t L, std::span<const double> x,       \
                    std::span<double> out);                                                    \
  /* out[k] = sum_i s[i + k] y[i],  k < K */                                                   \
  void hankel_apply_t(std::span<const double> s, std::size_t L, std::span<const double> y,     \
                      std::span<double> out);                                                  \
  /* Anti-diagonal means of the outer product a b^T (L x K). */                                \
  void outer_hankelize(std::span<const double> a, std::span<const double> b,                   \
                       std::span<double> out);                                                 \
  /* Anti-diagonal means of a dense row-major L x K matrix. Constant anti-diagonals */         \
  /* are reproduced exactly. */                                                                \
  void hankelize(std::span<const double> m, std::size_t rows, std::size_t cols,                \
                 std::span<double> out);                                                       \
  /* out = M x for dense row-major M (rows x cols). */                                         \
  void dense_apply(std::span<const double> m, std::size_t rows, std::size_t cols,              \
                   std::span<const double> x, std::span<double> out);                          \
  /* out = M^T y. */                                                                           \
  void dense_apply_t(std::span<const double> m, std::size_t rows, std::size_t cols,            \
                     std::span<const double> y, std::span<double> out);

namespace serial {
SSALAB_KERNEL_DECLS
}

namespace parallel {
SSALAB_KERNEL_DECLS
}

// Dispatchers: OpenMP above a work threshold, serial below it.
SSALAB_KERNEL_DECLS

#undef SSALAB_KERNEL_DECLS

/// Work size (multiply-adds) above which the dispatchers go parallel.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

}  // namespace ssalab::kernels
