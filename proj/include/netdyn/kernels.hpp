#pragma once

// Dense kernels behind the hot paths (propagators, autocovariances, cell
// aggregation). Each kernel has a straightforward serial reference in
// kernels::serial and an OpenMP version in kernels::omp; the unqualified
// kernels:: names dispatch to the OpenMP build. The OpenMP versions only
// parallelize over independent output rows, so their results do not depend
// on the thread count.

#include <cstddef>
#include <span>

#include "netdyn/matrix.hpp"

namespace netdyn::kernels {

namespace serial {

Matrix gemm(const Matrix& a, const Matrix& b);
/// aᵀ·b
Matrix gemm_tn(const Matrix& a, const Matrix& b);
/// a·bᵀ
Matrix gemm_nt(const Matrix& a, const Matrix& b);
/// diag(left)·V·diag(f)·Vᵀ·diag(right). Empty scalings mean identity.
Matrix spectral_function(const Matrix& v, std::span<const double> f,
                         std::span<const double> left = {},
                         std::span<const double> right = {});
/// Cᵀ·M·C for the indicator matrix C of `cell_of` with k cells.
Matrix cell_sandwich(const Matrix& m, std::span<const std::size_t> cell_of, std::size_t k);

}  // namespace serial

namespace omp {

Matrix gemm(const Matrix& a, const Matrix& b);
Matrix gemm_tn(const Matrix& a, const Matrix& b);
Matrix gemm_nt(const Matrix& a, const Matrix& b);
Matrix spectral_function(const Matrix& v, std::span<const double> f,
                         std::span<const double> left = {},
                         std::span<const double> right = {});
Matrix cell_sandwich(const Matrix& m, std::span<const std::size_t> cell_of, std::size_t k);

}  // namespace omp

inline Matrix gemm(const Matrix& a, const Matrix& b) { return omp::gemm(a, b); }
inline Matrix gemm_tn(const Matrix& a, const Matrix& b) { return omp::gemm_tn(a, b); }
inline Matrix gemm_nt(const Matrix& a, const Matrix& b) { return omp::gemm_nt(a, b); }
inline Matrix spectral_function(const Matrix& v, std::span<const double> f,
                                std::span<const double> left = {},
                                std::span<const double> right = {}) {
  return omp::spectral_function(v, f, left, right);
}
inline Matrix cell_sandwich(const Matrix& m, std::span<const std::size_t> cell_of,
                            std::size_t k) {
  return omp::cell_sandwich(m, cell_of, k);
}

/// Number of threads the OpenMP kernels will use.
int max_threads();

}  // namespace netdyn::kernels
