#include "netdyn/kernels.hpp"

#include <omp.h>

#include <stdexcept>

namespace netdyn::kernels {

namespace {

void check_inner(std::size_t lhs, std::size_t rhs) {
  if (lhs != rhs) throw std::invalid_argument("kernels: inner dimension mismatch");
}

void check_spectral(const Matrix& v, std::span<const double> f, std::span<const double> left,
                    std::span<const double> right) {
  if (f.size() != v.cols()) throw std::invalid_argument("kernels: spectral weights length");
  if (!left.empty() && left.size() != v.rows())
    throw std::invalid_argument("kernels: left scaling length");
  if (!right.empty() && right.size() != v.rows())
    throw std::invalid_argument("kernels: right scaling length");
}

void check_cells(const Matrix& m, std::span<const std::size_t> cell_of, std::size_t k) {
  if (m.rows() != m.cols() || m.rows() != cell_of.size())
    throw std::invalid_argument("kernels: cell_sandwich shape mismatch");
  for (std::size_t c : cell_of)
    if (c >= k) throw std::invalid_argument("kernels: cell index out of range");
}

// Row i of V·diag(f), scaled so the inner loops below stay simple.
inline void weighted_row(const Matrix& v, std::span<const double> f, std::size_t i,
                         std::span<double> out) {
  auto vi = v.row(i);
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = vi[k] * f[k];
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

// ---------------------------------------------------------------------------
// serial reference
// ---------------------------------------------------------------------------

namespace serial {

Matrix gemm(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.rows());
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Matrix gemm_tn(const Matrix& a, const Matrix& b) {
  check_inner(a.rows(), b.rows());
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Matrix gemm_nt(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.cols());
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
      c(i, j) = s;
    }
  return c;
}

Matrix spectral_function(const Matrix& v, std::span<const double> f, std::span<const double> left,
                         std::span<const double> right) {
  check_spectral(v, f, left, right);
  const std::size_t n = v.rows();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) s += v(i, k) * f[k] * v(j, k);
      const double li = left.empty() ? 1.0 : left[i];
      const double rj = right.empty() ? 1.0 : right[j];
      out(i, j) = li * s * rj;
    }
  return out;
}

Matrix cell_sandwich(const Matrix& m, std::span<const std::size_t> cell_of, std::size_t k) {
  check_cells(m, cell_of, k);
  Matrix r(k, k);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(cell_of[i], cell_of[j]) += m(i, j);
  return r;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP
// ---------------------------------------------------------------------------

namespace omp {

Matrix gemm(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.rows());
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows());
  Matrix c(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    auto ci = c.row(static_cast<std::size_t>(i));
    auto ai = a.row(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < ci.size(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix gemm_tn(const Matrix& a, const Matrix& b) {
  check_inner(a.rows(), b.rows());
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.cols());
  Matrix c(a.cols(), b.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    auto ci = c.row(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < a.rows(); ++k) {
      const double aki = a(k, static_cast<std::size_t>(i));
      if (aki == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < ci.size(); ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

Matrix gemm_nt(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.cols());
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows());
  Matrix c(a.rows(), b.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    auto ai = a.row(static_cast<std::size_t>(i));
    auto ci = c.row(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < b.rows(); ++j) ci[j] = dot(ai, b.row(j));
  }
  return c;
}

// Upper triangle of V·diag(f)·Vᵀ, mirrored, so the unscaled result is exactly
// symmetric.
Matrix spectral_function(const Matrix& v, std::span<const double> f, std::span<const double> left,
                         std::span<const double> right) {
  check_spectral(v, f, left, right);
  const std::size_t n = v.rows();
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(n);
  Matrix out(n, n);
#pragma omp parallel
  {
    Vector w(f.size());
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      weighted_row(v, f, i, w);
      for (std::size_t j = i; j < n; ++j) {
        const double s = dot(w, v.row(j));
        const double li = left.empty() ? 1.0 : left[i];
        const double lj = left.empty() ? 1.0 : left[j];
        const double ri = right.empty() ? 1.0 : right[i];
        const double rj = right.empty() ? 1.0 : right[j];
        out(i, j) = li * s * rj;
        out(j, i) = lj * s * ri;
      }
    }
  }
  return out;
}

// Two passes: H = M·C row by row in parallel, then R = Cᵀ·H in node order.
Matrix cell_sandwich(const Matrix& m, std::span<const std::size_t> cell_of, std::size_t k) {
  check_cells(m, cell_of, k);
  const std::size_t n = m.rows();
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(n);
  Matrix h(n, k);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto mi = m.row(i);
    auto hi = h.row(i);
    for (std::size_t j = 0; j < n; ++j) hi[cell_of[j]] += mi[j];
  }
  Matrix r(k, k);
  for (std::size_t i = 0; i < n; ++i) {
    auto ri = r.row(cell_of[i]);
    auto hi = h.row(i);
    for (std::size_t b = 0; b < k; ++b) ri[b] += hi[b];
  }
  return r;
}

}  // namespace omp

}  // namespace netdyn::kernels
