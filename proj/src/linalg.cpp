#include "netdyn/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "netdyn/error.hpp"
#include "netdyn/kernels.hpp"

namespace netdyn::linalg {

namespace {

// Householder reduction to tridiagonal form. On return d holds the diagonal,
// e the subdiagonal (e[0] unused) and v the accumulated transformation.
void tridiagonalize(Matrix& v, Vector& d, Vector& e) {
  const int n = static_cast<int>(v.rows());
  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), accumulating into v.
void ql_implicit(Matrix& v, Vector& d, Vector& e) {
  const int n = static_cast<int>(v.rows());
  constexpr int kMaxIterations = 60;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxIterations)
          throw NumericalError("spectral", "QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw NonSymmetricError("spectral", "matrix is not square");
  if (n == 0) return {};
  for (double x : a.data())
    if (!std::isfinite(x)) throw InputError("spectral", "matrix has non-finite entries");

  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) v(i, j) = v(j, i) = a(i, j);
  Vector d(n), e(n);
  tridiagonalize(v, d, e);
  ql_implicit(v, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = d[order[c]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

Matrix lu_solve(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  if (n != a.cols() || b.rows() != n) throw SizeMismatchError("linalg", "lu_solve shape mismatch");
  Matrix lu = a;
  Matrix x = b;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
    if (lu(pivot, col) == 0.0) throw NumericalError("linalg", "singular matrix in lu_solve");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(pivot, j), lu(col, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(pivot, j), x(col, j));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = lu(r, col) / lu(col, col);
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) lu(r, j) -= factor * lu(col, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(r, j) -= factor * x(col, j);
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double s = x(ii, j);
      for (std::size_t k = ii + 1; k < n; ++k) s -= lu(ii, k) * x(k, j);
      x(ii, j) = s / lu(ii, ii);
    }
  }
  return x;
}

Matrix expm(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw SizeMismatchError("linalg", "expm requires a square matrix");
  if (n == 0) return {};

  constexpr double kTheta13 = 5.371920351148152;
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};

  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const Matrix s = std::ldexp(1.0, -squarings) * a;

  const Matrix id = Matrix::identity(n);
  const Matrix s2 = kernels::gemm(s, s);
  const Matrix s4 = kernels::gemm(s2, s2);
  const Matrix s6 = kernels::gemm(s4, s2);

  const Matrix u_inner = kernels::gemm(s6, b[13] * s6 + b[11] * s4 + b[9] * s2) + b[7] * s6 +
                         b[5] * s4 + b[3] * s2 + b[1] * id;
  const Matrix u = kernels::gemm(s, u_inner);
  const Matrix v = kernels::gemm(s6, b[12] * s6 + b[10] * s4 + b[8] * s2) + b[6] * s6 +
                   b[4] * s4 + b[2] * s2 + b[0] * id;

  Matrix result = lu_solve(v - u, v + u);
  for (int i = 0; i < squarings; ++i) result = kernels::gemm(result, result);
  return result;
}

}  // namespace netdyn::linalg
