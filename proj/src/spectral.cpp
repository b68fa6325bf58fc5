#include "netdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>

#include "netdyn/error.hpp"
#include "netdyn/kernels.hpp"
#include "netdyn/linalg.hpp"

namespace netdyn {

double Spectrum::zero_tolerance() const noexcept {
  return 1e-12 * static_cast<double>(size()) * scale;
}

std::size_t Spectrum::zero_multiplicity() const noexcept {
  const double tol = zero_tolerance();
  return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                [tol](double x) { return std::abs(x) <= tol; }));
}

Spectrum decompose(const Matrix& m) {
  if (m.rows() != m.cols()) throw NonSymmetricError("spectral", "matrix is not square");
  const double scale = max_abs(m);
  if (!is_symmetric(m, 1e-10 * std::max(1.0, scale)))
    throw NonSymmetricError("spectral", "matrix is not symmetric");

  auto eig = linalg::symmetric_eigen(m);
  const std::size_t n = m.rows();
  // sign convention: first component that is not numerically zero is positive
  for (std::size_t c = 0; c < n; ++c) {
    double largest = 0.0;
    for (std::size_t r = 0; r < n; ++r) largest = std::max(largest, std::abs(eig.vectors(r, c)));
    const double cutoff = 1e-8 * largest;
    for (std::size_t r = 0; r < n; ++r) {
      const double x = eig.vectors(r, c);
      if (std::abs(x) <= cutoff) continue;
      if (x < 0)
        for (std::size_t k = 0; k < n; ++k) eig.vectors(k, c) = -eig.vectors(k, c);
      break;
    }
  }
  return Spectrum{std::move(eig.values), std::move(eig.vectors), scale};
}

Matrix reconstruct(const Spectrum& s) {
  return kernels::spectral_function(s.eigenvectors, s.eigenvalues);
}

TimescaleReport timescale_report(const Spectrum& s, std::size_t k_max) {
  const std::size_t n = s.size();
  const double tol = s.zero_tolerance();
  const auto is_zero = [tol](double x) { return std::abs(x) <= tol; };
  if (n == 0 || std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(), is_zero))
    throw NumericalError("spectral", "all eigenvalues are zero; no time scales");

  TimescaleReport report;
  report.timescales.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    report.timescales[i] = is_zero(s.eigenvalues[i]) ? std::numeric_limits<double>::infinity()
                                                     : 1.0 / s.eigenvalues[i];

  const auto ratio_at = [&](std::size_t k) -> std::optional<double> {
    const double lo = s.eigenvalues[k - 1];
    const double hi = s.eigenvalues[k];
    if (is_zero(lo)) {
      if (is_zero(hi)) return std::nullopt;
      return std::numeric_limits<double>::infinity();
    }
    return hi / lo;
  };

  const std::size_t last = std::min(k_max, n - 1);
  bool found = false;
  for (std::size_t k = 2; k <= last; ++k) {
    const auto r = ratio_at(k);
    if (!r) continue;
    if (!found || *r > report.gap_ratio) {
      report.gap_index = k;
      report.gap_ratio = *r;
      found = true;
    }
  }
  if (!found && n >= 2) {
    report.gap_index = 1;
    report.gap_ratio = ratio_at(1).value_or(1.0);
  }
  return report;
}

namespace {

// Largest or smallest singular value, from the eigenvalues of mᵀm.
double singular_extreme(const Matrix& m, bool largest) {
  const Matrix gram = kernels::gemm_tn(m, m);
  const auto eig = linalg::symmetric_eigen(gram);
  const double lambda = largest ? eig.values.back() : eig.values.front();
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace

double subspace_alignment(const Spectrum& s, const Partition& p, std::size_t k) {
  if (k != p.cell_count())
    throw SizeMismatchError("spectral", "k = " + std::to_string(k) + " does not match " +
                                            std::to_string(p.cell_count()) + " cells");
  const std::size_t n = s.size();
  if (p.size() != n) throw SizeMismatchError("spectral", "partition size does not match spectrum");
  if (k == 0 || k > n) throw SizeMismatchError("spectral", "invalid subspace dimension");

  Matrix vk(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) vk(i, j) = s.eigenvectors(i, j);

  // indicator columns are orthogonal; normalizing them gives an orthonormal basis
  const auto sizes = p.cell_sizes();
  Matrix qc(n, k);
  for (std::size_t i = 0; i < n; ++i)
    qc(i, p.cell(i)) = 1.0 / std::sqrt(static_cast<double>(sizes[p.cell(i)]));

  const Matrix overlap = kernels::gemm_tn(vk, qc);     // cosines
  const Matrix residual = qc - kernels::gemm(vk, overlap);  // sines
  const double cos_min = singular_extreme(overlap, false);
  const double sin_max = singular_extreme(residual, true);
  return std::atan2(sin_max, cos_min);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "index,eigenvalue\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) out << i + 1 << ',' << s.eigenvalues[i] << '\n';
}

void write_eigenvectors_csv(std::ostream& out, const Spectrum& s, const Graph& g) {
  if (g.size() != s.size()) throw SizeMismatchError("spectral", "graph does not match spectrum");
  out << "node";
  for (std::size_t j = 0; j < s.size(); ++j) out << ",v" << j + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << g.node(i);
    for (std::size_t j = 0; j < s.size(); ++j) out << ',' << s.eigenvectors(i, j);
    out << '\n';
  }
}

}  // namespace netdyn
