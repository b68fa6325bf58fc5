#pragma once

#include <cstddef>
#include <iosfwd>

#include "netdyn/graph.hpp"
#include "netdyn/matrix.hpp"

namespace netdyn {

/// Eigenpairs of a symmetric matrix, eigenvalues ascending. Each eigenvector's
/// first non-negligible component is positive.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;  // column i pairs with eigenvalues[i]
  double scale = 0.0;   // max |entry| of the decomposed matrix

  std::size_t size() const noexcept { return eigenvalues.size(); }
  Vector eigenvector(std::size_t i) const { return eigenvectors.column(i); }

  /// Eigenvalues with |λ| below this are treated as zero: 1e-12·n·scale.
  double zero_tolerance() const noexcept;
  std::size_t zero_multiplicity() const noexcept;
};

/// Full dense symmetric eigendecomposition. Throws NonSymmetricError if
/// |m_ij − m_ji| exceeds 1e-10·max(1, max|m|).
Spectrum decompose(const Matrix& m);

/// V·diag(λ)·Vᵀ
Matrix reconstruct(const Spectrum& s);

struct TimescaleReport {
  Vector timescales;          // 1/λ_i, +inf for zero eigenvalues
  std::size_t gap_index = 1;  // 1-based k maximizing λ_{k+1}/λ_k
  double gap_ratio = 1.0;     // +inf when λ_k is zero and λ_{k+1} is not
};

/// Scans k = 2..k_max (clamped to n−1) for the largest ratio λ_{k+1}/λ_k.
/// A zero λ_k followed by a nonzero λ_{k+1} counts as an infinite ratio; runs
/// of zeros are skipped. Ties go to the smaller k. Throws NumericalError if
/// every eigenvalue is zero.
TimescaleReport timescale_report(const Spectrum& s, std::size_t k_max);

/// Largest principal angle (radians) between span(C) for partition p and the
/// span of the k eigenvectors with smallest eigenvalues. Requires k = p.k.
double subspace_alignment(const Spectrum& s, const Partition& p, std::size_t k);

/// CSV `index,eigenvalue` (1-based index).
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
/// CSV with header `node,v1,...,vn`, one row per node.
void write_eigenvectors_csv(std::ostream& out, const Spectrum& s, const Graph& g);

}  // namespace netdyn
