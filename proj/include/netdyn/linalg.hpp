#pragma once

#include "netdyn/matrix.hpp"

namespace netdyn::linalg {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column i pairs with values[i]
};

/// Householder tridiagonalization followed by implicit-shift QL iteration.
/// Only the lower triangle of `a` is read. Throws NumericalError if QL fails
/// to converge.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Solves A·X = B by LU decomposition with partial pivoting.
Matrix lu_solve(const Matrix& a, const Matrix& b);

/// Matrix exponential by scaling and squaring with the degree-13 Padé
/// approximant. Works for non-symmetric input.
Matrix expm(const Matrix& a);

}  // namespace netdyn::linalg
