#pragma once

#include <cstddef>
#include <vector>

#include "core/thresholding.hpp"

namespace uthresh {

// Dense routines for the small symmetric systems this library meets
// (anchor counts stay in the tens). All matrices are square, row-major.

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi sweeps.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

/// Cholesky factor L (lower) of a positive-definite matrix.
/// Throws singular_system when a pivot is not strictly positive.
Matrix cholesky_factor(const Matrix& m);

/// Solves m x = b given the Cholesky factor of m.
std::vector<double> cholesky_solve(const Matrix& factor, const std::vector<double>& b);

/// Inverse via the Cholesky factor.
Matrix cholesky_inverse(const Matrix& factor);

/// Operator infinity norm: maximum absolute row sum.
double infinity_norm(const Matrix& m);

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);

double max_symmetry_defect(const Matrix& m);

}  // namespace uthresh
