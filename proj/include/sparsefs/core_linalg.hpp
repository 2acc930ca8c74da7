#pragma once

#include "sparsefs/types.hpp"

namespace sparsefs {

// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending,
// eigenvectors orthonormal in the matching column order.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

// Subtract the mean of each row (feature) so every row sums to zero.
// Requires at least two samples.
DataMatrix center_columns(const DataMatrix& X);
Matrix center_columns(const Matrix& X);

// X * X^T with the upper triangle computed once and mirrored, so the result
// is exactly symmetric.
Matrix gram(const Matrix& X);

// Sum of the l2 norms of the matrix *columns*. Note this is the column
// convention (sum_j ||a_j||_2), which is the opposite of the more common
// row-wise l2,1 definition.
double l21_norm(const Matrix& A);

// Eigendecomposition of a symmetric matrix; throws shape_error if the input
// is not symmetric within 1e-8 relative tolerance, numeric_error if the
// eigensolver fails to converge.
EigenDecomposition symmetric_eig(const Matrix& A);

// Frobenius-nearest symmetric matrix: (M + M^T) / 2.
Matrix project_symmetric(const Matrix& M);

// Frobenius-nearest positive-semidefinite matrix: symmetrize, then clamp
// negative eigenvalues to zero and reassemble. Idempotent.
Matrix project_psd(const Matrix& M);

}  // namespace sparsefs
