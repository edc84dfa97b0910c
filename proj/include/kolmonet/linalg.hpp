#pragma once

#include "kolmonet/matrix.hpp"

namespace kolmonet {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sweeps until the
/// off-diagonal Frobenius norm falls below `tol` times the matrix norm.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-13, int max_sweeps = 100);

/**
 * Symmetric S with S S = 2A for symmetric positive definite A.
 *
 * Diagonal input takes the exact entrywise root; otherwise S = V sqrt(2 Lambda) V^T
 * from jacobi_eigen. Throws NotSymmetric when |A - A^T| exceeds 1e-12 relative,
 * NotSpd when an eigenvalue is <= 1e-12 times the largest.
 */
Matrix sqrt_spd(const Matrix& a);

}  // namespace kolmonet
