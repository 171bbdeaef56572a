#pragma once

#include <Eigen/Dense>

namespace gaussvol {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

/// (A + Aᵀ) / 2
Matrix symmetrize(const Matrix& a);

/// Largest absolute entry of A − Aᵀ relative to max(1, max |A_ij|).
double asymmetry(const Matrix& a);

/// Matrix exponential by scaling and squaring with a fixed degree-13 Padé
/// approximant. Deterministic for a fixed input.
Matrix expm(const Matrix& a);

/// Principal square root of a symmetric positive semidefinite matrix.
/// Negative eigenvalues from roundoff are clamped to zero.
Matrix sqrtm_psd(const Matrix& a);

/// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& a);

/// Determinant of the matrix with row `skip_row` and column `skip_col` removed.
double minor_determinant(const Matrix& a, Eigen::Index skip_row, Eigen::Index skip_col);

}  // namespace gaussvol
