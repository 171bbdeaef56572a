#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "gaussvol/linalg.hpp"

namespace gaussvol {

/// Real symmetric 2N×2N covariance matrix of N bosonic modes, ordered
/// (q1, p1, ..., qN, pN), with the ħ = 1 convention V + iΩ ≥ 0.
///
/// Construction checks shape and symmetry (1e-12 relative) and stores the
/// symmetrized matrix. Positivity is *not* required: classification must be
/// able to reject non-states, so positivity is queried, not enforced.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix entries);

  int modes() const noexcept { return modes_; }
  Eigen::Index side() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  double trace() const { return entries_.trace(); }
  double determinant() const;
  double min_eigenvalue() const;
  bool positive_definite() const;

  static CovarianceMatrix identity(int modes);

 private:
  int modes_;
  Matrix entries_;
};

/// A real 2N×2N matrix with SᵀΩS = Ω (checked to 1e-9 absolute on construction).
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Matrix s);

  int modes() const noexcept { return static_cast<int>(s_.rows() / 2); }
  const Matrix& matrix() const noexcept { return s_; }

 private:
  Matrix s_;
};

enum class StateClass {
  NotAState,
  ClassicalOnly,
  QuantumSeparable,
  QuantumEntangled,
  QuantumUndetermined,
};

std::string_view to_string(StateClass c) noexcept;

/// Ω = ⊕_{j=1}^N [[0, 1], [−1, 0]].
Matrix symplectic_form(int modes);

/// Smallest eigenvalue of V strictly above +tol.
bool is_classical(const CovarianceMatrix& v, double tol = kDefaultTol);

/// The N symplectic eigenvalues of V, ascending.
///
/// They are the square roots of the eigenvalues of V^{1/2} Ω V Ωᵀ V^{1/2};
/// each eigenvalue of that symmetric matrix occurs twice and pairs are
/// averaged. Throws DomainError if V is not positive definite.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v);

/// V + iΩ ≥ 0, tested as: V positive definite and min ν ≥ 1 − tol.
bool is_quantum(const CovarianceMatrix& v, double tol = kDefaultTol);

/// Λ_B V Λ_B with Λ_B = diag(1, 1, 1, −1). Two modes only.
CovarianceMatrix partial_transpose_two_mode(const CovarianceMatrix& v);

/// Simon criterion: the partial transpose is itself a quantum covariance.
/// Requires a quantum two-mode V; throws DomainError otherwise.
bool is_separable_two_mode(const CovarianceMatrix& v, double tol = kDefaultTol);

StateClass classify(const CovarianceMatrix& v, double tol = kDefaultTol);

/// Mᵀ V M, symmetrized. Throws InvalidArgument if |det M| < 1e-12.
CovarianceMatrix apply_congruence(const CovarianceMatrix& v, const Matrix& m);

/// exp(ΩH) for a random symmetric H with entries uniform in [−scale, scale].
/// Throws NumericError if the result loses SᵀΩS = Ω beyond 1e-9.
SymplecticMatrix random_symplectic(int modes, double scale, std::uint64_t seed);

/// adj(V) = det(V) V⁻¹. Falls back to explicit cofactors when V is close to
/// singular (|det V| < 1e-300) or badly conditioned (κ > 1e12).
Matrix adjugate(const CovarianceMatrix& v);

/// tr adj(V), the sum of the principal (2N−1)-minors.
double trace_adjugate(const CovarianceMatrix& v);

}  // namespace gaussvol
