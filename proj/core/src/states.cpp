#include "gaussvol/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gaussvol/errors.hpp"

namespace gaussvol {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kSymplecticTol = 1e-9;

bool well_conditioned(const Vector& eigenvalues) {
  const double lo = eigenvalues.cwiseAbs().minCoeff();
  const double hi = eigenvalues.cwiseAbs().maxCoeff();
  return lo > 0.0 && hi / lo <= 1e12;
}

Matrix cofactor_adjugate(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Matrix adj(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(i, j) = sign * minor_determinant(a, j, i);
    }
  }
  return adj;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Matrix entries) {
  if (entries.rows() != entries.cols())
    throw InvalidArgument("covariance matrix must be square");
  if (entries.rows() < 2 || entries.rows() % 2 != 0)
    throw InvalidArgument("covariance matrix side must be 2N with N >= 1, got " +
                          std::to_string(entries.rows()));
  if (!entries.allFinite()) throw InvalidArgument("covariance matrix has non-finite entries");
  if (asymmetry(entries) > kSymmetryTol)
    throw InvalidArgument("covariance matrix is not symmetric");
  modes_ = static_cast<int>(entries.rows() / 2);
  entries_ = symmetrize(entries);
}

double CovarianceMatrix::determinant() const { return entries_.partialPivLu().determinant(); }

double CovarianceMatrix::min_eigenvalue() const {
  return symmetric_eigenvalues(entries_).minCoeff();
}

bool CovarianceMatrix::positive_definite() const {
  Eigen::LLT<Matrix> llt(entries_);
  return llt.info() == Eigen::Success && min_eigenvalue() > 0.0;
}

CovarianceMatrix CovarianceMatrix::identity(int modes) {
  if (modes < 1) throw InvalidArgument("mode count must be >= 1");
  return CovarianceMatrix(Matrix::Identity(2 * modes, 2 * modes));
}

SymplecticMatrix::SymplecticMatrix(Matrix s) : s_(std::move(s)) {
  if (s_.rows() != s_.cols() || s_.rows() < 2 || s_.rows() % 2 != 0)
    throw InvalidArgument("symplectic matrix must be 2N x 2N");
  const Matrix omega = symplectic_form(static_cast<int>(s_.rows() / 2));
  const double err = (s_.transpose() * omega * s_ - omega).cwiseAbs().maxCoeff();
  if (!(err <= kSymplecticTol))
    throw NumericError("matrix violates S^T Omega S = Omega (max error " +
                       std::to_string(err) + ")");
}

std::string_view to_string(StateClass c) noexcept {
  switch (c) {
    case StateClass::NotAState: return "NotAState";
    case StateClass::ClassicalOnly: return "ClassicalOnly";
    case StateClass::QuantumSeparable: return "QuantumSeparable";
    case StateClass::QuantumEntangled: return "QuantumEntangled";
    case StateClass::QuantumUndetermined: return "QuantumUndetermined";
  }
  return "?";
}

Matrix symplectic_form(int modes) {
  if (modes < 1) throw InvalidArgument("mode count must be >= 1");
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

bool is_classical(const CovarianceMatrix& v, double tol) { return v.min_eigenvalue() > tol; }

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v) {
  if (!v.positive_definite())
    throw DomainError("symplectic eigenvalues need a positive definite matrix");
  const Matrix omega = symplectic_form(v.modes());
  const Matrix root = sqrtm_psd(v.matrix());
  const Matrix m = root * omega * v.matrix() * omega.transpose() * root;
  const Vector sq = symmetric_eigenvalues(m);

  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(v.modes()));
  for (Eigen::Index k = 0; k + 1 < sq.size(); k += 2) {
    const double pair = 0.5 * (sq(k) + sq(k + 1));
    nu.push_back(std::sqrt(std::max(pair, 0.0)));
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

bool is_quantum(const CovarianceMatrix& v, double tol) {
  if (!v.positive_definite()) return false;
  return symplectic_eigenvalues(v).front() >= 1.0 - tol;
}

CovarianceMatrix partial_transpose_two_mode(const CovarianceMatrix& v) {
  if (v.modes() != 2) throw InvalidArgument("partial transpose is defined for two modes only");
  Matrix t = v.matrix();
  for (Eigen::Index k = 0; k < 4; ++k) {
    if (k == 3) continue;
    t(3, k) = -t(3, k);
    t(k, 3) = -t(k, 3);
  }
  return CovarianceMatrix(std::move(t));
}

bool is_separable_two_mode(const CovarianceMatrix& v, double tol) {
  if (v.modes() != 2) throw DomainError("separability test needs a two-mode state");
  if (!is_quantum(v, tol)) throw DomainError("separability test needs a quantum state");
  return is_quantum(partial_transpose_two_mode(v), tol);
}

StateClass classify(const CovarianceMatrix& v, double tol) {
  if (!v.positive_definite()) return StateClass::NotAState;
  if (!is_quantum(v, tol)) return StateClass::ClassicalOnly;
  if (v.modes() != 2) return StateClass::QuantumUndetermined;
  return is_separable_two_mode(v, tol) ? StateClass::QuantumSeparable
                                       : StateClass::QuantumEntangled;
}

CovarianceMatrix apply_congruence(const CovarianceMatrix& v, const Matrix& m) {
  if (m.rows() != v.side() || m.cols() != v.side())
    throw InvalidArgument("congruence matrix has the wrong shape");
  if (std::abs(m.partialPivLu().determinant()) < 1e-12)
    throw InvalidArgument("congruence matrix is singular");
  return CovarianceMatrix(symmetrize(m.transpose() * v.matrix() * m));
}

SymplecticMatrix random_symplectic(int modes, double scale, std::uint64_t seed) {
  if (modes < 1) throw InvalidArgument("mode count must be >= 1");
  if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-scale, scale);
  const int n = 2 * modes;
  Matrix h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) h(i, j) = h(j, i) = uniform(rng);
  Matrix s = expm(symplectic_form(modes) * h);
  if (!s.allFinite()) throw NumericError("matrix exponential overflowed");
  return SymplecticMatrix(std::move(s));
}

Matrix adjugate(const CovarianceMatrix& v) {
  const double det = v.determinant();
  const Vector ev = symmetric_eigenvalues(v.matrix());
  if (std::abs(det) < 1e-300 || !well_conditioned(ev)) return cofactor_adjugate(v.matrix());
  return symmetrize(det * v.matrix().inverse());
}

double trace_adjugate(const CovarianceMatrix& v) {
  const double det = v.determinant();
  const Vector ev = symmetric_eigenvalues(v.matrix());
  if (std::abs(det) < 1e-300 || !well_conditioned(ev)) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.side(); ++i) sum += minor_determinant(v.matrix(), i, i);
    return sum;
  }
  return det * v.matrix().inverse().trace();
}

}  // namespace gaussvol
