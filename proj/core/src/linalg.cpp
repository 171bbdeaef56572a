#include "gaussvol/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gaussvol {

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double asymmetry(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

Matrix expm(const Matrix& a) {
  // Higham (2005) degree-13 coefficients and its theta_13 threshold.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));

  const Matrix x = a / std::ldexp(1.0, s);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;

  const Matrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 +
                         b[5] * x4 + b[3] * x2 + b[1] * id;
  const Matrix u = x * u_inner;
  const Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 +
                   b[4] * x4 + b[2] * x2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

Matrix sqrtm_psd(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

Vector symmetric_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double minor_determinant(const Matrix& a, Eigen::Index skip_row, Eigen::Index skip_col) {
  const Eigen::Index n = a.rows();
  if (n == 1) return 1.0;
  Matrix sub(n - 1, n - 1);
  for (Eigen::Index i = 0, si = 0; i < n; ++i) {
    if (i == skip_row) continue;
    for (Eigen::Index j = 0, sj = 0; j < n; ++j) {
      if (j == skip_col) continue;
      sub(si, sj++) = a(i, j);
    }
    ++si;
  }
  return sub.fullPivLu().determinant();
}

}  // namespace gaussvol
