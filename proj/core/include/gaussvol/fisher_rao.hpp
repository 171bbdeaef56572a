#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gaussvol/linalg.hpp"
#include "gaussvol/states.hpp"

namespace gaussvol {

/// Linear index of V_{μν} (1-based, μ ≤ ν) in the upper-triangular chart of
/// a 2N×2N covariance matrix: l = Σ_{r=0}^{μ−2}(2N − r) + ν − μ + 1.
int param_index(int mu, int nu, int modes);

/// A linear coordinate chart θ ↦ V(θ) = Σ_μ θ^μ B_μ on covariance matrices.
///
/// The basis matrices B_μ = ∂_μV are constant and symmetric. Each parameter
/// remembers which entries (μ, ν) of V it drives so the index map can be
/// queried in both directions.
class ParamChart {
 public:
  using Entry = std::pair<int, int>;  // 1-based (row, col), row <= col

  ParamChart(int modes, std::vector<Matrix> basis, std::vector<std::vector<Entry>> entries);

  /// Every upper-triangular entry as its own parameter, m = N(2N+1).
  static ParamChart full(int modes);
  /// Full chart minus the q_k–p_k correlations of each mode, m = N(2N+1) − N.
  static ParamChart uncorrelated_quadratures(int modes);

  int modes() const noexcept { return modes_; }
  int size() const noexcept { return static_cast<int>(basis_.size()); }
  const Matrix& basis(int mu) const { return basis_.at(static_cast<std::size_t>(mu)); }
  const std::vector<Matrix>& basis() const noexcept { return basis_; }

  /// 0-based parameter driving entry (row, col) of V (1-based), if any.
  std::optional<int> index_of(int row, int col) const;

  Matrix embed(std::span<const double> theta) const;
  /// Least-squares coordinates of V in this chart.
  Vector coordinates(const CovarianceMatrix& v) const;

  /// Chart with basis Mᵀ B_μ M, the coordinates of Mᵀ V M.
  ParamChart pushforward(const Matrix& m) const;

 private:
  int modes_;
  std::vector<Matrix> basis_;
  std::vector<std::vector<Entry>> entries_;
};

struct MetricAtPoint {
  Matrix g;
  Vector point;
  double det_g = 0.0;
};

struct OracleMetric {
  MetricAtPoint metric;
  Matrix std_error;
  std::size_t n_samples = 0;
};

/// g_{μν} = ½ tr(V⁻¹ B_μ V⁻¹ B_ν). Throws DomainError unless V is positive
/// definite with min eigenvalue above 1e-12.
MetricAtPoint metric_closed_form(const CovarianceMatrix& v, const ParamChart& chart);

/// Monte Carlo estimate of E[∂_μ ln P ∂_ν ln P] under ξ ~ N(0, V).
///
/// The score is analytic, ∂_μ ln P = −½[tr(V⁻¹B_μ) − ξᵀV⁻¹B_μV⁻¹ξ]. Samples
/// are split into `streams` index-ordered substreams seeded from (seed, k),
/// so the result is fixed for a given (seed, streams).
OracleMetric metric_mc_oracle(const CovarianceMatrix& v, const ParamChart& chart,
                              std::size_t n_samples, std::uint64_t seed, int streams = 8);

/// √det g. Throws NumericError if det g < −1e-12 (a broken chart).
double volume_element(const CovarianceMatrix& v, const ParamChart& chart);
double volume_element(const MetricAtPoint& metric);

struct BoundMatrixE {
  Matrix e;  // E_{μν} = ½ tr(B_μ B_ν)
  double det_e = 0.0;
};

BoundMatrixE bound_matrix(const ParamChart& chart);

/// Both sides of det g ≤ (1/λ_min(V))^{2m} det E.
struct DetBound {
  double det_g = 0.0;
  double bound = 0.0;
  double lambda_min = 0.0;
  bool holds = false;
};

DetBound det_bound(const CovarianceMatrix& v, const ParamChart& chart);
DetBound det_bound(const CovarianceMatrix& v, const ParamChart& chart, const BoundMatrixE& e);
bool det_bound_holds(const CovarianceMatrix& v, const ParamChart& chart);

}  // namespace gaussvol
