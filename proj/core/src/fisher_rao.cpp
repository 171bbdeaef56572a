#include "gaussvol/fisher_rao.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "gaussvol/errors.hpp"

namespace gaussvol {
namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kBoundSlack = 1e-9;

Matrix entry_basis(int side, int row, int col) {
  Matrix b = Matrix::Zero(side, side);
  b(row - 1, col - 1) = 1.0;
  b(col - 1, row - 1) = 1.0;
  return b;
}

ParamChart upper_triangular_chart(int modes, bool keep_quadrature_pairs) {
  if (modes < 1) throw InvalidArgument("mode count must be >= 1");
  const int side = 2 * modes;
  std::vector<Matrix> basis;
  std::vector<std::vector<ParamChart::Entry>> entries;
  for (int mu = 1; mu <= side; ++mu) {
    for (int nu = mu; nu <= side; ++nu) {
      // q_k–p_k of the same mode sits at (2k−1, 2k).
      if (!keep_quadrature_pairs && mu % 2 == 1 && nu == mu + 1) continue;
      basis.push_back(entry_basis(side, mu, nu));
      entries.push_back({{mu, nu}});
    }
  }
  return ParamChart(modes, std::move(basis), std::move(entries));
}

// Welford accumulator over the m(m+1)/2 upper-triangular score products.
struct ProductMoments {
  std::size_t count = 0;
  Vector mean;
  Vector m2;

  explicit ProductMoments(Eigen::Index k) : mean(Vector::Zero(k)), m2(Vector::Zero(k)) {}

  void add(const Vector& x) {
    ++count;
    const Vector delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta.cwiseProduct(x - mean);
  }

  void merge(const ProductMoments& other) {
    if (other.count == 0) return;
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(other.count);
    const Vector delta = other.mean - mean;
    mean += delta * (n2 / (n1 + n2));
    m2 += other.m2 + delta.cwiseProduct(delta) * (n1 * n2 / (n1 + n2));
    count += other.count;
  }
};

}  // namespace

int param_index(int mu, int nu, int modes) {
  if (modes < 1) throw InvalidArgument("mode count must be >= 1");
  if (mu < 1 || nu > 2 * modes) throw InvalidArgument("index outside the 2N x 2N matrix");
  if (mu > nu) throw InvalidArgument("param_index needs mu <= nu");
  int l = nu - mu + 1;
  for (int r = 0; r <= mu - 2; ++r) l += 2 * modes - r;
  return l;
}

ParamChart::ParamChart(int modes, std::vector<Matrix> basis,
                       std::vector<std::vector<Entry>> entries)
    : modes_(modes), basis_(std::move(basis)), entries_(std::move(entries)) {
  if (modes_ < 1) throw InvalidArgument("mode count must be >= 1");
  if (basis_.empty()) throw InvalidArgument("chart needs at least one parameter");
  if (entries_.size() != basis_.size())
    throw InvalidArgument("chart entry list does not match basis size");
  const Eigen::Index side = 2 * modes_;
  for (const auto& b : basis_) {
    if (b.rows() != side || b.cols() != side)
      throw InvalidArgument("chart basis matrix has the wrong shape");
    if (asymmetry(b) > 1e-12) throw InvalidArgument("chart basis matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(bound_matrix(*this).e);
  if (llt.info() != Eigen::Success)
    throw InvalidArgument("chart basis is not linearly independent");
}

ParamChart ParamChart::full(int modes) { return upper_triangular_chart(modes, true); }

ParamChart ParamChart::uncorrelated_quadratures(int modes) {
  return upper_triangular_chart(modes, false);
}

std::optional<int> ParamChart::index_of(int row, int col) const {
  if (row > col) std::swap(row, col);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    for (const auto& [r, c] : entries_[k])
      if (r == row && c == col) return static_cast<int>(k);
  }
  return std::nullopt;
}

Matrix ParamChart::embed(std::span<const double> theta) const {
  if (theta.size() != basis_.size()) throw InvalidArgument("parameter vector has wrong length");
  const Eigen::Index side = 2 * modes_;
  Matrix v = Matrix::Zero(side, side);
  for (std::size_t k = 0; k < basis_.size(); ++k) v += theta[k] * basis_[k];
  return v;
}

Vector ParamChart::coordinates(const CovarianceMatrix& v) const {
  const auto e = bound_matrix(*this);
  Vector rhs(size());
  for (int k = 0; k < size(); ++k)
    rhs(k) = 0.5 * (basis_[static_cast<std::size_t>(k)].cwiseProduct(v.matrix())).sum();
  return e.e.llt().solve(rhs);
}

ParamChart ParamChart::pushforward(const Matrix& m) const {
  std::vector<Matrix> pushed;
  pushed.reserve(basis_.size());
  for (const auto& b : basis_) pushed.push_back(symmetrize(m.transpose() * b * m));
  return ParamChart(modes_, std::move(pushed), entries_);
}

MetricAtPoint metric_closed_form(const CovarianceMatrix& v, const ParamChart& chart) {
  if (v.modes() != chart.modes()) throw InvalidArgument("chart and matrix mode counts differ");
  if (!(v.min_eigenvalue() > kSingularTol))
    throw DomainError("metric needs a positive definite covariance matrix");

  Eigen::LLT<Matrix> llt(v.matrix());
  const int m = chart.size();
  std::vector<Matrix> w;  // V⁻¹ B_μ
  w.reserve(static_cast<std::size_t>(m));
  for (const auto& b : chart.basis()) w.push_back(llt.solve(b));

  MetricAtPoint out;
  out.g.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const auto& wi = w[static_cast<std::size_t>(i)];
      const auto& wj = w[static_cast<std::size_t>(j)];
      // tr(AB) = Σ A ⊙ Bᵀ
      out.g(i, j) = out.g(j, i) = 0.5 * wi.cwiseProduct(wj.transpose()).sum();
    }
  }
  out.det_g = out.g.fullPivLu().determinant();
  out.point = chart.coordinates(v);
  return out;
}

OracleMetric metric_mc_oracle(const CovarianceMatrix& v, const ParamChart& chart,
                              std::size_t n_samples, std::uint64_t seed, int streams) {
  if (n_samples < 1000) throw InvalidArgument("oracle needs at least 1000 samples");
  if (streams < 1) throw InvalidArgument("stream count must be >= 1");
  if (v.modes() != chart.modes()) throw InvalidArgument("chart and matrix mode counts differ");
  if (!v.positive_definite()) throw DomainError("oracle needs a positive definite matrix");

  const Eigen::Index side = v.side();
  const int m = chart.size();
  const Eigen::LLT<Matrix> llt(v.matrix());
  const Matrix lower = llt.matrixL();
  Vector trace_term(m);
  for (int k = 0; k < m; ++k) trace_term(k) = llt.solve(chart.basis(k)).trace();

  const Eigen::Index n_pairs = m * (m + 1) / 2;
  std::vector<ProductMoments> partial(static_cast<std::size_t>(streams),
                                      ProductMoments(n_pairs));

  auto run_stream = [&](int k) {
    const std::size_t base = n_samples / static_cast<std::size_t>(streams);
    const std::size_t count =
        base + (static_cast<std::size_t>(k) < n_samples % static_cast<std::size_t>(streams));
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), 0x6f72u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    Vector z(side), score(m), prod(n_pairs);
    auto& acc = partial[static_cast<std::size_t>(k)];
    for (std::size_t s = 0; s < count; ++s) {
      for (Eigen::Index i = 0; i < side; ++i) z(i) = normal(rng);
      const Vector xi = lower * z;
      const Vector y = llt.solve(xi);  // V⁻¹ξ
      for (int mu = 0; mu < m; ++mu)
        score(mu) = -0.5 * (trace_term(mu) - y.dot(chart.basis(mu) * y));
      Eigen::Index p = 0;
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) prod(p++) = score(i) * score(j);
      acc.add(prod);
    }
  };

  const unsigned workers =
      std::max(1u, std::min(static_cast<unsigned>(streams), std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (int k = 0; k < streams; ++k) run_stream(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int k = static_cast<int>(w); k < streams; k += static_cast<int>(workers))
          run_stream(k);
      });
  }

  ProductMoments total(n_pairs);
  for (const auto& part : partial) total.merge(part);

  OracleMetric out;
  out.n_samples = n_samples;
  out.metric.g.resize(m, m);
  out.std_error.resize(m, m);
  const double n = static_cast<double>(total.count);
  Eigen::Index p = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j, ++p) {
      out.metric.g(i, j) = out.metric.g(j, i) = total.mean(p);
      const double var = total.m2(p) / (n - 1.0);
      out.std_error(i, j) = out.std_error(j, i) = std::sqrt(var / n);
    }
  }
  out.metric.det_g = out.metric.g.fullPivLu().determinant();
  out.metric.point = chart.coordinates(v);
  return out;
}

double volume_element(const MetricAtPoint& metric) {
  if (metric.det_g < -1e-12)
    throw NumericError("negative metric determinant " + std::to_string(metric.det_g));
  return std::sqrt(std::max(metric.det_g, 0.0));
}

double volume_element(const CovarianceMatrix& v, const ParamChart& chart) {
  return volume_element(metric_closed_form(v, chart));
}

BoundMatrixE bound_matrix(const ParamChart& chart) {
  const int m = chart.size();
  BoundMatrixE out;
  out.e.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      out.e(i, j) = out.e(j, i) = 0.5 * chart.basis(i).cwiseProduct(chart.basis(j)).sum();
  out.det_e = out.e.fullPivLu().determinant();
  return out;
}

DetBound det_bound(const CovarianceMatrix& v, const ParamChart& chart, const BoundMatrixE& e) {
  DetBound out;
  out.det_g = metric_closed_form(v, chart).det_g;
  out.lambda_min = v.min_eigenvalue();
  out.bound = std::pow(1.0 / out.lambda_min, 2 * chart.size()) * e.det_e;
  out.holds = out.det_g <= out.bound * (1.0 + kBoundSlack);
  return out;
}

DetBound det_bound(const CovarianceMatrix& v, const ParamChart& chart) {
  return det_bound(v, chart, bound_matrix(chart));
}

bool det_bound_holds(const CovarianceMatrix& v, const ParamChart& chart) {
  return det_bound(v, chart).holds;
}

}  // namespace gaussvol
