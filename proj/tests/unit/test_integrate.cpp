#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gaussvol/errors.hpp"
#include "gaussvol/integrate.hpp"
#include "oracle.hpp"

using namespace gaussvol;
using namespace gaussvol::integrate;

namespace {

IntegrationResult run(DomainTag tag, RegularizerSpec reg, std::size_t n, std::uint64_t seed,
                      int streams = 1) {
  IntegrationRequest req;
  req.domain = tag;
  req.regularizer = reg;
  req.n_samples = n;
  req.seed = seed;
  req.streams = streams;
  return mc_volume(req);
}

bool ordered(const IntegrationResult& lo, const IntegrationResult& hi, double sigmas = 2.0) {
  return lo.estimate <= hi.estimate + sigmas * std::hypot(lo.std_error, hi.std_error);
}

}  // namespace

TEST(PhiBox, Examples) {
  const auto box = phi_box(8.0);
  EXPECT_EQ(box.axes[0].lo, 0.0);
  EXPECT_EQ(box.axes[0].hi, 4.0);
  EXPECT_EQ(box.axes[1].hi, 4.0);
  EXPECT_EQ(box.axes[2].lo, -2.0);
  EXPECT_EQ(box.axes[3].hi, 2.0);
  EXPECT_DOUBLE_EQ(box.volume(), 4.0 * 4.0 * 4.0 * 4.0);
  EXPECT_LT(phi_box(1e-6).volume(), 1e-20);
  EXPECT_THROW(phi_box(0.0), InvalidArgument);
}

TEST(PhiBox, ContainsEnergySupport) {
  std::mt19937_64 rng(1);
  const double e = 8.0;
  const auto box = phi_box(e);
  int inside = 0;
  for (int i = 0; i < 100'000; ++i) {
    const auto p = oracle::random_point(rng, 0.0, e, e);
    if (!twomode::in_domain(p, DomainTag::Classical, 0.0) || twomode::trace_v(p) > e) continue;
    ++inside;
    EXPECT_TRUE(box.contains(p));
  }
  EXPECT_GT(inside, 100);
}

TEST(UpsilonBox, Converges) {
  const auto search = upsilon_box_search(1.0, 1e-3, 100'000, 3);
  EXPECT_FALSE(search.probes.empty());
  EXPECT_LE(search.probes.size(), static_cast<std::size_t>(kMaxBoxDoublings + 1));
  EXPECT_GE(search.box.axes[0].hi, 4.0);
  const auto& last = search.probes.back();
  EXPECT_LE(last.shell, 1e-3 * last.inner);
  EXPECT_THROW(upsilon_box(0.0, 1e-3, 10'000, 1), InvalidArgument);
  EXPECT_THROW(upsilon_box(1.0, 1.0, 10'000, 1), InvalidArgument);
}

TEST(UpsilonBox, StartingWidth) {
  EXPECT_EQ(upsilon_box_search(25.0, 0.5, 20'000, 1).probes.front().half_width, 20.0);
  EXPECT_EQ(upsilon_box_search(0.25, 0.5, 20'000, 1).probes.front().half_width, 4.0);
}

TEST(UpsilonBox, HugeKappaDoesNotConverge) {
  try {
    upsilon_box(1e10, 1e-3, 20'000, 1);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.probes().size(), static_cast<std::size_t>(kMaxBoxDoublings + 1));
  }
}

TEST(UpsilonBox, DoublingKeepsEstimate) {
  const auto reg = RegularizerSpec::adjugate(1.0);
  const auto box = upsilon_box(1.0, 1e-3, 100'000, 5);
  const auto wide = Box::symmetric(2.0 * box.axes[0].hi);
  const auto a = integrate_domains(reg, box, 200'000, 6)[DomainTag::Classical];
  const auto b = integrate_domains(reg, wide, 200'000, 7)[DomainTag::Classical];
  EXPECT_LE(std::abs(a.estimate - b.estimate), 3.0 * std::hypot(a.std_error, b.std_error));
}

TEST(McVolume, EmptyQuantumBelowFour) {
  for (const auto tag : {DomainTag::Quantum, DomainTag::Separable, DomainTag::Entangled}) {
    const auto r = run(tag, RegularizerSpec::energy(0.5), 100'000, 1);
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_TRUE(r.empty_domain);
  }
  EXPECT_GT(run(DomainTag::Classical, RegularizerSpec::energy(0.5), 100'000, 1).estimate, 0.0);
}

TEST(McVolume, InclusionChains) {
  for (const auto reg : {RegularizerSpec::energy(8.0), RegularizerSpec::adjugate(5.0)}) {
    const auto box = resolve_box({DomainTag::Classical, reg, 200'000, 2});
    const auto v = integrate_domains(reg, box, 200'000, 2);
    EXPECT_TRUE(ordered(v[DomainTag::Separable], v[DomainTag::Quantum]));
    EXPECT_TRUE(ordered(v[DomainTag::Quantum], v[DomainTag::Classical]));
    EXPECT_GT(v[DomainTag::Separable].estimate, 0.0);
  }
}

TEST(McVolume, AdditivityExactInOnePass) {
  const auto reg = RegularizerSpec::energy(8.0);
  const auto v = integrate_domains(reg, phi_box(8.0), 200'000, 4);
  const double diff = v[DomainTag::Quantum].estimate - v[DomainTag::Separable].estimate;
  EXPECT_NEAR(diff, v[DomainTag::Entangled].estimate, 1e-9 * v[DomainTag::Quantum].estimate);
}

TEST(McVolume, AdditivityAcrossRuns) {
  const auto q = run(DomainTag::Quantum, RegularizerSpec::energy(8.0), 200'000, 10);
  const auto s = run(DomainTag::Separable, RegularizerSpec::energy(8.0), 200'000, 11);
  const auto e = run(DomainTag::Entangled, RegularizerSpec::energy(8.0), 200'000, 12);
  const double sigma = std::sqrt(q.std_error * q.std_error + s.std_error * s.std_error + e.std_error * e.std_error);
  EXPECT_LE(std::abs(q.estimate - s.estimate - e.estimate), 2.0 * sigma);
}

TEST(McVolume, MonotoneInEnergy) {
  double prev_est = 0.0, prev_err = 0.0;
  for (double e : {4.0, 6.0, 8.0, 12.0}) {
    const auto r = run(DomainTag::Quantum, RegularizerSpec::energy(e), 100'000, 3);
    EXPECT_GE(r.estimate + 2.0 * std::hypot(r.std_error, prev_err), prev_est);
    prev_est = r.estimate;
    prev_err = r.std_error;
  }
}

TEST(McVolume, ReportsBookkeeping) {
  const auto r = run(DomainTag::Quantum, RegularizerSpec::energy(8.0), 50'000, 9, 3);
  EXPECT_EQ(r.n_samples, 50'000u);
  EXPECT_EQ(r.seed, 9u);
  EXPECT_EQ(r.streams, 3);
  EXPECT_DOUBLE_EQ(r.box.volume(), phi_box(8.0).volume());
  EXPECT_GT(r.acceptance_fraction, 0.0);
  EXPECT_LT(r.acceptance_fraction, 1.0);
  EXPECT_GE(r.std_error, 0.0);
}

TEST(McVolume, Determinism) {
  for (int streams : {1, 4}) {
    const auto a = run(DomainTag::Entangled, RegularizerSpec::adjugate(5.0), 50'000, 42, streams);
    const auto b = run(DomainTag::Entangled, RegularizerSpec::adjugate(5.0), 50'000, 42, streams);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
  }
  const auto c = run(DomainTag::Classical, RegularizerSpec::energy(8.0), 50'000, 42);
  const auto d = run(DomainTag::Classical, RegularizerSpec::energy(8.0), 50'000, 43);
  EXPECT_NE(c.estimate, d.estimate);
}

TEST(McVolume, Validation) {
  EXPECT_THROW(run(DomainTag::Classical, RegularizerSpec::energy(8.0), 9'999, 1), InvalidArgument);
  EXPECT_THROW(run(DomainTag::Classical, RegularizerSpec::energy(8.0, 8), 10'000, 1), InvalidArgument);
  EXPECT_THROW(run(DomainTag::Classical, RegularizerSpec::energy(8.0), 10'000, 1, 0), InvalidArgument);
}

TEST(Ratio, DeltaMethod) {
  DomainVolumes v;
  v.by_domain[0].estimate = 10.0;
  v.by_domain[0].std_error = 1.0;
  v.by_domain[1].estimate = 2.0;
  v.by_domain[1].std_error = 0.5;
  v.cov_with_classical[1] = 0.25;
  const auto r = volume_ratio(v, DomainTag::Quantum);
  EXPECT_DOUBLE_EQ(r.value, 0.2);
  // (0.25 − 2·0.2·0.25 + 0.04·1)/100
  EXPECT_NEAR(r.error, std::sqrt((0.25 - 0.1 + 0.04) / 100.0), 1e-15);
  EXPECT_EQ(volume_ratio(v, DomainTag::Separable).value, 0.0);
}

TEST(Sweep, EnergyLimits) {
  SweepTemplate t;
  t.n_samples = 100'000;
  t.seed = 5;
  const auto table = sweep(SweepParam::Energy, std::vector<double>{0.5, 4.0, 8.0, 12.0}, t);
  ASSERT_EQ(table.rows.size(), 4u);
  const auto& low = table.rows[0];
  EXPECT_EQ(low.quantum_over_classical.value, 0.0);
  EXPECT_EQ(low.separable_over_classical.value, 0.0);
  EXPECT_EQ(low.entangled_over_classical.value, 0.0);
  for (std::size_t i = 2; i < 4; ++i) {
    const auto& r = table.rows[i];
    ASSERT_TRUE(r.ok());
    for (const Ratio& x : std::vector<Ratio>{r.quantum_over_classical, r.separable_over_classical, r.entangled_over_classical}) {
      EXPECT_GT(x.value, 0.0);
      EXPECT_LT(x.value, 1.0);
    }
  }
}

TEST(Sweep, RecordsFailuresPerRow) {
  SweepTemplate t;
  t.n_samples = 20'000;
  const auto table = sweep(SweepParam::Kappa, std::vector<double>{1.0, 1e10}, t);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_TRUE(table.rows[0].ok());
  EXPECT_FALSE(table.rows[1].ok());
  EXPECT_TRUE(table.rows[1].box_not_converged);
  EXPECT_FALSE(table.rows[1].probes.empty());
}

TEST(Sweep, Validation) {
  SweepTemplate t;
  EXPECT_THROW(sweep(SweepParam::Energy, std::vector<double>{}, t), InvalidArgument);
  EXPECT_THROW(sweep(SweepParam::Energy, std::vector<double>{8.0, 4.0}, t), InvalidArgument);
}
