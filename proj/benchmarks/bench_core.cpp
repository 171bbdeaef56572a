#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gaussvol/gaussvol.hpp"

using namespace gaussvol;
using twomode::CanonicalPoint;

namespace {

std::vector<CanonicalPoint> classical_points(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ab(0.1, 4.0), cd(-4.0, 4.0);
  std::vector<CanonicalPoint> out;
  while (out.size() < n) {
    const CanonicalPoint p{ab(rng), ab(rng), cd(rng), cd(rng)};
    if (twomode::in_domain(p, twomode::DomainTag::Classical)) out.push_back(p);
  }
  return out;
}

void BM_ClosedFormMetric(benchmark::State& state) {
  const auto pts = classical_points(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(twomode::closed_form_metric(pts[i++ & 1023]));
}
BENCHMARK(BM_ClosedFormMetric);

void BM_ClosedFormVolumeElement(benchmark::State& state) {
  const auto pts = classical_points(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(twomode::closed_form_volume_element(pts[i++ & 1023]));
}
BENCHMARK(BM_ClosedFormVolumeElement);

void BM_GenericMetric(benchmark::State& state) {
  const auto pts = classical_points(1024);
  std::vector<CovarianceMatrix> vs;
  for (const auto& p : pts) vs.push_back(twomode::canonical_embed(p));
  const auto& chart = twomode::canonical_chart();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(metric_closed_form(vs[i++ & 1023], chart));
}
BENCHMARK(BM_GenericMetric);

void BM_SymplecticEigenvalues(benchmark::State& state) {
  const auto pts = classical_points(1024);
  std::vector<CovarianceMatrix> vs;
  for (const auto& p : pts) vs.push_back(twomode::canonical_embed(p));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_eigenvalues(vs[i++ & 1023]));
}
BENCHMARK(BM_SymplecticEigenvalues);

void BM_Membership(benchmark::State& state) {
  const auto pts = classical_points(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(twomode::membership(pts[i++ & 1023]));
}
BENCHMARK(BM_Membership);

void BM_IntegrateDomains(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto reg = RegularizerSpec::energy(8.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate::integrate_domains(reg, integrate::phi_box(8.0), n, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_IntegrateDomains)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_OracleMetric(benchmark::State& state) {
  const auto v = twomode::canonical_embed({2, 1.5, 0.7, -0.4});
  for (auto _ : state)
    benchmark::DoNotOptimize(metric_mc_oracle(v, twomode::canonical_chart(), 100'000, 1));
}
BENCHMARK(BM_OracleMetric)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
