#include "gaussvol/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace gaussvol::integrate {
namespace {

constexpr std::size_t kMinSamples = 10'000;
constexpr std::size_t kMinProbeSamples = 1'000;
constexpr std::uint32_t kMainSalt = 0;
constexpr std::uint32_t kProbeSalt = 0x100;

// Running sums for one domain in one stream.
struct DomainSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t support = 0;
};

struct PassSums {
  std::array<DomainSums, 4> domains{};
  std::size_t count = 0;

  PassSums& operator+=(const PassSums& o) {
    for (std::size_t k = 0; k < 4; ++k) {
      domains[k].sum += o.domains[k].sum;
      domains[k].sum_sq += o.domains[k].sum_sq;
      domains[k].support += o.domains[k].support;
    }
    count += o.count;
    return *this;
  }
};

PassSums pairwise_reduce(std::span<const PassSums> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts.front();
  const std::size_t half = parts.size() / 2;
  PassSums left = pairwise_reduce(parts.first(half));
  left += pairwise_reduce(parts.subspan(half));
  return left;
}

template <typename Fn>
void for_each_stream(int streams, Fn&& fn) {
  const unsigned workers = std::max(
      1u, std::min(static_cast<unsigned>(streams), std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (int k = 0; k < streams; ++k) fn(k);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int k = static_cast<int>(w); k < streams; k += static_cast<int>(workers)) fn(k);
    });
}

// One Monte Carlo pass over `box`. Points inside `excluded` contribute zero,
// which turns the pass into a shell integral.
PassSums run_pass(const RegularizerSpec& reg, const Box& box, std::size_t n_samples,
                  std::uint64_t seed, std::uint32_t salt, int streams, double tol,
                  const std::optional<Box>& excluded = std::nullopt) {
  std::vector<PassSums> parts(static_cast<std::size_t>(streams));

  for_each_stream(streams, [&](int k) {
    const std::size_t per = n_samples / static_cast<std::size_t>(streams);
    const std::size_t count =
        per + (static_cast<std::size_t>(k) < n_samples % static_cast<std::size_t>(streams));
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), salt};
    std::mt19937_64 rng(seq);
    std::array<std::uniform_real_distribution<double>, 4> axis;
    for (std::size_t i = 0; i < 4; ++i)
      axis[i] = std::uniform_real_distribution<double>(box.axes[i].lo, box.axes[i].hi);

    PassSums acc;
    acc.count = count;
    for (std::size_t s = 0; s < count; ++s) {
      const CanonicalPoint p{axis[0](rng), axis[1](rng), axis[2](rng), axis[3](rng)};
      if (excluded && excluded->contains(p)) continue;
      const auto member = twomode::membership(p, tol);
      if (!member.classical) continue;
      if (reg.kind == RegularizerKind::EnergyPhi && twomode::trace_v(p) > reg.bound_e) continue;

      const MatrixInvariants inv{twomode::trace_v(p), twomode::det_v(p),
                                 twomode::trace_adj_v(p)};
      const double w = regularizer_weight(inv, reg);
      const double f = (w > 0.0) ? w * twomode::closed_form_volume_element(p) : 0.0;
      if (!std::isfinite(f)) throw NumericError("non-finite integrand inside the domain");

      for (std::size_t d = 0; d < 4; ++d) {
        if (!member[static_cast<DomainTag>(d)]) continue;
        auto& slot = acc.domains[d];
        slot.sum += f;
        slot.sum_sq += f * f;
        ++slot.support;
      }
    }
    parts[static_cast<std::size_t>(k)] = acc;
  });

  return pairwise_reduce(parts);
}

double mean_of(const DomainSums& d, std::size_t n) { return d.sum / static_cast<double>(n); }

double pass_estimate(const PassSums& sums, const Box& box, DomainTag t) {
  return box.volume() * mean_of(sums.domains[static_cast<std::size_t>(t)], sums.count);
}

double pass_error(const PassSums& sums, const Box& box, DomainTag t) {
  const auto& d = sums.domains[static_cast<std::size_t>(t)];
  const double n = static_cast<double>(sums.count);
  const double mean = d.sum / n;
  // Squares of contributions below ~1e-154 underflow; report such a pass as
  // unresolved rather than exact.
  if (d.sum > 0.0 && d.sum_sq == 0.0) return box.volume() * mean;
  const double var = std::max(0.0, (d.sum_sq / n - mean * mean) * n / (n - 1.0));
  return box.volume() * std::sqrt(var / n);
}

void validate_common(std::size_t n_samples, int streams, double tol) {
  if (n_samples < kMinSamples)
    throw InvalidArgument("integration needs at least 10000 samples");
  if (streams < 1) throw InvalidArgument("stream count must be >= 1");
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
}

}  // namespace

double Box::volume() const noexcept {
  double v = 1.0;
  for (const auto& ax : axes) v *= ax.width();
  return v;
}

bool Box::contains(const CanonicalPoint& p) const noexcept {
  const std::array<double, 4> x{p.a, p.b, p.c, p.d};
  for (std::size_t i = 0; i < 4; ++i)
    if (x[i] < axes[i].lo || x[i] > axes[i].hi) return false;
  return true;
}

Box Box::symmetric(double half_width) {
  return Box{{Interval{0.0, half_width}, Interval{0.0, half_width},
              Interval{-half_width, half_width}, Interval{-half_width, half_width}}};
}

Box phi_box(double bound_e) {
  if (!(bound_e > 0.0)) throw InvalidArgument("energy bound E must be positive");
  const double ab = bound_e / 2.0;
  const double cd = bound_e / 4.0;
  return Box{{Interval{0.0, ab}, Interval{0.0, ab}, Interval{-cd, cd}, Interval{-cd, cd}}};
}

BoxSearch upsilon_box_search(double kappa, double eps_tail, std::size_t n_samples,
                             std::uint64_t seed, int streams, double tol, DomainTag domain) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(eps_tail > 0.0 && eps_tail < 1.0)) throw InvalidArgument("eps_tail must lie in (0, 1)");
  if (streams < 1) throw InvalidArgument("stream count must be >= 1");

  const auto reg = RegularizerSpec::adjugate(kappa);
  const std::size_t probe_n = std::max(n_samples / 10, kMinProbeSamples);
  double half_width = std::max(4.0, 4.0 * std::sqrt(kappa));

  BoxSearch out;
  for (int doubling = 0; doubling <= kMaxBoxDoublings; ++doubling) {
    const Box inner_box = Box::symmetric(half_width);
    const Box outer_box = Box::symmetric(2.0 * half_width);
    const auto salt = kProbeSalt + 2u * static_cast<std::uint32_t>(doubling);
    const PassSums inner = run_pass(reg, inner_box, probe_n, seed, salt, streams, tol);
    const PassSums shell =
        run_pass(reg, outer_box, probe_n, seed, salt + 1u, streams, tol, inner_box);

    ShellProbe probe{half_width, pass_estimate(inner, inner_box, domain),
                     pass_estimate(shell, outer_box, domain), pass_error(inner, inner_box, domain)};
    out.probes.push_back(probe);
    if (probe.resolved() && probe.shell <= eps_tail * probe.inner) {
      out.box = inner_box;
      return out;
    }
    half_width *= 2.0;
  }

  std::ostringstream msg;
  msg << "upsilon box did not converge after " << kMaxBoxDoublings << " doublings (kappa="
      << kappa << ", eps_tail=" << eps_tail << ", domain=" << twomode::to_string(domain) << ")";
  throw ConvergenceError(msg.str(), std::move(out.probes));
}

Box upsilon_box(double kappa, double eps_tail, std::size_t n_samples, std::uint64_t seed,
                int streams, double tol, DomainTag domain) {
  return upsilon_box_search(kappa, eps_tail, n_samples, seed, streams, tol, domain).box;
}

Box resolve_box(const IntegrationRequest& req) {
  if (req.box) return *req.box;
  if (req.regularizer.kind == RegularizerKind::EnergyPhi)
    return phi_box(req.regularizer.bound_e);
  return upsilon_box(req.regularizer.kappa, req.eps_tail, req.n_samples, req.seed, req.streams,
                     req.tol, req.domain);
}

DomainVolumes integrate_domains(const RegularizerSpec& reg, const Box& box,
                                std::size_t n_samples, std::uint64_t seed, int streams,
                                double tol) {
  validate_common(n_samples, streams, tol);
  if (reg.m != 4) throw InvalidArgument("two-mode integration needs exponent m = 4");
  if (!(box.volume() > 0.0)) throw InvalidArgument("sampling box has zero volume");

  const PassSums sums = run_pass(reg, box, n_samples, seed, kMainSalt, streams, tol);
  const double n = static_cast<double>(sums.count);
  const double vol = box.volume();
  const auto& cls = sums.domains[static_cast<std::size_t>(DomainTag::Classical)];
  const double mean_c = cls.sum / n;

  DomainVolumes out;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& d = sums.domains[k];
    auto& r = out.by_domain[k];
    r.n_samples = n_samples;
    r.seed = seed;
    r.streams = streams;
    r.box = box;
    r.acceptance_fraction = static_cast<double>(d.support) / n;
    r.empty_domain = d.support == 0;
    if (r.empty_domain) continue;

    const double mean = d.sum / n;
    const double var = std::max(0.0, (d.sum_sq / n - mean * mean) * n / (n - 1.0));
    r.estimate = vol * mean;
    r.std_error = vol * std::sqrt(var / n);
    // Every domain lies inside the classical one, so f_k f_C = f_k².
    const double cov = (d.sum_sq / n - mean * mean_c) * n / (n - 1.0);
    out.cov_with_classical[k] = vol * vol * cov / n;
  }
  return out;
}

IntegrationResult mc_volume(const IntegrationRequest& req) {
  validate_common(req.n_samples, req.streams, req.tol);
  if (req.regularizer.m != 4) throw InvalidArgument("two-mode integration needs exponent m = 4");
  const Box box = resolve_box(req);
  return integrate_domains(req.regularizer, box, req.n_samples, req.seed, req.streams,
                           req.tol)[req.domain];
}

std::string_view to_string(SweepParam p) noexcept {
  return p == SweepParam::Energy ? "E" : "kappa";
}

Ratio volume_ratio(const DomainVolumes& v, DomainTag numerator) {
  const auto& c = v[DomainTag::Classical];
  const auto& x = v[numerator];
  if (c.estimate <= 0.0 || x.estimate <= 0.0) return {};
  const double r = x.estimate / c.estimate;
  const double var_x = x.std_error * x.std_error;
  const double var_c = c.std_error * c.std_error;
  const double cov = v.cov_with_classical[static_cast<std::size_t>(numerator)];
  const double var_r = (var_x - 2.0 * r * cov + r * r * var_c) / (c.estimate * c.estimate);
  return {r, std::sqrt(std::max(var_r, 0.0))};
}

SweepTable sweep(SweepParam param, std::span<const double> values, const SweepTemplate& tmpl) {
  if (values.empty()) throw InvalidArgument("sweep needs at least one value");
  if (!std::is_sorted(values.begin(), values.end()))
    throw InvalidArgument("sweep values must be ascending");
  validate_common(tmpl.n_samples, tmpl.streams, tmpl.tol);

  SweepTable table;
  table.param = param;
  for (const double value : values) {
    SweepRow row;
    row.param_value = value;
    try {
      IntegrationRequest req;
      req.regularizer = (param == SweepParam::Energy) ? RegularizerSpec::energy(value, tmpl.m)
                                                      : RegularizerSpec::adjugate(value, tmpl.m);
      req.n_samples = tmpl.n_samples;
      req.seed = tmpl.seed;
      req.streams = tmpl.streams;
      req.tol = tmpl.tol;
      req.eps_tail = tmpl.eps_tail;
      const Box box = resolve_box(req);
      row.volumes = integrate_domains(req.regularizer, box, req.n_samples, req.seed,
                                      req.streams, req.tol);
      row.quantum_over_classical = volume_ratio(row.volumes, DomainTag::Quantum);
      row.separable_over_classical = volume_ratio(row.volumes, DomainTag::Separable);
      row.entangled_over_classical = volume_ratio(row.volumes, DomainTag::Entangled);
    } catch (const ConvergenceError& e) {
      row.error = e.what();
      row.box_not_converged = true;
      row.probes = e.probes();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace gaussvol::integrate
