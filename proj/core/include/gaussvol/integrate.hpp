#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaussvol/errors.hpp"
#include "gaussvol/regularizers.hpp"
#include "gaussvol/twomode.hpp"

namespace gaussvol::integrate {

using twomode::CanonicalPoint;
using twomode::DomainTag;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

/// Axis-aligned sampling box over (a, b, c, d).
struct Box {
  std::array<Interval, 4> axes{};

  double volume() const noexcept;
  bool contains(const CanonicalPoint& p) const noexcept;

  /// a, b ∈ (0, half_width], c, d ∈ [−half_width, half_width].
  static Box symmetric(double half_width);
};

/// Support box of the energy cut-off: tr V = 2(a + b) ≤ E bounds a and b by
/// E/2, and c² < ab ≤ ((a + b)/2)² ≤ (E/4)² bounds |c| and |d| by E/4.
Box phi_box(double bound_e);

inline constexpr double kMaxProbeRelError = 1.0;

struct ShellProbe {
  double half_width = 0.0;
  double inner = 0.0;  // integral over the current box
  double shell = 0.0;  // integral over the doubled box minus the current one
  double inner_error = 0.0;

  /// The inner estimate has a relative standard error below
  /// kMaxProbeRelError (so more than one sample contributed). A shell test
  /// against an unresolved inner estimate certifies nothing.
  bool resolved() const noexcept { return inner > 0.0 && inner_error < kMaxProbeRelError * inner; }
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, std::vector<ShellProbe> probes)
      : NumericError(what), probes_(std::move(probes)) {}
  const std::vector<ShellProbe>& probes() const noexcept { return probes_; }

 private:
  std::vector<ShellProbe> probes_;
};

inline constexpr int kMaxBoxDoublings = 12;

/// Truncation box for the adjugate regularizer.
///
/// Starts from Box::symmetric(L) with L = max(4, 4√κ) and doubles L until the
/// integral of `domain`'s integrand over the shell between L and 2L is at most
/// eps_tail times the integral over the current box, and the inner integral
/// is resolved (ShellProbe::resolved). Each probe uses
/// max(n_samples/10, 1000) samples. Throws ConvergenceError after
/// kMaxBoxDoublings doublings.
/// The default, Classical, bounds the tail of every domain at once.
Box upsilon_box(double kappa, double eps_tail, std::size_t n_samples, std::uint64_t seed,
                int streams = 1, double tol = kDefaultTol, DomainTag domain = DomainTag::Classical);

/// Same procedure, also returning the probe history.
struct BoxSearch {
  Box box;
  std::vector<ShellProbe> probes;
};
BoxSearch upsilon_box_search(double kappa, double eps_tail, std::size_t n_samples,
                             std::uint64_t seed, int streams = 1, double tol = kDefaultTol,
                             DomainTag domain = DomainTag::Classical);

struct IntegrationRequest {
  DomainTag domain = DomainTag::Classical;
  RegularizerSpec regularizer = RegularizerSpec::energy(8.0);
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  int streams = 1;
  std::optional<Box> box;
  double tol = kDefaultTol;
  double eps_tail = 1e-3;  // only used when the Υ box is searched
};

struct IntegrationResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  int streams = 1;
  Box box;
  double acceptance_fraction = 0.0;
  bool empty_domain = false;  // no sample landed in the integrand's support
};

/// The four domain volumes from one shared set of samples. Entangled is the
/// Quantum ∧ ¬Separable indicator inside the same pass.
struct DomainVolumes {
  std::array<IntegrationResult, 4> by_domain{};
  /// Cov(estimate_k, estimate_classical), for ratio error propagation.
  std::array<double, 4> cov_with_classical{};

  const IntegrationResult& operator[](DomainTag t) const {
    return by_domain[static_cast<std::size_t>(t)];
  }
};

/// The box a request integrates over: its explicit box, phi_box(E) for Φ,
/// or the upsilon_box search on the requested domain's integrand for Υ.
Box resolve_box(const IntegrationRequest& req);

/// Integrates indicator · regularizer · √det g over the box for all four
/// domains. Deterministic for fixed (n_samples, seed, streams).
DomainVolumes integrate_domains(const RegularizerSpec& reg, const Box& box,
                                std::size_t n_samples, std::uint64_t seed, int streams = 1,
                                double tol = kDefaultTol);

/// Regularized volume of one domain. Requires m = 4 and n_samples ≥ 10⁴.
IntegrationResult mc_volume(const IntegrationRequest& req);

enum class SweepParam { Energy, Kappa };

std::string_view to_string(SweepParam p) noexcept;

struct Ratio {
  double value = 0.0;
  double error = 0.0;
};

/// X/C with first-order error propagation including the sample covariance of
/// X and C (both come from the same samples). Approximate by construction.
Ratio volume_ratio(const DomainVolumes& v, DomainTag numerator);

struct SweepRow {
  double param_value = 0.0;
  DomainVolumes volumes;
  Ratio quantum_over_classical;
  Ratio separable_over_classical;
  Ratio entangled_over_classical;
  std::string error;  // non-empty if this row failed
  bool box_not_converged = false;
  std::vector<ShellProbe> probes;  // box search history when it failed

  bool ok() const noexcept { return error.empty(); }
};

struct SweepTable {
  SweepParam param = SweepParam::Energy;
  std::vector<SweepRow> rows;
};

struct SweepTemplate {
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  int streams = 1;
  int m = 4;
  double tol = kDefaultTol;
  double eps_tail = 1e-3;
};

/// Volumes and ratios for each value of E or κ. A failing value is recorded
/// in its row and the sweep continues. `values` must be non-empty, ascending.
SweepTable sweep(SweepParam param, std::span<const double> values, const SweepTemplate& tmpl);

}  // namespace gaussvol::integrate
