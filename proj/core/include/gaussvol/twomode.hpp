#pragma once

#include <string_view>

#include "gaussvol/fisher_rao.hpp"
#include "gaussvol/states.hpp"

namespace gaussvol::twomode {

/// Canonical two-mode covariance
///
///   [[a, 0, c, 0],
///    [0, a, 0, d],
///    [c, 0, b, 0],
///    [0, d, 0, b]]
struct CanonicalPoint {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  friend bool operator==(const CanonicalPoint&, const CanonicalPoint&) = default;
};

enum class DomainTag { Classical, Quantum, Separable, Entangled };

std::string_view to_string(DomainTag t) noexcept;

CovarianceMatrix canonical_embed(const CanonicalPoint& p);

/// Inverse of canonical_embed. Throws InvalidArgument if V is not of the
/// canonical shape (entries that must vanish or coincide differ by > 1e-12).
CanonicalPoint canonical_extract(const CovarianceMatrix& v);

/// The 4-parameter chart (a, b, c, d) with m = 4.
const ParamChart& canonical_chart();

/// det V = (ab − c²)(ab − d²)
inline double det_v(const CanonicalPoint& p) {
  return (p.a * p.b - p.c * p.c) * (p.a * p.b - p.d * p.d);
}
/// tr V = 2(a + b)
inline double trace_v(const CanonicalPoint& p) { return 2.0 * (p.a + p.b); }
/// tr adj V = 2a²b + a(2b² − c² − d²) − b(c² + d²)
inline double trace_adj_v(const CanonicalPoint& p) {
  const double cd2 = p.c * p.c + p.d * p.d;
  return 2.0 * p.a * p.a * p.b + p.a * (2.0 * p.b * p.b - cd2) - p.b * cd2;
}

/// Fisher-Rao metric of the canonical chart from the explicit component
/// formulas. Throws DomainError outside the classical domain, in particular
/// when ab − c² or ab − d² is within 1e-14 of zero.
MetricAtPoint closed_form_metric(const CanonicalPoint& p);

/// √det g of closed_form_metric, without building MetricAtPoint.
double closed_form_volume_element(const CanonicalPoint& p);

/// Quantities bounding the quantum and separable domains at fixed (a, b, c).
///
/// An empty d-interval (Δ < 0, or ab ≤ c²) is reported with d1 = +∞ and
/// d2 = −∞ rather than as an error.
struct DomainBounds {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double delta = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool d_range_empty() const noexcept { return d1 > d2; }
};

DomainBounds domain_bounds(const CanonicalPoint& p);

/// Closed-form membership. Classical is open (its inequalities must hold with
/// margin `tol`); Quantum and Separable contain their boundary, so their
/// inequalities are relaxed by `tol`. Entangled = Quantum ∧ ¬Separable.
bool in_domain(const CanonicalPoint& p, DomainTag tag, double tol = kDefaultTol);

/// All four memberships from a single evaluation of domain_bounds.
struct Membership {
  bool classical = false;
  bool quantum = false;
  bool separable = false;
  bool entangled = false;

  bool operator[](DomainTag t) const noexcept {
    switch (t) {
      case DomainTag::Classical: return classical;
      case DomainTag::Quantum: return quantum;
      case DomainTag::Separable: return separable;
      case DomainTag::Entangled: return entangled;
    }
    return false;
  }
};

Membership membership(const CanonicalPoint& p, double tol = kDefaultTol);

struct SimonInvariants {
  double delta_tilde = 0.0;  // a² + b² + 2cd
  double det_v = 0.0;
  double nu_minus = 0.0;
  double nu_plus = 0.0;
};

/// ν∓² = (Δ̃ ∓ √(Δ̃² − 4 det V)) / 2. Throws DomainError if V is not positive
/// definite, NumericError if Δ̃² − 4 det V < −1e-12.
SimonInvariants simon_invariants(const CanonicalPoint& p);

}  // namespace gaussvol::twomode
