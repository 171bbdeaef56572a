#include "gaussvol/twomode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "gaussvol/errors.hpp"

namespace gaussvol::twomode {
namespace {

constexpr double kBoundaryTol = 1e-14;

ParamChart make_canonical_chart() {
  std::vector<Matrix> basis(4, Matrix::Zero(4, 4));
  basis[0](0, 0) = basis[0](1, 1) = 1.0;  // a
  basis[1](2, 2) = basis[1](3, 3) = 1.0;  // b
  basis[2](0, 2) = basis[2](2, 0) = 1.0;  // c
  basis[3](1, 3) = basis[3](3, 1) = 1.0;  // d
  std::vector<std::vector<ParamChart::Entry>> entries = {
      {{1, 1}, {2, 2}}, {{3, 3}, {4, 4}}, {{1, 3}}, {{2, 4}}};
  return ParamChart(2, std::move(basis), std::move(entries));
}

void require_classical(const CanonicalPoint& p) {
  const double ab = p.a * p.b;
  if (!(p.a > 0.0 && p.b > 0.0) || !(ab - p.c * p.c > kBoundaryTol) ||
      !(ab - p.d * p.d > kBoundaryTol))
    throw DomainError("canonical point is outside the classical domain");
}

// Lower-triangle components (g11, g12, g13, g14, g22, g23, g24, g33, g34, g44).
Eigen::Matrix4d metric_components(const CanonicalPoint& p) {
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  const double ab = a * b, c2 = c * c, d2 = d * d;
  const double pc = ab - c2, pd = ab - d2;
  const double pc2 = pc * pc, pd2 = pd * pd;
  const double den = 2.0 * pc2 * pd2;
  const double k = 2.0 * ab * ab + c2 * c2 + d2 * d2 - 2.0 * ab * (c2 + d2);

  Eigen::Matrix4d g;
  g(0, 0) = b * b * k / den;
  g(0, 1) = ((ab * ab + c2 * d2) * (c2 + d2) - 4.0 * ab * c2 * d2) / den;
  g(0, 2) = -b * c / pc2;
  g(0, 3) = -b * d / pd2;
  g(1, 1) = a * a * k / den;
  g(1, 2) = -a * c / pc2;
  g(1, 3) = -a * d / pd2;
  g(2, 2) = (ab + c2) / pc2;
  g(2, 3) = 0.0;
  g(3, 3) = (ab + d2) / pd2;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

}  // namespace

std::string_view to_string(DomainTag t) noexcept {
  switch (t) {
    case DomainTag::Classical: return "classical";
    case DomainTag::Quantum: return "quantum";
    case DomainTag::Separable: return "separable";
    case DomainTag::Entangled: return "entangled";
  }
  return "?";
}

CovarianceMatrix canonical_embed(const CanonicalPoint& p) {
  Matrix v(4, 4);
  v << p.a, 0.0, p.c, 0.0,
       0.0, p.a, 0.0, p.d,
       p.c, 0.0, p.b, 0.0,
       0.0, p.d, 0.0, p.b;
  return CovarianceMatrix(std::move(v));
}

CanonicalPoint canonical_extract(const CovarianceMatrix& v) {
  if (v.modes() != 2) throw InvalidArgument("canonical form needs a two-mode matrix");
  const auto& m = v.matrix();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  const bool zeros_ok = std::abs(m(0, 1)) <= tol && std::abs(m(0, 3)) <= tol &&
                        std::abs(m(1, 2)) <= tol && std::abs(m(2, 3)) <= tol;
  const bool diag_ok = std::abs(m(0, 0) - m(1, 1)) <= tol && std::abs(m(2, 2) - m(3, 3)) <= tol;
  if (!zeros_ok || !diag_ok) throw InvalidArgument("matrix is not in canonical two-mode form");
  return {m(0, 0), m(2, 2), m(0, 2), m(1, 3)};
}

const ParamChart& canonical_chart() {
  static const ParamChart chart = make_canonical_chart();
  return chart;
}

MetricAtPoint closed_form_metric(const CanonicalPoint& p) {
  require_classical(p);
  MetricAtPoint out;
  out.g = metric_components(p);
  out.det_g = out.g.fullPivLu().determinant();
  out.point = Vector(4);
  out.point << p.a, p.b, p.c, p.d;
  return out;
}

double closed_form_volume_element(const CanonicalPoint& p) {
  require_classical(p);
  const Eigen::Matrix4d g = metric_components(p);
  const double det = g.partialPivLu().determinant();
  if (det < -1e-12) throw NumericError("negative metric determinant in canonical chart");
  return std::sqrt(std::max(det, 0.0));
}

DomainBounds domain_bounds(const CanonicalPoint& p) {
  const double a = p.a, b = p.b, c = p.c;
  const double ab = a * b, c2 = c * c;
  DomainBounds out;
  out.c1 = (a / b) * (b * b - 1.0);
  out.c2 = (b / a) * (a * a - 1.0);
  out.c3 = (1.0 - a * a - b * b + a * a * b * b) / ab;
  const double pc = ab - c2;
  out.delta = c2 - pc * (ab * c2 - (a * a - 1.0) * (b * b - 1.0));
  if (out.delta >= 0.0 && pc > 0.0) {
    const double root = std::sqrt(out.delta);
    out.d1 = (-c - root) / pc;
    out.d2 = (-c + root) / pc;
  } else {
    out.d1 = std::numeric_limits<double>::infinity();
    out.d2 = -std::numeric_limits<double>::infinity();
  }
  return out;
}

namespace {

bool classical_member(const CanonicalPoint& p, double tol) {
  if (!(p.a > tol && p.b > tol)) return false;
  const double root = std::sqrt(p.a * p.b);
  return std::abs(p.c) < root - tol && std::abs(p.d) < root - tol;
}

struct DInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// [d1, d2], also accepting Δ that is negative only by roundoff: that is the
// pure-state boundary, where the interval shrinks to a point.
std::optional<DInterval> d_interval(const CanonicalPoint& p, const DomainBounds& q, double tol) {
  if (!q.d_range_empty()) return DInterval{q.d1, q.d2};
  const double pc = p.a * p.b - p.c * p.c;
  if (!(pc > 0.0) || q.delta < -tol * std::max(1.0, p.c * p.c)) return std::nullopt;
  return DInterval{-p.c / pc, -p.c / pc};
}

// Quantum and separable sets include their boundary (ν = 1 is a state), so
// every inequality there is relaxed by tol.
bool quantum_member(const CanonicalPoint& p, const DomainBounds& q, double tol) {
  if (!(p.a >= 1.0 - tol && p.b >= 1.0 - tol)) return false;
  // The a = b plane falls between the two branches; take it with the first.
  const double c_bound = (p.b <= p.a) ? q.c1 : q.c2;
  if (!(std::abs(p.c) <= std::sqrt(std::max(c_bound, 0.0)) + tol)) return false;
  const auto d = d_interval(p, q, tol);
  return d && p.d >= d->lo - tol && p.d <= d->hi + tol;
}

bool separable_member(const CanonicalPoint& p, const DomainBounds& q, double tol) {
  if (!(p.a >= 1.0 - tol && p.b >= 1.0 - tol)) return false;
  if (!(std::abs(p.c) <= std::sqrt(std::max(q.c3, 0.0)) + tol)) return false;
  const auto d = d_interval(p, q, tol);
  if (!d) return false;
  // c < 0: d1 ≤ d ≤ −d1; c > 0: −d2 ≤ d ≤ d2. Both agree on c = 0.
  const double half_width = (p.c < 0.0) ? -d->lo : d->hi;
  return std::abs(p.d) <= half_width + tol;
}

}  // namespace

Membership membership(const CanonicalPoint& p, double tol) {
  Membership out;
  out.classical = classical_member(p, tol);
  const auto q = domain_bounds(p);
  out.quantum = quantum_member(p, q, tol);
  out.separable = separable_member(p, q, tol);
  out.entangled = out.quantum && !out.separable;
  return out;
}

bool in_domain(const CanonicalPoint& p, DomainTag tag, double tol) {
  switch (tag) {
    case DomainTag::Classical: return classical_member(p, tol);
    case DomainTag::Quantum: return quantum_member(p, domain_bounds(p), tol);
    case DomainTag::Separable: return separable_member(p, domain_bounds(p), tol);
    case DomainTag::Entangled: {
      const auto q = domain_bounds(p);
      return quantum_member(p, q, tol) && !separable_member(p, q, tol);
    }
  }
  return false;
}

SimonInvariants simon_invariants(const CanonicalPoint& p) {
  const double ab = p.a * p.b;
  if (!(p.a > 0.0 && p.b > 0.0 && ab > p.c * p.c && ab > p.d * p.d))
    throw DomainError("Simon invariants need a positive definite canonical matrix");
  SimonInvariants out;
  out.delta_tilde = p.a * p.a + p.b * p.b + 2.0 * p.c * p.d;
  out.det_v = det_v(p);
  // Δ̃² − 4 det V rewritten without the leading cancellation.
  const double a2b2 = p.a * p.a - p.b * p.b;
  double disc = a2b2 * a2b2 + 4.0 * (p.a * p.c + p.b * p.d) * (p.b * p.c + p.a * p.d);
  if (disc < -1e-12 * std::max(1.0, out.delta_tilde * out.delta_tilde))
    throw NumericError("negative discriminant in Simon invariants");
  disc = std::max(disc, 0.0);
  const double plus2 = 0.5 * (out.delta_tilde + std::sqrt(disc));
  out.nu_plus = std::sqrt(plus2);
  out.nu_minus = std::sqrt(out.det_v / plus2);
  return out;
}

}  // namespace gaussvol::twomode
