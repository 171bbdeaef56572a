#include "gaussvol/regularizers.hpp"

#include <cmath>

#include "gaussvol/errors.hpp"

namespace gaussvol {

std::string_view to_string(RegularizerKind k) noexcept {
  return k == RegularizerKind::EnergyPhi ? "energy" : "adj";
}

RegularizerSpec RegularizerSpec::energy(double bound_e, int m) {
  if (!(bound_e > 0.0)) throw InvalidArgument("energy bound E must be positive");
  if (m < 1) throw InvalidArgument("exponent m must be >= 1");
  return {RegularizerKind::EnergyPhi, bound_e, 0.0, m};
}

RegularizerSpec RegularizerSpec::adjugate(double kappa, int m) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (m < 1) throw InvalidArgument("exponent m must be >= 1");
  return {RegularizerKind::AdjugateUpsilon, 0.0, kappa, m};
}

MatrixInvariants invariants(const CovarianceMatrix& v) {
  return {v.trace(), v.determinant(), trace_adjugate(v)};
}

double log1p_power(double x, int m) {
  if (!(x > 0.0)) return 0.0;
  const double log_pow = m * std::log(x);
  if (log_pow > 700.0) return log_pow + std::log1p(std::exp(-log_pow));
  return std::log1p(std::exp(log_pow));
}

double regularizer_weight(const MatrixInvariants& inv, const RegularizerSpec& spec) {
  switch (spec.kind) {
    case RegularizerKind::EnergyPhi:
      if (inv.trace > spec.bound_e) return 0.0;
      return log1p_power(inv.det, spec.m);
    case RegularizerKind::AdjugateUpsilon:
      return std::exp(-inv.trace_adj / spec.kappa) * log1p_power(inv.det, spec.m);
  }
  return 0.0;
}

double phi(const CovarianceMatrix& v, const RegularizerSpec& spec) {
  if (spec.kind != RegularizerKind::EnergyPhi) throw InvalidArgument("phi needs an energy spec");
  if (!v.positive_definite()) throw DomainError("phi needs a positive definite matrix");
  return regularizer_weight({v.trace(), v.determinant(), 0.0}, spec);
}

double upsilon(const CovarianceMatrix& v, const RegularizerSpec& spec) {
  if (spec.kind != RegularizerKind::AdjugateUpsilon)
    throw InvalidArgument("upsilon needs an adjugate spec");
  if (!v.positive_definite()) throw DomainError("upsilon needs a positive definite matrix");
  return regularizer_weight(invariants(v), spec);
}

}  // namespace gaussvol
