#pragma once

#include <string_view>

#include "gaussvol/states.hpp"

namespace gaussvol {

enum class RegularizerKind { EnergyPhi, AdjugateUpsilon };

std::string_view to_string(RegularizerKind k) noexcept;

/// Choice of regularizing functional and its parameters.
///
/// EnergyPhi uses `bound_e` (E = 2N × mean energy per mode); AdjugateUpsilon
/// uses `kappa`. `m` is the exponent in log(1 + (det V)^m) and must equal the
/// parameter count of the chart being integrated.
struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::EnergyPhi;
  double bound_e = 0.0;
  double kappa = 0.0;
  int m = 4;

  static RegularizerSpec energy(double bound_e, int m = 4);
  static RegularizerSpec adjugate(double kappa, int m = 4);

  /// The active cut-off parameter: E or κ.
  double parameter() const noexcept {
    return kind == RegularizerKind::EnergyPhi ? bound_e : kappa;
  }
};

/// The scalar invariants the regularizers depend on.
struct MatrixInvariants {
  double trace = 0.0;
  double det = 0.0;
  double trace_adj = 0.0;
};

MatrixInvariants invariants(const CovarianceMatrix& v);

/// log(1 + x^m) for x > 0, evaluated without overflowing x^m.
/// Above m·log x > 700 the result is m·log x + log1p(x^{−m}).
double log1p_power(double x, int m);

/// H(E − tr V) log(1 + (det V)^m), with H(0) = 1.
double phi(const CovarianceMatrix& v, const RegularizerSpec& spec);

/// exp(−tr adj(V)/κ) log(1 + (det V)^m).
double upsilon(const CovarianceMatrix& v, const RegularizerSpec& spec);

/// Either functional from precomputed invariants.
double regularizer_weight(const MatrixInvariants& inv, const RegularizerSpec& spec);

}  // namespace gaussvol
