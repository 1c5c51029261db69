#pragma once

// Right-moving sector of a massless field in two dimensions under a
// conformal map v -> V(v): vacuum <T_vv>, the point-split energy shift, its
// two coincidence limits, and the spatial quantum-inequality bound for a
// weight function rho(x).
//
// V and rho are user expressions; derivatives come from exact third-order
// jets.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

#include "regulab/errors.hpp"
#include "regulab/exprlang.hpp"
#include "regulab/numerics.hpp"

namespace regulab::flanagan {

struct ConformalMap {
  expr::Expression expr;

  static ConformalMap parse(std::string_view text) { return {expr::parse(text, "v")}; }
  expr::Jet3 jet(double v) const { return expr::eval_jet3(expr, v); }
};

/// Weight rho(x) and the interval [lo, hi] the bound integral is taken over.
struct WeightFunction {
  expr::Expression expr;
  double lo = -1.0;
  double hi = 1.0;

  static WeightFunction parse(std::string_view text, double lo, double hi) {
    return {expr::parse(text, "x"), lo, hi};
  }
};

namespace detail {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// 1 / (d - i tau)^2
inline ComplexValue inverse_square(double d, double tau, const char* which) {
  const ComplexValue z(d, -tau);
  if (z == 0.0) throw SingularRegulator(std::string(which) + " - i tau vanishes");
  return 1.0 / (z * z);
}

}  // namespace detail

/// Vacuum <T_vv> split along v with cutoff tau: -1 / (4 pi ((v - vbar) - i tau)^2).
inline ComplexValue vacuum_tvv(double v, double vbar, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidCutoff("tau must be finite and >= 0");
  return -detail::inverse_square(v - vbar, tau, "v - vbar") / detail::kFourPi;
}

/// Change of the point-split <T_vv> under V:
/// (1/4 pi) [V'(v) V'(vbar) / ((V(v) - V(vbar)) - i tau)^2 - 1 / ((v - vbar) - i tau)^2].
inline ComplexValue delta_pointsplit(const ConformalMap& map, double v, double vbar, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidCutoff("tau must be finite and >= 0");
  const auto j = map.jet(v);
  const auto jb = map.jet(vbar);
  const ComplexValue mapped = detail::inverse_square(j.f - jb.f, tau, "V(v) - V(vbar)");
  const ComplexValue bare = detail::inverse_square(v - vbar, tau, "v - vbar");
  return (j.d1 * jb.d1 * mapped - bare) / detail::kFourPi;
}

/// Coincidence limit vbar -> v of delta_pointsplit at tau = 0:
/// (1/4 pi) [V'''/(6 V') - V''^2/(4 V'^2)], written over a common denominator.
inline double delta_flanagan(const ConformalMap& map, double v) {
  const auto j = map.jet(v);
  if (j.d1 == 0.0) throw DegenerateMap("V'(v) = 0: the map is not invertible here");
  return (2.0 * j.d1 * j.d3 - 3.0 * j.d2 * j.d2) / (48.0 * std::numbers::pi * j.d1 * j.d1);
}

/// Coincidence taken first with tau held fixed: -(V'(v)^2 - 1) / (4 pi tau^2).
inline double delta_tau(const ConformalMap& map, double v, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidCutoff("tau must be > 0");
  const double d1 = map.jet(v).d1;
  return (1.0 - d1 * d1) / (detail::kFourPi * tau * tau);
}

struct BoundResult {
  double value = 0.0;
  double error_estimate = 0.0;
  /// Largest rho'^2 / rho at the two ends of the support; a size hint for
  /// what truncating the support dropped.
  double edge_integrand = 0.0;
};

/// -(1/24 pi) Int_lo^hi rho'(x)^2 / rho(x) dx.
inline BoundResult qi_bound_rhs(const WeightFunction& rho, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(rho.hi > rho.lo) || !std::isfinite(rho.lo) || !std::isfinite(rho.hi))
    throw InvalidArgument("support must be a finite interval lo < hi");
  auto integrand = [&rho](double x) {
    const auto j = expr::eval_jet3(rho.expr, x);
    if (!(j.f > 0.0)) throw NonpositiveWeight(x, j.f);
    return j.d1 * j.d1 / j.f;
  };
  const double edge = std::max(integrand(rho.lo), integrand(rho.hi));
  const auto q = integrate_interval(integrand, rho.lo, rho.hi, spec);
  const double pref = 1.0 / (24.0 * std::numbers::pi);
  return BoundResult{-pref * q.value.real(), pref * q.error_estimate, edge};
}

}  // namespace regulab::flanagan
