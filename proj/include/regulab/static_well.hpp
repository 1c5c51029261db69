#pragma once

// Massless field with a static square barrier lambda on |x| < a: mode
// amplitudes and the renormalized point-split kinetic energy density inside
// the barrier.
//
// Inside the barrier the modes oscillate with q = sqrt(omega^2 - lambda).
// Below the barrier top (omega^2 < lambda) q is imaginary and every
// trigonometric function of q x is continued to its hyperbolic partner. All
// expressions here are written through functions of q^2 that are entire
// (cos(qz), sin^2(qz), (sin(qz)/(qz))^2), so the same code covers both sides
// of omega^2 = lambda without 0/0 at the crossing.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "regulab/errors.hpp"
#include "regulab/numerics.hpp"
#include "regulab/regulator.hpp"

namespace regulab::well {

struct WellConfig {
  double lambda = 0.0;  // barrier height, 1/length^2
  double a = 1.0;       // half-width

  void validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and >= 0");
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("well half-width a must be > 0");
  }
};

enum class Parity { Symmetric = 1, Antisymmetric = 2 };

/// Region-I amplitude squared and region-II phase of one eigenmode.
///
/// amp_sq is the analytic continuation of the matching formulas; for the
/// antisymmetric mode below the barrier top it is negative, and the real
/// mode function is sqrt(|amp_sq|) sinh(kappa x).
struct ModeSolution {
  Parity parity = Parity::Symmetric;
  double omega = 0.0;
  double amp_sq = 1.0;
  double phase = 0.0;  // in (-pi, pi], chosen so the region-I amplitude is positive
};

namespace detail {

/// Functions of q z for q^2 = omega^2 - lambda of either sign.
struct RootTrig {
  double q2 = 0.0;
  double k = 0.0;  // sqrt(|q2|)
  bool real = true;

  explicit RootTrig(double q_squared)
      : q2(q_squared), k(std::sqrt(std::abs(q_squared))), real(q_squared >= 0.0) {}

  double cos(double z) const { return real ? std::cos(k * z) : std::cosh(k * z); }
  /// sin^2(q z); negative when q is imaginary.
  double sin_sq(double z) const {
    const double s = real ? std::sin(k * z) : std::sinh(k * z);
    return real ? s * s : -s * s;
  }
  /// (sin(q z) / (q z))^2, equal to 1 at q z = 0.
  double sinc_sq(double z) const {
    const double t = k * z;
    const double t2 = t * t;
    if (std::abs(t) < 1e-4) {
      const double sign = real ? -1.0 : 1.0;
      return 1.0 + sign * t2 / 3.0 + 2.0 * t2 * t2 / 45.0;
    }
    const double s = (real ? std::sin(t) : std::sinh(t)) / t;
    return s * s;
  }
};

inline void require_inside(const WellConfig& cfg, double x, double eps1) {
  if (!(std::abs(x) + 0.5 * eps1 < cfg.a))
    throw OutsideRegionI("x outside |x|<a: both split points must satisfy |x +- eps1/2| < a");
}

inline void require_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidFrequency("omega must be > 0");
}

/// omega * lambda^2 cos(2aq) / (2 D1 D2) * (cos(2aq) cos(q d) - cos(q s)),
/// with D1 = omega^2 - lambda sin^2(aq), D2 = omega^2 - lambda cos^2(aq) and
/// the common factor q^2 cancelled between D2 and the bracket. d = y1 - y1',
/// s = y1 + y1'.
inline double barrier_term(const WellConfig& cfg, double omega, double d, double s) {
  const double lam = cfg.lambda;
  if (lam == 0.0) return 0.0;
  const RootTrig q(omega * omega - lam);
  const double a = cfg.a;
  const double sc_a = q.sinc_sq(a);
  const double d1 = omega * omega - lam * q.sin_sq(a);
  const double cos2a = 1.0 - 2.0 * q.sin_sq(a);
  const double bracket_over_q2 = 0.5 * s * s * q.sinc_sq(0.5 * s) - 2.0 * a * a * sc_a -
                                 0.5 * d * d * q.sinc_sq(0.5 * d) + 4.0 * a * a * sc_a * q.sin_sq(0.5 * d);
  const double d2_over_q2 = 1.0 + lam * a * a * sc_a;
  return omega * lam * lam * cos2a / (2.0 * d1) * (bracket_over_q2 / d2_over_q2);
}

}  // namespace detail

/// Amplitude and phase of the (omega, parity) eigenmode.
inline ModeSolution mode_solution(const WellConfig& cfg, Parity parity, double omega) {
  cfg.validate();
  detail::require_frequency(omega);
  const double lam = cfg.lambda, a = cfg.a;
  const detail::RootTrig q(omega * omega - lam);
  const double s2 = q.sin_sq(a);
  const double w2 = omega * omega;

  double amp_sq = 0.0;
  if (parity == Parity::Symmetric) {
    amp_sq = w2 / (w2 - lam * s2);
  } else {
    const double d2 = q.q2 + lam * s2;
    if (d2 == 0.0) throw InvalidFrequency("antisymmetric amplitude is singular at omega^2 = lambda");
    amp_sq = w2 / d2;
  }

  // Region-II phase from continuity of chi and chi' at x = a, taking A > 0.
  const double amp = std::sqrt(std::abs(amp_sq));
  const double ka = q.k * a;
  const double ratio = q.k / omega;
  double c = 0.0, s = 0.0;  // cos and sin of (omega a + delta), up to a common positive factor
  if (parity == Parity::Symmetric) {
    c = amp * (q.real ? std::cos(ka) : std::cosh(ka));
    s = amp * ratio * (q.real ? std::sin(ka) : -std::sinh(ka));
  } else {
    s = amp * (q.real ? std::sin(ka) : std::sinh(ka));
    c = amp * ratio * (q.real ? std::cos(ka) : std::cosh(ka));
  }
  double phase = std::atan2(s, c) - omega * a;
  phase = std::remainder(phase, 2.0 * std::numbers::pi);
  if (phase <= -std::numbers::pi) phase += 2.0 * std::numbers::pi;
  return ModeSolution{parity, omega, amp_sq, phase};
}

enum class Region { Inside, Outside };

struct ModeValue {
  double chi = 0.0;
  double dchi = 0.0;
};

/// Real mode function chi and its x-derivative using the formula of the
/// requested region (the region is explicit so both sides of x = +-a can be
/// compared at the boundary itself).
inline ModeValue mode_profile(const WellConfig& cfg, const ModeSolution& m, double x, Region region) {
  const double w = m.omega;
  if (region == Region::Outside) {
    if (m.parity == Parity::Symmetric) {
      const double arg = w * std::abs(x) + m.phase;
      const double sgn = x < 0.0 ? -1.0 : 1.0;
      return {std::cos(arg), -w * std::sin(arg) * sgn};
    }
    const double arg = w * x + (x < 0.0 ? -m.phase : m.phase);
    return {std::sin(arg), w * std::cos(arg)};
  }
  const detail::RootTrig q(w * w - cfg.lambda);
  const double amp = std::sqrt(std::abs(m.amp_sq));
  const double kx = q.k * x;
  if (m.parity == Parity::Symmetric) {
    if (q.real) return {amp * std::cos(kx), -amp * q.k * std::sin(kx)};
    return {amp * std::cosh(kx), amp * q.k * std::sinh(kx)};
  }
  if (q.real) return {amp * std::sin(kx), amp * q.k * std::cos(kx)};
  return {amp * std::sinh(kx), amp * q.k * std::cosh(kx)};
}

/// Point-split kinetic energy density of all modes at frequency omega inside
/// the barrier (both parities summed).
inline double xi_lambda(const WellConfig& cfg, double omega, const Regulator& reg, double x, double /*t*/) {
  cfg.validate();
  reg.validate();
  detail::require_frequency(omega);
  detail::require_inside(cfg, x, reg.eps1);
  const detail::RootTrig q(omega * omega - cfg.lambda);
  const double c0 = std::cos(omega * reg.eps0) / (4.0 * std::numbers::pi);
  return c0 * (2.0 * omega * q.cos(reg.eps1) + detail::barrier_term(cfg, omega, reg.eps1, 2.0 * x));
}

/// Free-field counterpart of xi_lambda.
inline double xi_free(double omega, const Regulator& reg) {
  detail::require_frequency(omega);
  return std::cos(omega * reg.eps0) * omega * std::cos(omega * reg.eps1) / (2.0 * std::numbers::pi);
}

/// The slowly decaying part of xi_lambda - xi_free:
/// (lambda / 4 pi) eps1 cos(omega eps0) sin(omega eps1).
inline double r_omega(const WellConfig& cfg, double omega, const Regulator& reg) {
  cfg.validate();
  reg.validate();
  detail::require_frequency(omega);
  return cfg.lambda / (4.0 * std::numbers::pi) * reg.eps1 * std::cos(omega * reg.eps0) *
         std::sin(omega * reg.eps1);
}

/// xi_lambda - xi_free - r_omega, evaluated without cancelling large terms.
inline double s_omega(const WellConfig& cfg, double omega, const Regulator& reg, double x, double /*t*/) {
  cfg.validate();
  reg.validate();
  detail::require_frequency(omega);
  detail::require_inside(cfg, x, reg.eps1);
  const double lam = cfg.lambda;
  const double d = reg.eps1;
  const detail::RootTrig q(omega * omega - lam);
  double cos_gap = 0.0;  // cos(q d) - cos(omega d)
  if (q.real) {
    cos_gap = 2.0 * std::sin(0.5 * (q.k + omega) * d) * std::sin(0.5 * lam / (q.k + omega) * d);
  } else {
    cos_gap = std::cosh(q.k * d) - std::cos(omega * d);
  }
  const double c0 = std::cos(omega * reg.eps0) / (4.0 * std::numbers::pi);
  return c0 * (detail::barrier_term(cfg, omega, d, 2.0 * x) + 2.0 * omega * cos_gap -
               lam * d * std::sin(omega * d));
}

/// Closed form of the cutoff integral of r_omega:
/// (lambda / 8 pi) [eps1^2 / (eps1^2 - eps0^2 - 2 i tau eps0 + tau^2) + c.c.].
inline double r_integral_closed(const WellConfig& cfg, const Regulator& reg) {
  cfg.validate();
  reg.validate();
  const std::complex<double> denom(reg.eps1 * reg.eps1 - reg.eps0 * reg.eps0 + reg.tau * reg.tau,
                                   -2.0 * reg.tau * reg.eps0);
  if (denom == 0.0) throw SingularRegulator("eps1^2 - eps0^2 - 2 i tau eps0 + tau^2 vanishes");
  const std::complex<double> term = reg.eps1 * reg.eps1 / denom;
  return cfg.lambda / (8.0 * std::numbers::pi) * 2.0 * term.real();
}

/// Renormalized point-split kinetic energy density inside the barrier:
/// cutoff integral of s_omega plus the closed-form r_omega integral.
inline DensityResult t00r_static(const WellConfig& cfg, const Regulator& reg, double x, double t,
                                 const QuadratureSpec& spec = {}) {
  cfg.validate();
  reg.require_cutoff();
  detail::require_inside(cfg, x, reg.eps1);
  QuadratureHints hints;
  hints.oscillation_frequency = std::max({reg.eps0, reg.eps1, 2.0 * std::abs(x), 4.0 * cfg.a});
  const auto q = integrate_halfline([&](double w) { return s_omega(cfg, w, reg, x, t); }, reg.tau, spec, hints);
  return DensityResult{q.value.real() + r_integral_closed(cfg, reg), q.error_estimate, reg};
}

}  // namespace regulab::well
