#pragma once

// Field of mass m whose potential jumps from 0 to lambda at t = 0. Each mode
// k evolves freely before the step and as a Bogoliubov mixture after it.
// Provides the mode-by-mode energy change, the point-split density after
// the step, and the regulator-dependent D term that separates the two.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "regulab/errors.hpp"
#include "regulab/numerics.hpp"
#include "regulab/regulator.hpp"

namespace regulab::step {

struct StepConfig {
  double lambda = 0.0;
  double m = 1.0;

  void validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(m)) throw InvalidArgument("lambda and mass must be finite");
    if (!(m >= 0.0)) throw InvalidArgument("mass must be >= 0");
    if (!(lambda > -m * m)) throw InvalidArgument("lambda must exceed -m^2 so that E^2 > 0 for every k");
  }
};

struct BogoliubovPair {
  double a_k = 0.0;
  double b_k = 1.0;
};

struct ModeFrequencies {
  double omega = 0.0;  // before the step
  double energy = 0.0; // after the step
};

inline ModeFrequencies frequencies(const StepConfig& cfg, double k) {
  cfg.validate();
  const double w = std::hypot(k, cfg.m);
  if (!(w > 0.0)) throw ZeroFrequency("omega = 0 (k = 0 with m = 0)");
  return {w, std::sqrt(w * w + cfg.lambda)};
}

/// A = (1 - omega/E)/2, written as lambda / (2E(E + omega)) so that it keeps
/// full relative precision for small lambda.
inline BogoliubovPair bogoliubov(const StepConfig& cfg, double k) {
  const auto [w, e] = frequencies(cfg, k);
  const double a = cfg.lambda / (2.0 * e * (e + w));
  return {a, 1.0 - a};
}

/// Mode function time dependence s_k(t).
inline ComplexValue s_k(const StepConfig& cfg, double k, double t) {
  const auto [w, e] = frequencies(cfg, k);
  if (t < 0.0) return std::polar(1.0, -w * t);
  const auto [a, b] = bogoliubov(cfg, k);
  return a * std::polar(1.0, e * t) + b * std::polar(1.0, -e * t);
}

inline ComplexValue s_k_derivative(const StepConfig& cfg, double k, double t) {
  const auto [w, e] = frequencies(cfg, k);
  const ComplexValue i(0.0, 1.0);
  if (t < 0.0) return -i * w * std::polar(1.0, -w * t);
  const auto [a, b] = bogoliubov(cfg, k);
  return i * e * (a * std::polar(1.0, e * t) - b * std::polar(1.0, -e * t));
}

/// Change in the energy of mode k (box length L) at time t > 0:
/// lambda^2 (1 - cos 2Et) / (8 omega L E^2).
inline double mode_energy_change(const StepConfig& cfg, double k, double t, double L) {
  if (!(L > 0.0)) throw InvalidArgument("box length L must be > 0");
  const auto [w, e] = frequencies(cfg, k);
  const double s = std::sin(e * t);
  return cfg.lambda * cfg.lambda * 2.0 * s * s / (8.0 * w * L * e * e);
}

/// Mode-regularized energy density after the step,
/// (1/16 pi) Int dk lambda^2 (1 - cos 2Et) / (omega E^2).
///
/// The integral over [0, K] is done directly; beyond K the non-oscillating
/// half is integrated in u = 1/k and the oscillating half, bounded by
/// lambda^2 / (t K^3), is left in the error estimate. K is picked from the
/// tolerance.
inline DensityResult mode_reg_density(const StepConfig& cfg, double t, const QuadratureSpec& spec = {}) {
  cfg.validate();
  spec.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("t must be >= 0");
  if (!(cfg.m > 0.0)) throw ZeroFrequency("mode-regularized density needs m > 0 (log-divergent at k = 0 otherwise)");
  const double lam = cfg.lambda;
  if (t == 0.0 || lam == 0.0) return {};
  const double m2 = cfg.m * cfg.m;
  const double pref = lam * lam / (8.0 * std::numbers::pi);

  auto body = [&](double k) {
    const double w2 = k * k + m2;
    const double e2 = w2 + lam;
    const double s = std::sin(std::sqrt(e2) * t);
    return 2.0 * s * s / (std::sqrt(w2) * e2);
  };
  auto tail = [&](double u) {  // 1/(omega E^2) dk with k = 1/u
    const double u2 = u * u;
    return u / (std::sqrt(1.0 + m2 * u2) * (1.0 + (m2 + lam) * u2));
  };
  QuadratureHints osc;
  osc.oscillation_frequency = 2.0 * t;

  const double k0 = 10.0 * std::max({1.0, 1.0 / t, cfg.m, std::sqrt(std::abs(lam))});
  const auto head = integrate_interval(body, 0.0, k0, spec, osc);
  const double scale = pref * std::abs(head.value.real());
  const double target = 0.1 * std::max(spec.abs_tol, spec.rel_tol * scale);
  const double k1 = std::max(k0, std::cbrt(pref / (t * target)));

  double value = head.value.real();
  double error = head.error_estimate;
  if (k1 > k0) {
    const auto mid = integrate_interval(body, k0, k1, spec, osc);
    value += mid.value.real();
    error += mid.error_estimate;
  }
  const auto far = integrate_interval(tail, 0.0, 1.0 / k1, spec);
  value += far.value.real();
  error += far.error_estimate + 1.0 / (t * k1 * k1 * k1);
  return DensityResult{pref * value, pref * error, Regulator{}};
}

/// xi_lambda,k - xi_0,k for the split (t +- eps0/2, x +- eps1/2) with t - eps0/2 > 0,
/// per unit of k (the density is (1/2 pi) Int dk of this times the cutoff).
///
/// The direct expansion of the post-step mode functions gives
///   [(E^2 + w^2)(A^2 e^{iE e0} + B^2 e^{-iE e0}) - 2 lambda A B cos 2Et] e^{ik e1} / (8w) + c.c.
/// minus the free 2 w^2 e^{-iw e0} e^{ik e1} / (8w) + c.c. The B^2 and free
/// terms are merged with B = 1 - A, 1 - 2A = w/E and E - w = lambda / (E + w)
/// so that nothing of order w is cancelled at large k.
inline double xi_step_difference(const StepConfig& cfg, double k, double t, const Regulator& reg) {
  const auto [w, e] = frequencies(cfg, k);
  const double lam = cfg.lambda;
  const double e0 = reg.eps0;
  const double a = lam / (2.0 * e * (e + w));
  const double gap = lam / (e + w);  // E - w
  const double sum_sq = e * e + w * w;
  const double c_b = w * gap * gap / e + a * a * sum_sq;
  // e^{-i gap e0} - 1 without cancellation
  const double h = std::sin(0.5 * gap * e0);
  const ComplexValue phase_gap(-2.0 * h * h, -std::sin(gap * e0));
  const ComplexValue z = sum_sq * a * a * std::polar(1.0, e * e0) + c_b * std::polar(1.0, -e * e0) +
                         2.0 * w * w * std::polar(1.0, -w * e0) * phase_gap -
                         2.0 * lam * a * (1.0 - a) * std::cos(2.0 * e * t);
  return 2.0 * (z * std::polar(1.0, k * reg.eps1)).real() / (8.0 * w);
}

/// The subtraction term with 1/L replaced by the continuum measure:
/// -(lambda eps0 / 4) sin(k eps1 - omega eps0).
inline double r_k(const StepConfig& cfg, double k, const Regulator& reg) {
  const auto [w, e] = frequencies(cfg, k);
  (void)e;
  return -cfg.lambda * reg.eps0 / 4.0 * std::sin(k * reg.eps1 - w * reg.eps0);
}

/// Point-split energy density after the step with cutoff exp(-omega tau).
inline DensityResult pointsplit_density(const StepConfig& cfg, double t, const Regulator& reg,
                                        const QuadratureSpec& spec = {}) {
  cfg.validate();
  reg.require_cutoff();
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("t must be > 0");
  if (!(reg.eps0 < 2.0 * t)) throw SplitStraddlesStep("split times straddle the step: need eps0 < 2t");
  if (!(cfg.m > 0.0)) throw ZeroFrequency("point-split density needs m > 0");
  QuadratureHints hints;
  hints.oscillation_frequency = std::max({reg.eps0, reg.eps1, 2.0 * t});
  const double m2 = cfg.m * cfg.m;
  const auto q = integrate_realline(
      [&](double k) { return xi_step_difference(cfg, k, t, reg) * std::exp(-std::sqrt(k * k + m2) * reg.tau); },
      reg.tau, spec, hints);
  const double norm = 1.0 / (2.0 * std::numbers::pi);
  return DensityResult{norm * q.value.real(), norm * q.error_estimate, reg};
}

/// D term without sign checks on the regulator components.
inline double d_term_raw(double lambda, double eps0, double eps1, double tau) {
  const std::complex<double> w(eps1 * eps1 - eps0 * eps0 + tau * tau, 2.0 * eps0 * tau);
  if (w == 0.0) throw SingularRegulator("(eps1^2 - eps0^2) + 2 i eps0 tau + tau^2 vanishes");
  const std::complex<double> lhs = std::complex<double>(eps0, -tau) / w;
  const std::complex<double> rhs = std::complex<double>(eps0, tau) / std::conj(w);
  return (-(lambda * eps0 / (8.0 * std::numbers::pi)) * (lhs + rhs)).real();
}

/// Closed form of (1/2 pi) Int r_k exp(-|k| tau) dk.
inline double d_term(const StepConfig& cfg, const Regulator& reg) {
  cfg.validate();
  reg.validate();
  return d_term_raw(cfg.lambda, reg.eps0, reg.eps1, reg.tau);
}

}  // namespace regulab::step
