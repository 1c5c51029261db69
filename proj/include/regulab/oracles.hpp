#pragma once

// Independent reference computations used by the self-test and the test
// suite. Each one takes a different route to a quantity the library
// computes in closed or fused form: direct quadrature, mode-by-mode sums,
// unfused expansions, or extrapolation of finite-separation values.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "regulab/flanagan.hpp"
#include "regulab/numerics.hpp"
#include "regulab/regulator.hpp"
#include "regulab/static_well.hpp"
#include "regulab/time_step.hpp"

namespace regulab::oracle {

// --- square well -----------------------------------------------------------

/// Kinetic density at frequency omega summed over both parities, built from
/// the real mode functions chi_j:
/// cos(omega eps0) / (4 pi omega) * sum_j [omega^2 chi_j(y) chi_j(y') + chi_j'(y) chi_j'(y')].
inline double xi_from_modes(const well::WellConfig& cfg, double omega, const Regulator& reg, double x) {
  const double y = x + 0.5 * reg.eps1;
  const double yp = x - 0.5 * reg.eps1;
  double sum = 0.0;
  for (auto parity : {well::Parity::Symmetric, well::Parity::Antisymmetric}) {
    const auto mode = well::mode_solution(cfg, parity, omega);
    const auto u = well::mode_profile(cfg, mode, y, well::Region::Inside);
    const auto up = well::mode_profile(cfg, mode, yp, well::Region::Inside);
    sum += omega * omega * u.chi * up.chi + u.dchi * up.dchi;
  }
  return std::cos(omega * reg.eps0) / (4.0 * std::numbers::pi * omega) * sum;
}

/// The two-parity density in the form
/// 2cos(omega eps0)/(8 pi) [(A1^2 + A2^2)(omega - lambda/2omega) cos(q d) + (A2^2 - A1^2)(lambda/2omega) cos(q s)]
/// with the amplitude-difference term carrying the opposite sign to the mode sum.
/// Kept to measure how far it is from the mode sum.
inline double xi_printed_form(const well::WellConfig& cfg, double omega, const Regulator& reg, double x) {
  const double a1 = well::mode_solution(cfg, well::Parity::Symmetric, omega).amp_sq;
  const double a2 = well::mode_solution(cfg, well::Parity::Antisymmetric, omega).amp_sq;
  const well::detail::RootTrig q(omega * omega - cfg.lambda);
  const double lo = cfg.lambda / (2.0 * omega);
  return 2.0 * std::cos(omega * reg.eps0) / (8.0 * std::numbers::pi) *
         ((a1 + a2) * (omega - lo) * q.cos(reg.eps1) + (a2 - a1) * lo * q.cos(2.0 * x));
}

/// Int_0^inf r_omega exp(-omega tau) d omega by quadrature.
inline QuadratureResult r_integral_quadrature(const well::WellConfig& cfg, const Regulator& reg,
                                              const QuadratureSpec& spec = {}) {
  QuadratureHints hints;
  hints.oscillation_frequency = std::max(reg.eps0, reg.eps1);
  return integrate_halfline([&](double w) { return well::r_omega(cfg, w, reg); }, reg.tau, spec, hints);
}

// --- time step -------------------------------------------------------------

/// Box-normalized mode sum: sum over k_n = 2 pi n / L, |n| <= n_max, of the
/// per-mode energy change.
inline double mode_sum(const step::StepConfig& cfg, double t, double L, long n_max) {
  double sum = 0.0, comp = 0.0;
  for (long n = -n_max; n <= n_max; ++n) {
    const double term = step::mode_energy_change(cfg, 2.0 * std::numbers::pi * n / L, t, L);
    const double y = term - comp;
    const double next = sum + y;
    comp = (next - sum) - y;
    sum = next;
  }
  return sum;
}

/// xi_lambda,k - xi_0,k expanded term by term, without any merging.
inline double xi_step_direct(const step::StepConfig& cfg, double k, double t, const Regulator& reg) {
  const auto [w, e] = step::frequencies(cfg, k);
  const double a = 0.5 * (1.0 - w / e);
  const double b = 0.5 * (1.0 + w / e);
  const ComplexValue x = std::polar(1.0, k * reg.eps1);
  const ComplexValue lam_xi =
      ((e * e + w * w) * (a * a * std::polar(1.0, e * reg.eps0) + b * b * std::polar(1.0, -e * reg.eps0)) -
       2.0 * cfg.lambda * a * b * std::cos(2.0 * e * t)) * x;
  const ComplexValue free_xi = 2.0 * w * w * std::polar(1.0, -w * reg.eps0) * x;
  return 2.0 * ((lam_xi - free_xi) / (8.0 * w)).real();
}

/// Same as xi_step_direct but without the 2 lambda A B cos 2Et cross term,
/// i.e. in the form usually printed for this density.
inline double xi_step_printed_form(const step::StepConfig& cfg, double k, double t, const Regulator& reg) {
  const auto [w, e] = step::frequencies(cfg, k);
  const double a = 0.5 * (1.0 - w / e);
  const double b = 0.5 * (1.0 + w / e);
  return xi_step_direct(cfg, k, t, reg) + 2.0 * 2.0 * cfg.lambda * a * b * std::cos(2.0 * e * t) *
                                             std::cos(k * reg.eps1) / (8.0 * w);
}

/// (1/2 pi) Int dk r_k exp(-omega tau) with omega = |k| (massless = true), as
/// in the closed-form D term, or omega = sqrt(k^2 + m^2).
inline QuadratureResult d_term_quadrature(const step::StepConfig& cfg, const Regulator& reg, bool massless,
                                          const QuadratureSpec& spec = {}) {
  QuadratureHints hints;
  hints.oscillation_frequency = std::max(reg.eps0, reg.eps1);
  const double m2 = massless ? 0.0 : cfg.m * cfg.m;
  auto f = [&](double k) {
    const double w = std::sqrt(k * k + m2);
    return -cfg.lambda * reg.eps0 / 4.0 * std::sin(k * reg.eps1 - w * reg.eps0) * std::exp(-w * reg.tau);
  };
  auto q = integrate_realline(f, reg.tau, spec, hints);
  q.value /= 2.0 * std::numbers::pi;
  q.error_estimate /= 2.0 * std::numbers::pi;
  return q;
}

// --- conformal map ---------------------------------------------------------

/// delta_pointsplit at tau = 0 and vbar = v + h, with V(v) - V(vbar) taken
/// from the Taylor jet when |h| is small enough for direct subtraction to
/// lose most of its digits.
inline double pointsplit_compensated(const flanagan::ConformalMap& map, double v, double h) {
  const auto j = map.jet(v);
  const auto jb = map.jet(v + h);
  const double dv = (v + h) - v;
  const double dmap = std::abs(dv) < 1e-4 ? -(j.d1 * dv + j.d2 * dv * dv / 2.0 + j.d3 * dv * dv * dv / 6.0)
                                          : j.f - jb.f;
  return (j.d1 * jb.d1 / (dmap * dmap) - 1.0 / (dv * dv)) / (4.0 * std::numbers::pi);
}

struct Extrapolated {
  double value = 0.0;
  double change = 0.0;  // difference between the last two extrapolants
};

/// Richardson limit of pointsplit_compensated as h -> 0 over h = h0 / 2^i,
/// i = 0..levels-1. Each sample carries a rounding error of order
/// eps / h^3 (V(v) - V(vbar) loses digits, then is squared and divided
/// into), so the schedule stops at h0 / 32 rather than going deeper.
inline Extrapolated taylor_limit(const flanagan::ConformalMap& map, double v, double h0 = 0.2, int levels = 6) {
  std::vector<double> hs;
  std::vector<ComplexValue> cvals;
  for (int i = 0; i < levels; ++i) {
    const double h = std::ldexp(h0, -i);
    hs.push_back(h);
    cvals.emplace_back(pointsplit_compensated(map, v, h));
  }
  const auto ex = richardson_extrapolants(hs, cvals);
  const double last = ex.back().real();
  return {last, std::abs(last - ex[ex.size() - 2].real())};
}

/// (1/4 pi) Int_0^inf omega exp(-i omega dv) exp(-omega tau) d omega.
inline ComplexValue vacuum_tvv_quadrature(double dv, double tau, const QuadratureSpec& spec = {}) {
  QuadratureHints hints;
  hints.oscillation_frequency = std::abs(dv);
  const auto q = integrate_halfline([dv](double w) { return w * std::polar(1.0, -w * dv); }, tau, spec, hints);
  return q.value / (4.0 * std::numbers::pi);
}

/// Exact bound for rho = exp(-(x/sigma)^2) / (sigma sqrt(pi)), for which
/// Int rho'^2/rho dx = 2/sigma^2.
inline double gaussian_bound(double sigma) { return -1.0 / (12.0 * std::numbers::pi * sigma * sigma); }

}  // namespace regulab::oracle
