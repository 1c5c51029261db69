#pragma once

// Acceptance checks run by `regulab selftest` and by the acceptance test
// binary. Every check compares a library result with an independent route
// from regulab/oracles.hpp or with an exact value, at a fixed tolerance.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "regulab/flanagan.hpp"
#include "regulab/oracles.hpp"
#include "regulab/regulator_lab.hpp"
#include "regulab/static_well.hpp"
#include "regulab/time_step.hpp"

namespace regulab::selftest {

struct CheckResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (double e : linspace(std::log10(lo), std::log10(hi), n)) out.push_back(std::pow(10.0, e));
  return out;
}

/// Worst relative error, with exactly-zero references tracked separately by
/// absolute size.
struct GridStats {
  double worst_rel = 0.0;
  double worst_zero_abs = 0.0;
  int cells = 0;
  int zero_cells = 0;
};

inline void record(GridStats& s, double value, double reference) {
  ++s.cells;
  if (reference == 0.0) {
    ++s.zero_cells;
    s.worst_zero_abs = std::max(s.worst_zero_abs, std::abs(value));
  } else {
    s.worst_rel = std::max(s.worst_rel, std::abs(value - reference) / std::abs(reference));
  }
}

}  // namespace detail

/// Closed-form cutoff integral of r_omega vs quadrature on a 5x5x5 grid.
inline CheckResult check_r_integral() {
  detail::GridStats s;
  const well::WellConfig cfg{1.0, 1.0};
  for (double tau : detail::logspace(0.01, 1.0, 5))
    for (double e0 : detail::linspace(0.0, tau / 2, 5))
      for (double e1 : detail::linspace(0.0, tau / 2, 5)) {
        const Regulator reg{e0, e1, tau};
        detail::record(s, oracle::r_integral_quadrature(cfg, reg).value.real(), well::r_integral_closed(cfg, reg));
      }
  const bool ok = s.worst_rel <= 1e-6 && s.worst_zero_abs <= 1e-12;
  return {1, "static-well R term: closed form vs quadrature", ok,
          detail::fmt("%d cells, max rel err %.3g (tol 1e-6); %d zero-reference cells, max |quad| %.3g (tol 1e-12)",
                      s.cells, s.worst_rel, s.zero_cells, s.worst_zero_abs)};
}

/// Closed-form D term vs quadrature of the massless r_k integrand.
inline CheckResult check_d_term() {
  detail::GridStats s;
  const step::StepConfig cfg{1.0, 1.0};
  double mass_gap = 0.0;
  for (double tau : detail::logspace(0.01, 1.0, 5))
    for (double e0 : detail::linspace(0.0, tau / 2, 5))
      for (double e1 : detail::linspace(0.0, tau / 2, 5)) {
        const Regulator reg{e0, e1, tau};
        const double closed = step::d_term(cfg, reg);
        detail::record(s, oracle::d_term_quadrature(cfg, reg, true).value.real(), closed);
        mass_gap = std::max(mass_gap, std::abs(oracle::d_term_quadrature(cfg, reg, false).value.real() - closed));
      }
  const bool ok = s.worst_rel <= 1e-6 && s.worst_zero_abs <= 1e-12;
  return {2, "step D term: closed form vs quadrature (omega -> |k|)", ok,
          detail::fmt("%d cells, max rel err %.3g (tol 1e-6); %d zero-reference cells, max |quad| %.3g; "
                      "with omega = sqrt(k^2+1) instead of |k| the max abs difference is %.3g",
                      s.cells, s.worst_rel, s.zero_cells, s.worst_zero_abs, mass_gap)};
}

/// Point-split density minus D minus mode-regularized density along
/// eps0 = eps1 = s^2, tau = s.
inline CheckResult check_step_equivalence() {
  const step::StepConfig cfg{1.0, 1.0};
  const double t = 1.0;
  const double mode = step::mode_reg_density(cfg, t).value;
  std::vector<double> rel;
  std::string detail = detail::fmt("mode_reg = %.10g;", mode);
  for (double s : {0.2, 0.1, 0.05}) {
    const Regulator reg{s * s, s * s, s};
    const double ps = step::pointsplit_density(cfg, t, reg).value;
    const double d = step::d_term(cfg, reg);
    rel.push_back(std::abs(ps - d - mode) / mode);
    detail += detail::fmt(" s=%g: pointsplit %.8g, D %.4g, rel residual %.4g;", s, ps, d, rel.back());
  }
  const bool monotone = rel[1] < rel[0] && rel[2] < rel[1];
  const bool ok = monotone && rel[2] < 1e-2;
  detail += detail::fmt(" monotone: %s, residual at s=0.05 < 1e-2: %s", monotone ? "yes" : "no",
                        rel[2] < 1e-2 ? "yes" : "no");
  return {3, "step: pointsplit - D - mode_reg -> 0 along (s^2, s^2, s)", ok, detail};
}

/// The three regimes of eps1^2 / sigma1.
inline CheckResult check_ratio_regimes() {
  const auto sched = lab::default_schedule();
  const auto one = lab::scan_path(lab::Ambiguity::Ratio239, {1, 1, 1, 2, 1, 2}, sched).outcome;
  const auto zero = lab::scan_path(lab::Ambiguity::Ratio239, {1, 1, 1, 1, 2, 1}, sched).outcome;
  const auto inf = lab::scan_path(lab::Ambiguity::Ratio239, {1, 1, 0, 1, 1, 1}, sched).outcome;
  const bool ok = one.kind == LimitKind::Finite && std::abs(one.value - 1.0) <= 1e-6 &&
                  zero.kind == LimitKind::Finite && std::abs(zero.value) <= 1e-6 &&
                  inf.kind == LimitKind::Divergent;
  return {4, "eps1^2/sigma1 regimes: -> 1, -> 0, -> infinity", ok,
          detail::fmt("exponents (2,1,2): %s %.3g; (1,2,1): %s %.3g; tau = 0, eps0 = eps1: %s",
                      to_string(one.kind), std::abs(one.value), to_string(zero.kind), std::abs(zero.value),
                      to_string(inf.kind))};
}

/// Richardson limit of the tau = 0 point-split shift vs the jet formula.
inline CheckResult check_taylor_limit() {
  struct Case {
    std::string text;
    double a;  // for exp(a v); 0 otherwise
  };
  const std::vector<Case> cases = {
      {"exp(0.5*v)", 0.5}, {"exp(v)", 1.0}, {"exp(2*v)", 2.0}, {"v + 0.1*sin(v)", 0.0}, {"tanh(v)", 0.0}};
  double worst = 0.0, worst_exact = 0.0;
  for (const auto& c : cases) {
    const auto map = flanagan::ConformalMap::parse(c.text);
    for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const double jet = flanagan::delta_flanagan(map, v);
      worst = std::max(worst, std::abs(oracle::taylor_limit(map, v).value - jet));
      if (c.a != 0.0) worst_exact = std::max(worst_exact, std::abs(jet + c.a * c.a / (48.0 * std::numbers::pi)));
    }
  }
  const bool ok = worst <= 1e-7 && worst_exact <= 1e-10;
  return {5, "conformal map: Richardson limit vs jet formula", ok,
          detail::fmt("25 points, max |extrapolated - jet| %.3g (tol 1e-7); exp(a v) vs -a^2/(48 pi): %.3g (tol 1e-10)",
                      worst, worst_exact)};
}

/// Coincidence first (fixed tau) vs tau -> 0 first.
inline CheckResult check_order_of_limits() {
  double worst = 0.0;
  for (const char* text : {"v", "2*v", "exp(v)", "exp(2*v)", "v + 0.1*sin(v)", "tanh(v)"}) {
    const auto map = flanagan::ConformalMap::parse(text);
    for (double v : {-0.7, 0.0, 0.3})
      for (double tau : {0.01, 0.1, 1.0}) {
        const double d1 = map.jet(v).d1;
        const double scale = (d1 * d1 + 1.0) / (4.0 * std::numbers::pi * tau * tau);
        const double gap = std::abs(flanagan::delta_pointsplit(map, v, v, tau).real() - flanagan::delta_tau(map, v, tau));
        worst = std::max(worst, gap / scale);
      }
  }
  const auto e = flanagan::ConformalMap::parse("exp(v)");
  const double taylor = flanagan::delta_flanagan(e, 0.0);
  const double tau_first = flanagan::delta_tau(e, 0.0, 0.1);
  const bool exact = taylor == -1.0 / (48.0 * std::numbers::pi) && tau_first == 0.0;
  const bool ok = worst <= 4.0 * std::numeric_limits<double>::epsilon() && exact;
  return {6, "order of limits: coincidence identity and exp(v) disagreement", ok,
          detail::fmt("pointsplit(v, v, tau) vs tau-first formula: max gap %.3g in units of the term size (tol 4 eps); "
                      "exp(v) at 0: tau -> 0 first %.17g, coincidence first %.17g",
                      worst, taylor, tau_first)};
}

/// Closed-form vacuum <T_vv> vs quadrature.
inline CheckResult check_vacuum_tvv() {
  double worst = 0.0;
  for (double dv : detail::linspace(0.1, 1.0, 4))
    for (double tau : detail::linspace(0.05, 0.5, 4)) {
      const ComplexValue closed = flanagan::vacuum_tvv(dv, 0.0, tau);
      worst = std::max(worst, std::abs(oracle::vacuum_tvv_quadrature(dv, tau) - closed) / std::abs(closed));
    }
  return {7, "vacuum <T_vv>: closed form vs quadrature", worst <= 1e-8,
          detail::fmt("16 points, max rel err %.3g (tol 1e-8)", worst)};
}

/// Quantum-inequality bound for Gaussian weights.
inline CheckResult check_qi_bound() {
  const auto wide = flanagan::qi_bound_rhs(flanagan::WeightFunction::parse("exp(-(x/2)^2)/(2*sqrt(pi))", -30, 30));
  const auto narrow = flanagan::qi_bound_rhs(flanagan::WeightFunction::parse("exp(-(x/1)^2)/(1*sqrt(pi))", -15, 15));
  const double err = std::abs(wide.value - oracle::gaussian_bound(2.0));
  const double ratio_err = std::abs(narrow.value / wide.value - 4.0) / 4.0;
  const bool ok = err <= 1e-8 && ratio_err <= 1e-8;
  return {8, "QI bound: Gaussian weight and width scaling", ok,
          detail::fmt("sigma=2: %.17g vs %.17g (abs err %.3g, tol 1e-8); sigma 2 -> 1 ratio off 4 by %.3g relative (tol 1e-8)",
                      wide.value, oracle::gaussian_bound(2.0), err, ratio_err)};
}

/// Mode identities: Bogoliubov pair, step continuity, well matching.
inline CheckResult check_mode_invariants() {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double pair_sum = 0.0, pair_diff = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const step::StepConfig cfg{10.0 * unit(rng), 0.1 + 4.9 * unit(rng)};
    const double k = -20.0 + 40.0 * unit(rng);
    const auto [a, b] = step::bogoliubov(cfg, k);
    const auto [w, e] = step::frequencies(cfg, k);
    pair_sum = std::max(pair_sum, std::abs(a + b - 1.0));
    pair_diff = std::max(pair_diff, std::abs(b * b - a * a - w / e));
  }
  double step_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const step::StepConfig cfg{10.0 * unit(rng), 0.1 + 4.9 * unit(rng)};
    const double k = -20.0 + 40.0 * unit(rng);
    const double below = -std::numeric_limits<double>::denorm_min();
    step_gap = std::max({step_gap, std::abs(step::s_k(cfg, k, below) - step::s_k(cfg, k, 0.0)),
                         std::abs(step::s_k_derivative(cfg, k, below) - step::s_k_derivative(cfg, k, 0.0))});
  }
  double match_gap = 0.0;
  int below_barrier = 0;
  for (int i = 0; i < 100; ++i) {
    const well::WellConfig cfg{10.0 * unit(rng), 0.1 + 1.9 * unit(rng)};
    const double omega = 0.05 + 5.0 * unit(rng);
    if (omega * omega < cfg.lambda) ++below_barrier;
    for (auto parity : {well::Parity::Symmetric, well::Parity::Antisymmetric}) {
      const auto mode = well::mode_solution(cfg, parity, omega);
      for (double x : {cfg.a, -cfg.a}) {
        const auto in = well::mode_profile(cfg, mode, x, well::Region::Inside);
        const auto out = well::mode_profile(cfg, mode, x, well::Region::Outside);
        match_gap = std::max({match_gap, std::abs(in.chi - out.chi), std::abs(in.dchi - out.dchi) / std::max(1.0, omega)});
      }
    }
  }
  const bool ok = pair_sum <= 1e-15 && pair_diff <= 1e-15 && step_gap <= 1e-13 && match_gap <= 1e-10;
  return {9, "mode invariants: Bogoliubov identities, step continuity, well matching", ok,
          detail::fmt("|a+b-1| %.3g, |b^2-a^2-w/E| %.3g (tol 1e-15, 1000 draws); s_k jump at t=0 %.3g (tol 1e-13); "
                      "chi/chi' mismatch at |x|=a %.3g (tol 1e-10, 100 draws, %d below the barrier top)",
                      pair_sum, pair_diff, step_gap, match_gap, below_barrier)};
}

/// Fused densities vs mode-by-mode sums, with the printed forms' distance
/// from those sums reported alongside.
inline CheckResult check_density_identity() {
  std::mt19937_64 rng(7310);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0, printed = 0.0;
  for (int i = 0; i < 100; ++i) {
    const well::WellConfig cfg{5.0 * unit(rng), 0.5 + 1.5 * unit(rng)};
    const double omega = 0.05 + 6.0 * unit(rng);
    const double e1 = cfg.a * unit(rng);
    const double x = (cfg.a - 0.5 * e1) * (2.0 * unit(rng) - 1.0) * 0.999;
    const Regulator reg{0.5 * unit(rng), e1, 0.0};
    const double fused = well::xi_lambda(cfg, omega, reg, x, 0.0);
    const double modes = oracle::xi_from_modes(cfg, omega, reg, x);
    worst = std::max(worst, std::abs(fused - modes) / std::max(1.0, std::abs(modes)));
    printed = std::max(printed, std::abs(oracle::xi_printed_form(cfg, omega, reg, x) - modes) / std::max(1.0, std::abs(modes)));
  }
  double step_worst = 0.0, step_printed = 0.0;
  for (int i = 0; i < 100; ++i) {
    const step::StepConfig cfg{5.0 * unit(rng), 0.2 + 2.0 * unit(rng)};
    const double k = -30.0 + 60.0 * unit(rng);
    const double t = 0.5 + 2.0 * unit(rng);
    const Regulator reg{0.5 * unit(rng), 0.5 * unit(rng), 0.0};
    const double direct = oracle::xi_step_direct(cfg, k, t, reg);
    const double scale = std::max(1.0, std::hypot(k, cfg.m));
    step_worst = std::max(step_worst, std::abs(step::xi_step_difference(cfg, k, t, reg) - direct) / scale);
    step_printed = std::max(step_printed, std::abs(oracle::xi_step_printed_form(cfg, k, t, reg) - direct) / scale);
  }
  const bool ok = worst <= 1e-12 && step_worst <= 1e-12;
  return {10, "density identity: fused densities vs mode sums (printed forms reported)", ok,
          detail::fmt("well: fused vs per-mode sum %.3g (tol 1e-12, 100 draws), printed form differs by up to %.3g; "
                      "step: fused vs direct expansion %.3g (tol 1e-12), printed form (no cross term) differs by up to %.3g",
                      worst, printed, step_worst, step_printed)};
}

inline std::vector<std::function<CheckResult()>> all_checks() {
  return {check_r_integral, check_d_term,    check_step_equivalence, check_ratio_regimes,  check_taylor_limit,
          check_order_of_limits, check_vacuum_tvv, check_qi_bound, check_mode_invariants, check_density_identity};
}

}  // namespace regulab::selftest
