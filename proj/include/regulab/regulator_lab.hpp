#pragma once

// Regulator-dependent expressions evaluated along power-law paths
// (eps0, eps1, tau) = (c0 s^p0, c1 s^p1, ctau s^ptau) as s -> 0, and the
// classification of where each one ends up.

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regulab/errors.hpp"
#include "regulab/flanagan.hpp"
#include "regulab/numerics.hpp"
#include "regulab/regulator.hpp"
#include "regulab/static_well.hpp"
#include "regulab/time_step.hpp"

namespace regulab::lab {

/// (eps1^2 - eps0^2) + 2 i eps0 tau + tau^2
inline ComplexValue sigma1(const Regulator& reg) {
  return {reg.eps1 * reg.eps1 - reg.eps0 * reg.eps0 + reg.tau * reg.tau, 2.0 * reg.eps0 * reg.tau};
}

/// eps1^2 / sigma1
inline ComplexValue ratio_239(const Regulator& reg) {
  const ComplexValue s = sigma1(reg);
  if (s == 0.0) throw SingularRegulator("sigma1 = 0: the split is null and there is no cutoff");
  return reg.eps1 * reg.eps1 / s;
}

struct LimitPath {
  double c0 = 1.0, c1 = 1.0, ctau = 1.0;
  double p0 = 1.0, p1 = 1.0, ptau = 1.0;

  void validate() const {
    for (double c : {c0, c1, ctau})
      if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("path coefficients must be finite and >= 0");
    if (c0 == 0.0 && c1 == 0.0 && ctau == 0.0) throw InvalidArgument("at least one path coefficient must be > 0");
    for (double p : {p0, p1, ptau})
      if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("path exponents must be finite and >= 0");
  }

  Regulator at(double s) const {
    return {c0 * std::pow(s, p0), c1 * std::pow(s, p1), ctau * std::pow(s, ptau)};
  }
};

enum class Ambiguity { Ratio239, RStatic317, DTerm616, FlanaganDelta };

inline const char* to_string(Ambiguity a) {
  switch (a) {
    case Ambiguity::Ratio239: return "ratio239";
    case Ambiguity::RStatic317: return "rstatic317";
    case Ambiguity::DTerm616: return "dterm616";
    case Ambiguity::FlanaganDelta: return "flanagan";
  }
  return "?";
}

inline Ambiguity parse_ambiguity(std::string_view id) {
  for (auto a : {Ambiguity::Ratio239, Ambiguity::RStatic317, Ambiguity::DTerm616, Ambiguity::FlanaganDelta})
    if (id == to_string(a)) return a;
  throw InvalidArgument("unknown expression id '" + std::string(id) +
                        "' (expected ratio239, rstatic317, dterm616 or flanagan)");
}

/// Fixed parameters of the expressions that need more than the regulator.
struct AmbiguityContext {
  double lambda = 1.0;
  double a = 1.0;
  std::optional<flanagan::ConformalMap> map;  // defaults to exp(v)
  double v = 0.0;
};

/// The FlanaganDelta mapping: v - vbar = eps1 - eps0, centred on ctx.v.
inline ComplexValue evaluate(Ambiguity id, const Regulator& reg, const AmbiguityContext& ctx = {}) {
  switch (id) {
    case Ambiguity::Ratio239:
      return ratio_239(reg);
    case Ambiguity::RStatic317:
      return well::r_integral_closed(well::WellConfig{ctx.lambda, ctx.a}, reg);
    case Ambiguity::DTerm616:
      return step::d_term_raw(ctx.lambda, reg.eps0, reg.eps1, reg.tau);
    case Ambiguity::FlanaganDelta: {
      const auto map = ctx.map ? *ctx.map : flanagan::ConformalMap::parse("exp(v)");
      const double half = 0.5 * (reg.eps1 - reg.eps0);
      return flanagan::delta_pointsplit(map, ctx.v + half, ctx.v - half, reg.tau);
    }
  }
  throw InvalidArgument("unknown expression id");
}

struct ScanResult {
  LimitOutcome outcome;
  std::vector<LimitSample> samples;
  /// Set when the expression was singular at some sample on the path.
  std::optional<double> singular_at;
};

inline std::vector<double> default_schedule() { return {0.1, 0.01, 0.001, 0.0001}; }

/// Evaluate along the path at the given (strictly decreasing) s and classify
/// the limit. A singular point on the path is a divergence, reported with
/// zero confidence.
inline ScanResult scan_path(Ambiguity id, const LimitPath& path, std::span<const double> s_values,
                            const AmbiguityContext& ctx = {}) {
  path.validate();
  if (s_values.size() < 4) throw TooFewSamples("scan_path needs at least 4 s values");
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    if (!(s_values[i] > 0.0 && s_values[i] <= 1.0)) throw InvalidArgument("s values must lie in (0, 1]");
    if (i > 0 && !(s_values[i] < s_values[i - 1])) throw InvalidArgument("s values must be strictly decreasing");
  }
  ScanResult result;
  for (double s : s_values) {
    try {
      result.samples.push_back({s, evaluate(id, path.at(s), ctx)});
    } catch (const SingularRegulator&) {
      result.singular_at = s;
      result.outcome = LimitOutcome{LimitKind::Divergent, {}, 0.0};
      return result;
    }
  }
  result.outcome = classify_limit(result.samples);
  return result;
}

}  // namespace regulab::lab
