#pragma once

// Adaptive Gauss-Kronrod quadrature on finite, half and full lines with an
// exponential frequency cutoff, plus Neville/Richardson extrapolation used to
// classify the limit of a sampled sequence.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "regulab/errors.hpp"

namespace regulab {

using ComplexValue = std::complex<double>;

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  /// The cutoff-weighted tail is dropped at tail_truncation_multiple / tau.
  double tail_truncation_multiple = 60.0;

  void validate() const {
    if (!(rel_tol > 0.0)) throw InvalidArgument("quadrature.rel_tol must be > 0");
    if (!(abs_tol > 0.0)) throw InvalidArgument("quadrature.abs_tol must be > 0");
    if (max_subdivisions < 1) throw InvalidArgument("quadrature.max_subdivisions must be >= 1");
    if (!(tail_truncation_multiple >= 10.0))
      throw InvalidArgument("quadrature.tail_truncation_multiple must be >= 10");
  }
};

/// Optional knowledge about the integrand.
struct QuadratureHints {
  /// Dominant angular frequency of oscillation in the integration variable.
  /// Caps the initial panel width at pi / (4 * frequency).
  double oscillation_frequency = 0.0;
  /// Bound M on |f| beyond the truncation point. NaN means "sample it".
  double tail_bound = std::numeric_limits<double>::quiet_NaN();
};

struct QuadratureResult {
  ComplexValue value{};
  double error_estimate = 0.0;
  long evaluations = 0;
  /// True when the requested tolerance was below the rounding floor of the
  /// integrand and the result was accepted at that floor instead.
  bool roundoff_limited = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr std::size_t kMaxInitialPanels = 1u << 16;

struct Panel {
  double a = 0.0;
  double b = 0.0;
  ComplexValue value{};
  double error = 0.0;
  double resabs = 0.0;
};

/// Compensated complex summation.
class ComplexAccumulator {
 public:
  void add(ComplexValue x) {
    add_part(sum_re_, comp_re_, x.real());
    add_part(sum_im_, comp_im_, x.imag());
  }
  ComplexValue value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

template <class F>
Panel gauss_kronrod15(F& f, double a, double b, long& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<ComplexValue, 15> fv;
  fv[7] = ComplexValue(f(center));
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    fv[j] = ComplexValue(f(center - dx));
    fv[14 - j] = ComplexValue(f(center + dx));
  }
  evaluations += 15;

  ComplexValue kronrod = fv[7] * kKronrodWeights[7];
  ComplexValue gauss = fv[7] * kGaussWeights[3];
  double resabs = std::abs(fv[7]) * kKronrodWeights[7];
  for (std::size_t j = 0; j < 7; ++j) {
    kronrod += (fv[j] + fv[14 - j]) * kKronrodWeights[j];
    resabs += (std::abs(fv[j]) + std::abs(fv[14 - j])) * kKronrodWeights[j];
    if (j % 2 == 1) gauss += (fv[j] + fv[14 - j]) * kGaussWeights[j / 2];
  }
  const ComplexValue mean = 0.5 * kronrod;
  double resasc = std::abs(fv[7] - mean) * kKronrodWeights[7];
  for (std::size_t j = 0; j < 7; ++j)
    resasc += (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean)) * kKronrodWeights[j];

  const double width = std::abs(half);
  resabs *= width;
  resasc *= width;
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (!std::isfinite(err) || !std::isfinite(kronrod.real()) || !std::isfinite(kronrod.imag()))
    throw DomainError("integrand is not finite on [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  return Panel{a, b, kronrod * half, err, resabs};
}

/// Panel edges on [0, length] with width capped by the oscillation hint and
/// a geometric refinement toward 0.
inline std::vector<double> graded_edges(double length, double frequency) {
  double width = length / 16.0;
  if (frequency > 0.0) width = std::min(width, std::numbers::pi / (4.0 * frequency));
  auto count = static_cast<std::size_t>(std::ceil(length / width));
  count = std::clamp<std::size_t>(count, 1, kMaxInitialPanels);
  const double step = length / static_cast<double>(count);

  std::vector<double> edges;
  edges.reserve(count + 12);
  edges.push_back(0.0);
  for (int j = 10; j >= 1; --j) edges.push_back(step * std::ldexp(1.0, -j));
  for (std::size_t i = 1; i < count; ++i) edges.push_back(step * static_cast<double>(i));
  edges.push_back(length);
  return edges;
}

}  // namespace detail

/// Globally adaptive G7-K15 quadrature over the panels delimited by `edges`
/// (ascending). Subdivides the worst panel until the summed error estimate
/// meets max(abs_tol, rel_tol * |value|).
template <class F>
QuadratureResult integrate_mesh(F&& f, std::span<const double> edges, const QuadratureSpec& spec) {
  using detail::Panel;
  spec.validate();
  if (edges.size() < 2) throw InvalidArgument("integration mesh needs at least two edges");

  auto worse = [](const Panel& x, const Panel& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
  std::vector<Panel> frozen;
  long evaluations = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    queue.push(detail::gauss_kronrod15(f, edges[i], edges[i + 1], evaluations));
  }

  auto totals = [&](ComplexValue& value, double& error, double& resabs) {
    detail::ComplexAccumulator acc;
    error = 0.0;
    resabs = 0.0;
    std::vector<Panel> all(queue.size());
    // Copy the heap contents without disturbing it.
    auto copy = queue;
    std::size_t n = 0;
    while (!copy.empty()) {
      all[n++] = copy.top();
      copy.pop();
    }
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : all) {
      acc.add(p.value);
      error += p.error;
      resabs += p.resabs;
    }
    value = acc.value();
  };

  ComplexValue value;
  double error = 0.0, resabs = 0.0;
  totals(value, error, resabs);
  int subdivisions = 0;
  bool roundoff_limited = false;
  while (true) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
    if (error <= tol) break;
    const double floor = 50.0 * detail::kEps * resabs;
    if (error <= floor) {
      roundoff_limited = true;
      break;
    }
    if (queue.empty() || subdivisions >= spec.max_subdivisions) {
      throw ToleranceNotMet("quadrature did not converge: error estimate " + std::to_string(error) +
                                " exceeds tolerance " + std::to_string(tol) + " after " +
                                std::to_string(subdivisions) + " subdivisions",
                            std::abs(value), error);
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 8.0 * detail::kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = detail::gauss_kronrod15(f, worst.a, mid, evaluations);
    Panel right = detail::gauss_kronrod15(f, mid, worst.b, evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    resabs += left.resabs + right.resabs - worst.resabs;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
    if (subdivisions % 256 == 0) totals(value, error, resabs);
  }
  totals(value, error, resabs);
  return QuadratureResult{value, error, evaluations, roundoff_limited};
}

/// Integral of f over [a, b], a < b.
template <class F>
QuadratureResult integrate_interval(F&& f, double a, double b, const QuadratureSpec& spec,
                                    const QuadratureHints& hints = {}) {
  if (!(b > a)) throw InvalidArgument("integration interval must satisfy a < b");
  const double length = b - a;
  std::vector<double> edges;
  double width = length / 16.0;
  if (hints.oscillation_frequency > 0.0)
    width = std::min(width, std::numbers::pi / (4.0 * hints.oscillation_frequency));
  auto count = static_cast<std::size_t>(std::ceil(length / width));
  count = std::clamp<std::size_t>(count, 1, detail::kMaxInitialPanels);
  for (std::size_t i = 0; i < count; ++i)
    edges.push_back(a + length * static_cast<double>(i) / static_cast<double>(count));
  edges.push_back(b);
  return integrate_mesh(f, edges, spec);
}

/// Integral over [0, inf) of f(w) * exp(-w * tau), truncated at
/// T = tail_truncation_multiple / tau; the neglected tail is bounded by
/// M * exp(-T tau) / tau and added to the error estimate.
template <class F>
QuadratureResult integrate_halfline(F&& f, double tau, const QuadratureSpec& spec,
                                    const QuadratureHints& hints = {}) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidCutoff("frequency cutoff tau must be > 0");
  spec.validate();
  const double cutoff = spec.tail_truncation_multiple / tau;
  auto weighted = [&f, tau](double w) { return ComplexValue(f(w)) * std::exp(-w * tau); };
  const auto edges = detail::graded_edges(cutoff, hints.oscillation_frequency);
  QuadratureResult result = integrate_mesh(weighted, edges, spec);

  double bound = hints.tail_bound;
  if (std::isnan(bound)) {
    bound = 0.0;
    for (int j = 0; j <= 8; ++j) bound = std::max(bound, std::abs(ComplexValue(f(cutoff * (1.0 + j / 8.0)))));
    result.evaluations += 9;
  }
  result.error_estimate += bound * std::exp(-spec.tail_truncation_multiple) / tau;
  return result;
}

/// Integral of f over (-inf, inf) with symmetric truncation at
/// |k| = tail_truncation_multiple / tau. The caller embeds any cutoff weight
/// in f; |f| sampled beyond the truncation point times 1/tau on each side is
/// added to the error estimate.
template <class F>
QuadratureResult integrate_realline(F&& f, double tau, const QuadratureSpec& spec,
                                    const QuadratureHints& hints = {}) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidCutoff("frequency cutoff tau must be > 0");
  spec.validate();
  const double cutoff = spec.tail_truncation_multiple / tau;
  const auto half = detail::graded_edges(cutoff, hints.oscillation_frequency);
  std::vector<double> edges;
  edges.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it > 0.0) edges.push_back(-*it);
  edges.insert(edges.end(), half.begin(), half.end());
  QuadratureResult result = integrate_mesh(f, edges, spec);

  double bound = hints.tail_bound;
  if (std::isnan(bound)) {
    bound = 0.0;
    for (int j = 0; j <= 8; ++j) {
      const double k = cutoff * (1.0 + j / 8.0);
      bound = std::max({bound, std::abs(ComplexValue(f(k))), std::abs(ComplexValue(f(-k)))});
    }
    result.evaluations += 18;
  }
  result.error_estimate += 2.0 * bound / tau;
  return result;
}

// ---------------------------------------------------------------------------
// Limits

/// Extrapolants E_1..E_n of the sequence toward s = 0: E_k is the value at 0
/// of the polynomial in s through the first k samples. Samples must be
/// ordered with s strictly decreasing, so each E_k brings in a smaller s.
inline std::vector<ComplexValue> richardson_extrapolants(std::span<const double> s,
                                                         std::span<const ComplexValue> values) {
  const std::size_t n = s.size();
  if (values.size() != n) throw InvalidArgument("sample and value counts differ");
  std::vector<ComplexValue> out;
  out.reserve(n);
  // Neville tableau; after step k, p[j] interpolates samples j..k at s = 0.
  std::vector<ComplexValue> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = values[k];
    for (std::size_t j = k; j-- > 0;) p[j] = (s[j] * p[j + 1] - s[k] * p[j]) / (s[j] - s[k]);
    out.push_back(p[0]);
  }
  return out;
}

enum class LimitKind { Finite, Divergent, Indeterminate };

inline const char* to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::Finite: return "Finite";
    case LimitKind::Divergent: return "Divergent";
    case LimitKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

struct LimitOutcome {
  LimitKind kind = LimitKind::Indeterminate;
  ComplexValue value{};  // meaningful only when kind == Finite
  double confidence = 0.0;
};

struct LimitSample {
  double s = 0.0;
  ComplexValue value{};
};

namespace detail {

struct LogFit {
  double slope = 0.0;
  double rms_residual = 0.0;
};

inline LogFit fit_log_log(std::span<const LimitSample> tail) {
  const double n = static_cast<double>(tail.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : tail) {
    const double x = std::log(p.s), y = std::log(std::abs(p.value));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (const auto& p : tail) {
    const double r = std::log(std::abs(p.value)) - (intercept + slope * std::log(p.s));
    ss += r * r;
  }
  return {slope, std::sqrt(ss / n)};
}

}  // namespace detail

/// Classifies the s -> 0 behaviour of a sampled sequence.
///
/// Divergent: least-squares fit of log|value| against log s over the four
/// smallest-s samples has slope < -0.5 with rms residual < 0.1.
/// Finite: the Richardson extrapolants contract (each successive change no
/// larger than the previous one, the last below 10% of the sample scale), or
/// the last change is already at rounding level.
/// Indeterminate otherwise.
inline LimitOutcome classify_limit(std::span<const LimitSample> samples) {
  constexpr std::size_t kMinSamples = 4;
  if (samples.size() < kMinSamples)
    throw TooFewSamples("classify_limit needs at least 4 samples, got " +
                        std::to_string(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].s > 0.0)) throw InvalidArgument("limit samples need s > 0");
    if (i > 0 && !(samples[i].s < samples[i - 1].s))
      throw InvalidArgument("limit samples must have strictly decreasing s");
  }
  for (const auto& p : samples)
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
      return {LimitKind::Divergent, {}, 0.0};

  const auto tail = samples.last(kMinSamples);
  const bool all_nonzero =
      std::all_of(tail.begin(), tail.end(), [](const LimitSample& p) { return std::abs(p.value) > 0.0; });
  if (all_nonzero) {
    const auto fit = detail::fit_log_log(tail);
    if (fit.slope < -0.5 && fit.rms_residual < 0.1)
      return {LimitKind::Divergent, {}, std::clamp(1.0 - fit.rms_residual / 0.1, 0.0, 1.0)};
  }

  double scale = 0.0;
  std::vector<double> s;
  std::vector<ComplexValue> v;
  for (const auto& p : samples) {
    scale = std::max(scale, std::abs(p.value));
    s.push_back(p.s);
    v.push_back(p.value);
  }
  if (scale == 0.0) return {LimitKind::Finite, {}, 1.0};

  const auto ext = richardson_extrapolants(s, v);
  std::vector<double> change;
  for (std::size_t k = 1; k < ext.size(); ++k) change.push_back(std::abs(ext[k] - ext[k - 1]));

  const double rounding = 1e-12 * scale;
  if (change.back() <= rounding) return {LimitKind::Finite, ext.back(), 1.0};

  // Contraction over the changes above rounding level.
  double worst_ratio = 0.0;
  bool contracting = true;
  for (std::size_t k = 1; k < change.size(); ++k) {
    if (change[k] <= rounding) continue;
    if (change[k - 1] <= rounding) {
      contracting = false;
      break;
    }
    const double ratio = change[k] / change[k - 1];
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 1.0) contracting = false;
  }
  if (contracting && change.back() <= 0.1 * scale)
    return {LimitKind::Finite, ext.back(), std::clamp(1.0 - worst_ratio, 0.0, 1.0)};
  return {LimitKind::Indeterminate, {}, 0.0};
}

}  // namespace regulab
