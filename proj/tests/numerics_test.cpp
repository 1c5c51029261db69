#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "regulab/numerics.hpp"

using namespace regulab;

namespace {

std::vector<LimitSample> sampled(auto f, std::vector<double> s = {0.1, 0.01, 0.001, 0.0001}) {
  std::vector<LimitSample> out;
  for (double x : s) out.push_back({x, ComplexValue(f(x))});
  return out;
}

}  // namespace

TEST(Halfline, ExponentialWeightAlone) {
  const auto r = integrate_halfline([](double) { return 1.0; }, 1.0, {});
  EXPECT_NEAR(r.value.real(), 1.0, 1e-13);
  EXPECT_EQ(r.value.imag(), 0.0);
  EXPECT_GE(r.error_estimate, 0.0);
  EXPECT_GT(r.evaluations, 0);
}

TEST(Halfline, FirstMoment) {
  const auto r = integrate_halfline([](double w) { return w; }, 0.5, {});
  EXPECT_NEAR(r.value.real(), 4.0, 4e-10);
}

TEST(Halfline, OscillatingFirstMoment) {
  const double dv = 0.3, tau = 0.1;
  QuadratureHints h;
  h.oscillation_frequency = dv;
  const auto r = integrate_halfline([dv](double w) { return w * std::polar(1.0, -w * dv); }, tau, {}, h);
  const ComplexValue exact = -1.0 / std::pow(ComplexValue(dv, -tau), 2);
  EXPECT_NEAR(r.value.real(), (tau * tau - dv * dv) / std::pow(dv * dv + tau * tau, 2), 1e-8);
  EXPECT_LT(std::abs(r.value - exact), 1e-9 * std::abs(exact));
}

TEST(Halfline, RejectsNonpositiveCutoff) {
  EXPECT_THROW(integrate_halfline([](double) { return 1.0; }, 0.0, {}), InvalidCutoff);
  EXPECT_THROW(integrate_halfline([](double) { return 1.0; }, -1.0, {}), InvalidCutoff);
}

TEST(Halfline, SmallBudgetReportsToleranceNotMet) {
  QuadratureSpec spec;
  spec.max_subdivisions = 1;
  EXPECT_THROW(integrate_interval([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0, spec), ToleranceNotMet);
}

TEST(Halfline, RejectsInvalidSpec) {
  QuadratureSpec spec;
  spec.rel_tol = 0.0;
  EXPECT_THROW(integrate_halfline([](double) { return 1.0; }, 1.0, spec), InvalidArgument);
  spec = {};
  spec.tail_truncation_multiple = 5.0;
  EXPECT_THROW(integrate_halfline([](double) { return 1.0; }, 1.0, spec), InvalidArgument);
}

TEST(Halfline, NonFiniteIntegrandIsADomainError) {
  EXPECT_THROW(integrate_halfline([](double) { return std::nan(""); }, 1.0, {}), DomainError);
}

TEST(Halfline, RemovableSingularityAtZero) {
  // (1 - cos w) / w^2 e^{-w}: integral is pi/4 - ln(2)/2 ... computed from
  // Int (1-cos w)/w^2 e^{-tau w} = atan(1/tau) - (tau/2) ln(1 + 1/tau^2).
  const auto r = integrate_halfline([](double w) { return (1.0 - std::cos(w)) / (w * w); }, 1.0, {});
  EXPECT_NEAR(r.value.real(), std::atan(1.0) - 0.5 * std::log(2.0), 1e-11);
}

TEST(Realline, TwoSidedExponential) {
  const auto r = integrate_realline([](double k) { return std::exp(-std::abs(k)); }, 1.0, {});
  EXPECT_NEAR(r.value.real(), 2.0, 1e-12);
}

TEST(Realline, OddIntegrandVanishes) {
  const auto r = integrate_realline([](double k) { return k * std::exp(-std::abs(k)); }, 1.0, {});
  EXPECT_NEAR(r.value.real(), 0.0, 1e-13);
}

TEST(Realline, Gaussian) {
  const auto r = integrate_realline([](double k) { return std::exp(-k * k); }, 1.0, {});
  EXPECT_NEAR(r.value.real(), std::sqrt(std::numbers::pi), 1e-12);
}

TEST(QuadratureProperties, Linearity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double c0 = u(rng), c1 = u(rng), c2 = u(rng), freq = 2.0 + u(rng);
    const double a = u(rng), b = u(rng), tau = 0.5 + std::abs(u(rng));
    auto f = [&](double w) { return (c0 + c1 * w + c2 * w * w) * std::cos(freq * w); };
    auto g = [&](double w) { return std::polar(1.0, -freq * w) * (1.0 + w); };
    QuadratureHints h;
    h.oscillation_frequency = freq;
    const auto rf = integrate_halfline(f, tau, {}, h);
    const auto rg = integrate_halfline(g, tau, {}, h);
    const auto rs = integrate_halfline([&](double w) { return a * ComplexValue(f(w)) + b * g(w); }, tau, {}, h);
    const double budget = std::abs(a) * rf.error_estimate + std::abs(b) * rg.error_estimate + rs.error_estimate;
    EXPECT_LE(std::abs(rs.value - (a * rf.value + b * rg.value)), budget + 1e-12 * std::abs(rs.value) + 1e-14);
  }
}

TEST(QuadratureProperties, MonotoneInCutoffForPositiveIntegrands) {
  auto f = [](double w) { return w / (1.0 + w * w) + std::sin(w) * std::sin(w); };
  double previous = std::numeric_limits<double>::infinity();
  for (double tau : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
    const double v = integrate_halfline(f, tau, {}).value.real();
    EXPECT_LE(v, previous);
    previous = v;
  }
}

TEST(QuadratureProperties, Conjugation) {
  auto f = [](double w) { return std::polar(w, -0.7 * w) + ComplexValue(0.0, 1.0) / (1.0 + w); };
  QuadratureHints h;
  h.oscillation_frequency = 0.7;
  const auto r = integrate_halfline(f, 0.3, {}, h);
  const auto rc = integrate_halfline([&](double w) { return std::conj(f(w)); }, 0.3, {}, h);
  EXPECT_LE(std::abs(rc.value - std::conj(r.value)), r.error_estimate + rc.error_estimate + 1e-14);
}

TEST(QuadratureProperties, DeterministicAcrossCalls) {
  auto f = [](double w) { return std::sin(3.0 * w) / (1.0 + w); };
  const auto a = integrate_halfline(f, 0.2, {});
  const auto b = integrate_halfline(f, 0.2, {});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error_estimate, b.error_estimate);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Richardson, ExactForPolynomials) {
  const std::vector<double> s = {0.5, 0.25, 0.125, 0.0625};
  std::vector<ComplexValue> v;
  for (double x : s) v.emplace_back(3.0 - 2.0 * x + 5.0 * x * x * x);
  const auto ex = richardson_extrapolants(s, v);
  ASSERT_EQ(ex.size(), 4u);
  EXPECT_NEAR(ex.back().real(), 3.0, 1e-12);
}

TEST(ClassifyLimit, ConstantSequence) {
  const auto o = classify_limit(sampled([](double) { return 1.0; }));
  EXPECT_EQ(o.kind, LimitKind::Finite);
  EXPECT_EQ(o.value, ComplexValue(1.0));
}

TEST(ClassifyLimit, HarmonicBlowup) {
  EXPECT_EQ(classify_limit(sampled([](double s) { return 1.0 / s; })).kind, LimitKind::Divergent);
}

TEST(ClassifyLimit, QuadraticApproach) {
  const auto o = classify_limit(sampled([](double s) { return 1.0 + s * s; }));
  EXPECT_EQ(o.kind, LimitKind::Finite);
  EXPECT_NEAR(o.value.real(), 1.0, 1e-8);
  EXPECT_GE(o.confidence, 0.0);
  EXPECT_LE(o.confidence, 1.0);
}

TEST(ClassifyLimit, ApproachToZero) {
  const auto o = classify_limit(sampled([](double s) { return s; }));
  EXPECT_EQ(o.kind, LimitKind::Finite);
  EXPECT_NEAR(std::abs(o.value), 0.0, 1e-12);
}

TEST(ClassifyLimit, OscillationIsIndeterminate) {
  const auto o = classify_limit(sampled([](double s) { return std::sin(1.0 / s); }));
  EXPECT_EQ(o.kind, LimitKind::Indeterminate);
}

TEST(ClassifyLimit, NonFiniteSampleIsDivergent) {
  auto samples = sampled([](double) { return 1.0; });
  samples.back().value = ComplexValue(std::numeric_limits<double>::infinity(), 0.0);
  const auto o = classify_limit(samples);
  EXPECT_EQ(o.kind, LimitKind::Divergent);
  EXPECT_EQ(o.confidence, 0.0);
}

TEST(ClassifyLimit, InputValidation) {
  EXPECT_THROW(classify_limit(sampled([](double) { return 1.0; }, {0.1, 0.01, 0.001})), TooFewSamples);
  EXPECT_THROW(classify_limit(sampled([](double) { return 1.0; }, {0.1, 0.2, 0.01, 0.001})), InvalidArgument);
}

TEST(ClassifyLimit, ScaleConsistent) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double c = u(rng);
    const double a = u(rng), b = u(rng);
    auto f = [&](double s) { return a + b * s; };
    const auto base = classify_limit(sampled(f));
    const auto scaled = classify_limit(sampled([&](double s) { return c * f(s); }));
    EXPECT_EQ(base.kind, scaled.kind);
    if (base.kind == LimitKind::Finite) {
      EXPECT_NEAR(std::abs(scaled.value - c * base.value), 0.0, 1e-9 * (1.0 + std::abs(c * base.value)));
    }
  }
}
