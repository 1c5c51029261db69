#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "regulab/oracles.hpp"
#include "regulab/time_step.hpp"

using namespace regulab;
using namespace regulab::step;

TEST(Bogoliubov, RestFrameCoefficients) {
  const auto [a, b] = bogoliubov({3.0, 1.0}, 0.0);
  EXPECT_DOUBLE_EQ(a, 0.25);
  EXPECT_DOUBLE_EQ(b, 0.75);
  const auto f = frequencies({3.0, 1.0}, 0.0);
  EXPECT_EQ(f.omega, 1.0);
  EXPECT_EQ(f.energy, 2.0);
}

TEST(Bogoliubov, NoStepMeansNoMixing) {
  const auto [a, b] = bogoliubov({0.0, 2.0}, 1.5);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 1.0);
}

TEST(Bogoliubov, Identities) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double m = 0.1 + 2.0 * u(rng);
    const double lambda = -0.99 * m * m + 10.0 * u(rng);
    const double k = 50.0 * (2.0 * u(rng) - 1.0);
    const StepConfig cfg{lambda, m};
    const auto [a, b] = bogoliubov(cfg, k);
    const auto [w, e] = frequencies(cfg, k);
    EXPECT_NEAR(a + b, 1.0, 1e-15);
    // For lambda < 0, A is negative and B > 1, so measure relative to B^2.
    EXPECT_NEAR(b * b - a * a, w / e, 4e-15 * std::max(1.0, b * b));
    EXPECT_NEAR(a, 0.5 * (1.0 - w / e), 1e-15 * std::max(1.0, std::abs(a)) + 1e-15);
  }
}

TEST(Bogoliubov, ZeroFrequency) {
  EXPECT_THROW(frequencies({1.0, 0.0}, 0.0), ZeroFrequency);
  EXPECT_THROW(bogoliubov({1.0, 0.0}, 0.0), ZeroFrequency);
  EXPECT_NO_THROW(frequencies({1.0, 0.0}, 0.5));
  EXPECT_THROW(frequencies({-2.0, 1.0}, 0.0), InvalidArgument);
}

TEST(ModeFunction, ContinuousWithContinuousDerivativeAtTheStep) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const StepConfig cfg{10.0 * u(rng) - 0.5, 0.8 + u(rng)};
    const double k = 20.0 * (u(rng) - 0.5);
    const double before = -1e-300;
    EXPECT_NEAR(std::abs(s_k(cfg, k, before) - s_k(cfg, k, 0.0)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(s_k_derivative(cfg, k, before) - s_k_derivative(cfg, k, 0.0)), 0.0, 1e-13);
  }
}

TEST(ModeFunction, Values) {
  const StepConfig cfg{3.0, 1.0};
  EXPECT_NEAR(std::abs(s_k(cfg, 0.0, -2.0) - std::polar(1.0, 2.0)), 0.0, 1e-15);
  const ComplexValue after = 0.25 * std::polar(1.0, 2.0) + 0.75 * std::polar(1.0, -2.0);
  EXPECT_NEAR(std::abs(s_k(cfg, 0.0, 1.0) - after), 0.0, 1e-15);
}

TEST(ModeEnergy, NeverNegative) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const StepConfig cfg{20.0 * u(rng) - 0.9, 1.0};
    EXPECT_GE(mode_energy_change(cfg, 30.0 * (u(rng) - 0.5), 5.0 * u(rng), 1.0 + u(rng)), 0.0);
  }
  EXPECT_EQ(mode_energy_change({1.0, 1.0}, 0.3, 0.0, 1.0), 0.0);
  EXPECT_THROW(mode_energy_change({1.0, 1.0}, 0.3, 1.0, 0.0), InvalidArgument);
}

TEST(ModeRegDensity, TrivialCases) {
  EXPECT_EQ(mode_reg_density({1.0, 1.0}, 0.0).value, 0.0);
  EXPECT_EQ(mode_reg_density({0.0, 1.0}, 2.0).value, 0.0);
  EXPECT_THROW(mode_reg_density({1.0, 0.0}, 1.0), ZeroFrequency);
  EXPECT_THROW(mode_reg_density({1.0, 1.0}, -1.0), InvalidArgument);
}

TEST(ModeRegDensity, ReferenceValue) {
  const auto r = mode_reg_density({1.0, 1.0}, 1.0);
  const double reference = 0.0418675561808249021;
  EXPECT_NEAR(r.value, reference, 1e-10 * reference);
  EXPECT_LE(r.error_estimate, 1e-9 * reference);
}

TEST(ModeRegDensity, MatchesBoxModeSum) {
  const double v = mode_reg_density({1.0, 1.0}, 1.0).value;
  EXPECT_NEAR(oracle::mode_sum({1.0, 1.0}, 1.0, 200.0, 20000), v, 1e-4 * v);
}

TEST(ModeRegDensity, QuadraticInStrength) {
  const double one = mode_reg_density({0.01, 1.0}, 0.7).value;
  const double two = mode_reg_density({0.02, 1.0}, 0.7).value;
  EXPECT_NEAR(two / one, 4.0, 0.01);
}

TEST(PointSplit, VanishesWithoutStep) {
  const auto r = pointsplit_density({0.0, 1.0}, 1.0, {0.1, 0.1, 0.1});
  EXPECT_NEAR(r.value, 0.0, 1e-15);
}

TEST(PointSplit, Preconditions) {
  EXPECT_THROW(pointsplit_density({1.0, 1.0}, 0.1, {0.3, 0.1, 0.1}), SplitStraddlesStep);
  EXPECT_THROW(pointsplit_density({1.0, 1.0}, 0.1, {0.2, 0.1, 0.1}), SplitStraddlesStep);
  EXPECT_THROW(pointsplit_density({1.0, 1.0}, 0.0, {0.0, 0.1, 0.1}), InvalidArgument);
  EXPECT_THROW(pointsplit_density({1.0, 1.0}, 1.0, {0.1, 0.1, 0.0}), InvalidCutoff);
  EXPECT_THROW(pointsplit_density({1.0, 0.0}, 1.0, {0.1, 0.1, 0.1}), ZeroFrequency);
}

TEST(PointSplit, FusedDifferenceMatchesDirectExpansion) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const StepConfig cfg{5.0 * u(rng) - 0.5, 0.8 + u(rng)};
    const double k = 10.0 * (2.0 * u(rng) - 1.0);
    const double t = 0.1 + 3.0 * u(rng);
    const Regulator reg{0.2 * u(rng), 0.2 * u(rng), 0.1};
    const double direct = oracle::xi_step_direct(cfg, k, t, reg);
    const auto [w, e] = frequencies(cfg, k);
    EXPECT_NEAR(xi_step_difference(cfg, k, t, reg), direct, 1e-13 * (w + std::abs(cfg.lambda)));
  }
}

TEST(PointSplit, FusedDifferenceKeepsPrecisionAtLargeMomentum) {
  const StepConfig cfg{1.0, 1.0};
  const Regulator reg{0.01, 0.02, 0.0};
  for (double k : {1e4, 1e6, 1e8}) {
    const double fused = xi_step_difference(cfg, k, 1.0, reg);
    EXPECT_TRUE(std::isfinite(fused));
    EXPECT_LT(std::abs(fused), 10.0 * cfg.lambda * (reg.eps0 + 1.0 / k));
  }
}

TEST(PointSplit, PrintedFormOmitsTheCrossTerm) {
  const StepConfig cfg{2.0, 1.0};
  const Regulator reg{0.05, 0.1, 0.0};
  for (double k : {0.0, 0.7, 3.0})
    for (double t : {0.5, 1.3}) {
      const auto [w, e] = frequencies(cfg, k);
      const auto [a, b] = bogoliubov(cfg, k);
      const double cross = 4.0 * cfg.lambda * a * b * std::cos(2.0 * e * t) * std::cos(k * reg.eps1) / (8.0 * w);
      EXPECT_NEAR(oracle::xi_step_printed_form(cfg, k, t, reg) - oracle::xi_step_direct(cfg, k, t, reg), cross,
                  1e-14);
    }
}

TEST(PointSplit, RTermValue) {
  const StepConfig cfg{2.0, 1.0};
  const Regulator reg{0.1, 0.3, 0.0};
  const double w = std::hypot(0.5, 1.0);
  EXPECT_NEAR(r_k(cfg, 0.5, reg), -2.0 * 0.1 / 4.0 * std::sin(0.5 * 0.3 - w * 0.1), 1e-16);
}

TEST(DTerm, VanishesWithoutTemporalSplit) { EXPECT_EQ(d_term({1.0, 1.0}, {0.0, 0.3, 0.1}), 0.0); }

TEST(DTerm, PureTemporalSplitWithoutCutoff) {
  EXPECT_NEAR(d_term_raw(1.0, 0.3, 0.0, 0.0), 1.0 / (4.0 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(d_term_raw(2.5, 1e-3, 0.0, 0.0), 2.5 / (4.0 * std::numbers::pi), 1e-15);
}

TEST(DTerm, SingularOnTheNullSplit) {
  EXPECT_THROW(d_term({1.0, 1.0}, {0.2, 0.2, 0.0}), SingularRegulator);
  EXPECT_THROW(d_term({1.0, 1.0}, {0.0, 0.0, 0.0}), SingularRegulator);
}

TEST(DTerm, MatchesMasslessQuadrature) {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Regulator reg{0.3 * u(rng), 0.3 * u(rng), 0.05 + 0.3 * u(rng)};
    const double closed = d_term({1.3, 1.0}, reg);
    const auto q = oracle::d_term_quadrature({1.3, 1.0}, reg, true);
    EXPECT_NEAR(q.value.real(), closed, 1e-6 * std::max(std::abs(closed), 1e-3));
  }
}

TEST(DTerm, EvenInCutoff) {
  std::mt19937_64 rng(65);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double e0 = u(rng), e1 = u(rng), tau = u(rng) + 0.01;
    EXPECT_NEAR(d_term_raw(1.0, e0, e1, tau), d_term_raw(1.0, e0, e1, -tau),
                1e-15 * std::max(1.0, std::abs(d_term_raw(1.0, e0, e1, tau))));
  }
}

TEST(DTerm, ScaleFree) {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double e0 = u(rng), e1 = u(rng), tau = u(rng) + 0.01;
    const double c = std::pow(10.0, 6.0 * u(rng) - 3.0);
    const double base = d_term_raw(1.7, e0, e1, tau);
    EXPECT_NEAR(d_term_raw(1.7, c * e0, c * e1, c * tau), base, 1e-13 * std::max(1.0, std::abs(base)));
  }
}
