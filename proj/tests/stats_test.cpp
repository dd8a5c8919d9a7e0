#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tinyairnet/stats.hpp"

namespace tinyairnet {
namespace {

const SimilarityDistribution kUniform = SimilarityDistribution::uniform();

TEST(QFunction, SymmetryAndLimits) {
  EXPECT_EQ(q_function(0.0), 0.5);
  EXPECT_EQ(q_function(std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_EQ(q_function(-std::numeric_limits<double>::infinity()), 1.0);
  for (double x = -8.0; x <= 8.0; x += 0.37) EXPECT_NEAR(q_function(x) + q_function(-x), 1.0, 1e-15);
}

TEST(QFunction, RelativeAccuracyAgainstBoostNormal) {
  for (double x = -8.0; x <= 8.0; x += 1.0 / 64) {
    const double ref = oracle::q(x);
    EXPECT_LE(std::abs(q_function(x) - ref), 1e-12 * ref) << "x=" << x;
  }
}

TEST(Observe, NoiselessLimitReturnsBeta) {
  Rng rng(1);
  EXPECT_EQ(observe(0.37, ObservationModel{0.0}, rng), 0.37);
}

TEST(Observe, NoiseMomentsMatchSigma) {
  Rng rng(12345);
  const ObservationModel obs{1.0 / 8};
  const int n = 1'000'000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double w = observe(0.5, obs, rng) - 0.5;
    sum += w;
    sumsq += w * w;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  EXPECT_LE(std::abs(mean), 3 * obs.sigma_ml / 1e3);
  EXPECT_NEAR(sd, 0.125, 0.01 * 0.125);
}

TEST(Similarity, UniformDensityIntegratesToOne) {
  EXPECT_NEAR(p_delta(0.0, kUniform), 1.0, 1e-9);
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double b = kUniform.sample(rng);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
  }
}

TEST(Similarity, CustomDensityIsSupported) {
  // Triangular density 2b on [0,1].
  const auto tri = SimilarityDistribution::custom(
      "triangular", [](double b) { return (b >= 0 && b <= 1) ? 2 * b : 0.0; },
      [](Rng& rng) { return std::sqrt(std::uniform_real_distribution<double>(0, 1)(rng)); });
  EXPECT_NEAR(p_delta(0.0, tri), 1.0, 1e-9);
  EXPECT_NEAR(p_delta(0.5, tri), 0.75, 1e-12);
  EXPECT_FALSE(tri == kUniform);
  EXPECT_THROW(SimilarityDistribution::custom("x", nullptr, nullptr), std::invalid_argument);
}

TEST(PTh, MatchesClosedFormAtTradeoffEndpoint) {
  const double v = 0.98046875;
  const double expected = 0.0602409121978698;  // closed-form oracle, frozen
  EXPECT_NEAR(oracle::uniform_p_th(v, 1.0 / 8), expected, 1e-14);
  EXPECT_NEAR(p_th(v, 1.0 / 8, kUniform), expected, 1e-10);
}

TEST(PTh, ThresholdNeverBinds) { EXPECT_NEAR(p_th(0.0, 1e-9, kUniform), 1.0, 1e-8); }

TEST(PTh, StrictlyDecreasingInThreshold) {
  double prev = 2.0;
  for (int k = 0; k <= 20; ++k) {
    const double p = p_th(0.05 * k, 1.0 / 8, kUniform);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(PTh, RejectsNonPositiveSigma) {
  EXPECT_THROW(p_th(0.5, 0.0, kUniform), std::invalid_argument);
  EXPECT_THROW(p_th(0.5, -1.0, kUniform), std::invalid_argument);
}

TEST(PDelta, UniformTail) {
  EXPECT_NEAR(p_delta(0.9, kUniform), 0.1, 1e-15);
  EXPECT_NEAR(p_delta(0.98, kUniform), 0.02, 1e-15);
  EXPECT_NEAR(p_delta(0.0, kUniform), 1.0, 1e-15);
  EXPECT_EQ(p_delta(1.0, kUniform), 0.0);
}

TEST(PA, MatchesClosedFormAtTradeoffEndpoint) {
  const double expected = 0.406171318952706;  // closed-form oracle, frozen
  EXPECT_NEAR(oracle::uniform_p_a(0.98046875, 0.9, 1.0 / 8), expected, 1e-13);
  EXPECT_NEAR(p_a(0.98046875, 0.9, 1.0 / 8, kUniform), expected, 1e-9);
}

TEST(PA, NoiselessRelevantImageAlwaysPasses) {
  EXPECT_NEAR(p_a(0.5, 0.9, 1e-12, kUniform), 1.0, 1e-9);
  EXPECT_NEAR(p_a(0.9, 0.9, 1e-12, kUniform), 1.0, 1e-9);
}

TEST(PA, ThresholdAtDeltaPassesAtLeastHalf) {
  for (double sigma : {1.0 / 16, 1.0 / 8, 0.5, 2.0}) {
    EXPECT_GE(p_a(0.9, 0.9, sigma, kUniform), 0.5);
    EXPECT_NEAR(p_a(0.9, 0.9, sigma, kUniform), oracle::uniform_p_a(0.9, 0.9, sigma), 1e-9);
  }
}

TEST(PA, UndefinedWithoutRelevantMass) {
  EXPECT_THROW(p_a(0.5, 1.0, 0.125, kUniform), std::domain_error);
}

TEST(StatsProperty, QuadratureAgreesWithClosedForm) {
  for (double sigma : {1.0 / 8, 1.0 / 16}) {
    for (int k = 0; k < 256; ++k) {
      const double v = k / 255.0;
      ASSERT_NEAR(p_th(v, sigma, kUniform), oracle::uniform_p_th(v, sigma), 1e-8) << v;
      ASSERT_NEAR(p_a(v, 0.9, sigma, kUniform), oracle::uniform_p_a(v, 0.9, sigma), 1e-8) << v;
    }
  }
}

TEST(StatsProperty, TransmissionsIncludeRelevantPasses) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double v = u(gen), d = u(gen), sigma = 0.01 + u(gen);
    EXPECT_GE(p_th(v, sigma, kUniform) + 1e-12, p_delta(d, kUniform) * p_a(v, d, sigma, kUniform));
  }
}

TEST(StatsProperty, EmpiricalPassFrequenciesMatch) {
  const double v = 0.8, d = 0.9, sigma = 1.0 / 8;
  const ObservationModel obs{sigma};
  Rng rng(2024);
  const int n = 1'000'000;
  int pass = 0, relevant = 0, relevant_pass = 0;
  for (int i = 0; i < n; ++i) {
    const double beta = kUniform.sample(rng);
    const bool sent = observe(beta, obs, rng) >= v;
    pass += sent;
    if (beta >= d) {
      ++relevant;
      relevant_pass += sent;
    }
  }
  const double pth = p_th(v, sigma, kUniform);
  EXPECT_LE(std::abs(double(pass) / n - pth), 4 * std::sqrt(pth * (1 - pth) / n));
  const double pa = p_a(v, d, sigma, kUniform);
  EXPECT_LE(std::abs(double(relevant_pass) / relevant - pa), 4 * std::sqrt(pa * (1 - pa) / relevant));
}

}  // namespace
}  // namespace tinyairnet
