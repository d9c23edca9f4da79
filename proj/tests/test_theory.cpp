#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "herit_ridge/theory.hpp"

using namespace heritridge;

TEST(TestMse, KnownValues) {
  EXPECT_NEAR(theory::test_mse(1000, 1000, 0.6), 0.64, 1e-12);
  // n >> p: irreducible error
  EXPECT_NEAR(theory::test_mse(1e9, 10, 0.6), 0.4, 1e-6);
  // p >> n: no prediction whatever the heritability
  EXPECT_NEAR(theory::test_mse(10, 1e9, 0.9), 1.0, 1e-6);
}

TEST(TrainMse, KnownValues) {
  EXPECT_NEAR(theory::train_mse(100, 1000, 0.6), 0.16, 1e-12);  // (1-h2)^2
  EXPECT_NEAR(theory::train_mse(1000, 1000, 0.6), 0.16, 1e-12);
  EXPECT_NEAR(theory::train_mse(1e9, 10, 0.6), 0.4, 1e-6);
}

TEST(Corr2, KnownValues) {
  EXPECT_NEAR(theory::corr2(500, 1000, 0.6), 0.18, 1e-12);  // (n/p) h2^2
  EXPECT_NEAR(theory::corr2(1e9, 10, 0.6), 0.6, 1e-6);
  const double h4 = 0.6 * 0.6;
  EXPECT_NEAR(theory::corr2(1000, 1000, 0.6), h4, 1e-12);
}

TEST(Branches, ContinuousAtEqualDimensions) {
  // both branch expressions evaluated at r = 1 directly
  for (int k = 1; k <= 99; ++k) {
    const double h2 = k / 100.0;
    const double high = 1.0 - h2 * h2;
    const double low = (1.0 - h2) * (1.0 + h2) / (1.0 + h2 * (1.0 - 1.0));
    EXPECT_LT(std::abs(high - low), 1e-12) << "h2=" << h2;

    const double corr_high = h2 * h2;
    const double corr_low = h2 * h2 / ((1.0) * (1.0 - h2) + h2);
    EXPECT_LT(std::abs(corr_high - corr_low), 1e-12);

    // training branch: lambda = n (1-h2)/h2 at p = n gives a = h2, c = 1
    const double lambda_ratio = (1.0 - h2) / h2;
    const double a = 1.0 / (1.0 + lambda_ratio);
    const double train_low = 1.0 - 2.0 * a + a * a;
    const double train_high = (1.0 - h2) * (1.0 - h2);
    EXPECT_LT(std::abs(train_low - train_high), 1e-12);

    // the library functions agree across the boundary
    const double n = 5000.0;
    EXPECT_LT(std::abs(theory::test_mse(n, n, h2) - theory::test_mse(n, n + 1, h2)), 1e-3);
    EXPECT_LT(std::abs(theory::corr2(n, n, h2) - theory::corr2(n + 1, n, h2)), 1e-3);
  }
}

// appendix identity: irreducible + variance + bias telescopes to Eq-(8)'s
// high-dimensional branch exactly
TEST(Decomposition, SumsToTestMse) {
  for (int k = 1; k <= 99; k += 7) {
    const double h2 = k / 100.0;
    for (const double r : {0.05, 0.2, 0.5, 0.8, 1.0}) {
      const double n = 1000.0 * r, p = 1000.0;
      const double total = theory::irreducible_term(h2) + theory::variance_term(n, p, h2) +
                           theory::bias_term(n, p, h2);
      EXPECT_LT(std::abs(total - theory::test_mse(n, p, h2)), 1e-12)
          << "h2=" << h2 << " r=" << r;
    }
  }
}

TEST(Bounds, TestMseAndCorr2) {
  for (int k = 1; k <= 99; k += 3) {
    const double h2 = k / 100.0;
    for (double log_r = -6.0; log_r <= 6.0; log_r += 0.25) {
      const double r = std::exp(log_r);
      const double n = r >= 1.0 ? 1e5 * r : 1e5;
      const double p = r >= 1.0 ? 1e5 : 1e5 / r;
      const double mse = theory::test_mse(n, p, h2);
      const double c2 = theory::corr2(n, p, h2);
      EXPECT_GE(mse, 1.0 - h2 - 1e-12);
      EXPECT_LE(mse, 1.0 + 1e-12);
      EXPECT_GE(c2, -1e-12);
      EXPECT_LE(c2, h2 + 1e-12);
    }
  }
}

TEST(Monotonicity, InTheRatio) {
  const double h2 = 0.5;
  double prev_mse = 2.0, prev_c2 = -1.0;
  for (double log_r = -5.0; log_r <= 5.0; log_r += 0.1) {
    const double r = std::exp(log_r);
    const double n = r >= 1.0 ? 1e6 * r : 1e6;
    const double p = r >= 1.0 ? 1e6 : 1e6 / r;
    const double mse = theory::test_mse(n, p, h2);
    const double c2 = theory::corr2(n, p, h2);
    EXPECT_LE(mse, prev_mse + 1e-12);
    EXPECT_GE(c2, prev_c2 - 1e-12);
    prev_mse = mse;
    prev_c2 = c2;
  }
}

TEST(TheoryPoint, RegimeTag) {
  EXPECT_EQ(theory::point(100, 200, 0.5).regime, theory::Regime::HighDim);
  EXPECT_EQ(theory::point(100, 100, 0.5).regime, theory::Regime::HighDim);
  EXPECT_EQ(theory::point(200, 100, 0.5).regime, theory::Regime::LowDim);
  EXPECT_THROW(theory::test_mse(100, 100, 0.0), OutOfRange);
  EXPECT_THROW(theory::corr2(100, 100, 1.0), OutOfRange);
}

TEST(EffectiveRatio, ExactInversionRecoversSlope) {
  const double h2 = 0.6;
  const double h4 = h2 * h2;
  std::vector<EffectiveRatioObservation> obs;
  // mse generated with p_e = p/2 exactly: slope must come out at 2
  for (const double p : {1000.0, 2000.0, 4000.0}) {
    const double n = 100.0;
    obs.push_back({n, p, 1.0 - (n / (p / 2.0)) * h4});
  }
  const EffectiveRatioFit fit = fit_effective_ratio(obs, h2);
  EXPECT_NEAR(fit.ratio_p_over_pe, 2.0, 1e-12);
  EXPECT_NEAR(fit.r2_of_fit, 1.0, 1e-12);
  EXPECT_EQ(fit.dropped, 0);
  EXPECT_EQ(fit.clipped, 0);
  ASSERT_EQ(fit.per_n_estimates.size(), 3u);
}

TEST(EffectiveRatio, DropsAndClips) {
  const double h2 = 0.6;
  std::vector<EffectiveRatioObservation> obs = {
      {100.0, 1000.0, 1.02},   // dropped: inversion undefined
      {100.0, 2000.0, 0.2},    // clipped to the irreducible error
      {100.0, 4000.0, 0.99},   // kept as-is
  };
  const EffectiveRatioFit fit = fit_effective_ratio(obs, h2);
  EXPECT_EQ(fit.dropped, 1);
  EXPECT_EQ(fit.clipped, 1);
  ASSERT_EQ(fit.per_n_estimates.size(), 2u);
  // clipped observation maps to n/p_e = h2/h4 = 1/h2
  EXPECT_NEAR(fit.per_n_estimates[0].second, 1.0 / h2, 1e-12);

  std::vector<EffectiveRatioObservation> all_bad = {{100.0, 1000.0, 1.5}};
  EXPECT_THROW(fit_effective_ratio(all_bad, h2), InvalidInversion);
  std::vector<EffectiveRatioObservation> low_dim = {{1000.0, 100.0, 0.5}};
  EXPECT_THROW(fit_effective_ratio(low_dim, h2), OutOfRange);
}
