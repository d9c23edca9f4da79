#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "herit_ridge/rng.hpp"

using namespace heritridge;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiverge) {
  Rng a(42), b(43);
  int same = 0;
  for (int i = 0; i < 100; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  EXPECT_EQ(same, 0);
}

TEST(Rng, UniformRange) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform(0.05, 0.5);
    ASSERT_GE(u, 0.05);
    ASSERT_LT(u, 0.5);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(Rng, Binomial2SupportAndMean) {
  Rng rng(5);
  const double f = 0.3;
  const int n = 100000;
  long total = 0;
  for (int i = 0; i < n; ++i) {
    const int v = rng.binomial2(f);
    ASSERT_GE(v, 0);
    ASSERT_LE(v, 2);
    total += v;
  }
  EXPECT_NEAR(static_cast<double>(total) / n, 2.0 * f, 0.01);
}

TEST(Rng, SampleWithoutReplacement) {
  Rng rng(3);
  const auto idx = rng.sample_without_replacement(10, 50);
  ASSERT_EQ(idx.size(), 10u);
  std::set<std::int64_t> seen(idx.begin(), idx.end());
  EXPECT_EQ(seen.size(), 10u);
  for (std::size_t i = 1; i < idx.size(); ++i) EXPECT_LT(idx[i - 1], idx[i]);
  for (const auto v : idx) {
    EXPECT_GE(v, 0);
    EXPECT_LT(v, 50);
  }
  EXPECT_EQ(rng.sample_without_replacement(5, 5).size(), 5u);
  EXPECT_THROW(rng.sample_without_replacement(6, 5), OutOfRange);
}

TEST(Rng, DeriveSeedSeparatesStreams) {
  const auto s1 = derive_seed(100, 0);
  const auto s2 = derive_seed(100, 1);
  EXPECT_NE(s1, s2);
  EXPECT_EQ(derive_seed(100, 0), s1);
  EXPECT_NE(derive_seed(100, 2, 3), derive_seed(100, 3, 2));
}

TEST(Rng, BoundedIsUniformEnough) {
  Rng rng(9);
  int counts[7] = {0};
  for (int i = 0; i < 70000; ++i) ++counts[rng.bounded(7)];
  for (const int c : counts) EXPECT_NEAR(c, 10000, 500);
}
