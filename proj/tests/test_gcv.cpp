#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "herit_ridge/gcv.hpp"
#include "herit_ridge/ridge.hpp"
#include "herit_ridge/rng.hpp"
#include "herit_ridge/sim.hpp"

using namespace heritridge;

TEST(GcvError, InfiniteLambdaLimitIsMeanSquare) {
  Rng rng(1);
  const Index m = 25;
  Eigen::VectorXd eigvals(m), b(m);
  for (Index k = 0; k < m; ++k) {
    eigvals(k) = 50.0 * rng.uniform();
    b(k) = rng.normal();
  }
  std::sort(eigvals.data(), eigvals.data() + m, std::greater<double>());
  const double err = gcv_error_from_rotated(eigvals, b, 1e15);
  EXPECT_NEAR(err, b.squaredNorm() / m, 1e-9 * b.squaredNorm() / m);
}

TEST(GcvCurve, LambdaGridIsExactMap) {
  Rng rng(2);
  Eigen::VectorXd eigvals(10), b(10);
  for (Index k = 0; k < 10; ++k) {
    eigvals(k) = 10.0 - k;
    b(k) = rng.normal();
  }
  const auto grid = default_h2_grid();
  const GcvCurve curve = gcv_curve_from_rotated(eigvals, b, grid, 123);
  ASSERT_EQ(curve.lambda_grid.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_EQ(curve.lambda_grid[i], lambda_from_h2(grid[i], 123));
  for (const double e : curve.errors) {
    EXPECT_TRUE(std::isfinite(e));
    EXPECT_GE(e, 0.0);
  }
}

TEST(GcvCurve, TiesGoToSmallestH2) {
  GcvCurve curve;
  curve.h2_grid = {0.1, 0.2, 0.3, 0.4};
  curve.lambda_grid = {9, 4, 7.0 / 3.0, 1.5};
  curve.errors = {1.0, 0.5, 0.5, 0.9};
  finalize_curve(curve);
  EXPECT_EQ(curve.argmin_index, 1u);
  EXPECT_DOUBLE_EQ(curve.argmin_h2, 0.2);
  EXPECT_FALSE(curve.boundary_warning);
  curve.errors = {0.4, 0.5, 0.6, 0.7};
  finalize_curve(curve);
  EXPECT_TRUE(curve.boundary_warning);
}

TEST(GcvCurve, GridValidation) {
  Eigen::VectorXd eigvals = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(gcv_curve_from_rotated(eigvals, b, {0.2, 0.1}, 10), OutOfRange);
  EXPECT_THROW(gcv_curve_from_rotated(eigvals, b, {0.0, 0.5}, 10), OutOfRange);
  EXPECT_THROW(gcv_curve_from_rotated(eigvals, b, {}, 10), OutOfRange);
  Eigen::VectorXd short_b = Eigen::VectorXd::Ones(2);
  EXPECT_THROW(gcv_error_from_rotated(eigvals, short_b, 1.0), DimensionMismatch);
}

// the paper's high-dimensional failure: empirically centered data plus
// centered phenotype drive the GCV error to 0 as lambda -> 0, while the
// contrasted error stays bounded away from it
TEST(GcvDegeneracy, NaiveCollapsesContrastedDoesNot) {
  const Index n = 60, p = 240;
  const RawGenotypeMatrix m = simulate_genotypes(n, p, 41);
  const StandardizedMatrix z = standardize_empirical(m);
  const SpectralCache cache = gram_spectrum(z);
  ASSERT_TRUE(has_constant_null_eigenvector(cache));

  const StandardizedMatrix z_star = standardize_true_frequencies(m);
  const PhenotypeSim sim = simulate_phenotype(z_star, 0.25, 1.0, 42);
  const Eigen::VectorXd y_centered = sim.y.array() - sim.y.mean();
  const Eigen::VectorXd b = cache.rotate(y_centered);

  const double lambda_small = 1e-6;
  const double naive = gcv_error_from_rotated(cache.eigvals, b, lambda_small);
  const double contrasted =
      gcv_error_from_rotated(cache.eigvals.head(n - 1), b.head(n - 1), lambda_small);
  EXPECT_LT(naive, 1e-10);
  EXPECT_GT(contrasted, 1e-3);
}

// GCV replaces per-sample leverages by their mean, so it tracks exact LOO
// whenever no eigenvalue dominates the spectrum
TEST(GcvLooConsistency, WithinFifteenPercent) {
  Rng seeder(77);
  int checked = 0;
  for (int inst = 0; inst < 8; ++inst) {
    const Index n = 50 + static_cast<Index>(seeder.bounded(150));  // <= 200
    const Index p = 100 + static_cast<Index>(seeder.bounded(300));  // <= 400
    const RawGenotypeMatrix m = simulate_genotypes(n, p, 500 + inst);
    const StandardizedMatrix z = standardize_true_frequencies(m);
    const PhenotypeSim sim = simulate_phenotype(z, 0.4, 1.0, 900 + inst);
    const SpectralCache cache = gram_spectrum(z);
    if (cache.eigvals(0) > 0.5 * cache.trace) continue;  // dominated spectrum
    const Eigen::VectorXd b = cache.rotate(sim.y);
    for (const double h2 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double lambda = lambda_from_h2(h2, p);
      const double gcv = gcv_error_from_rotated(cache.eigvals, b, lambda);
      const double loo = loo_error_exact(z, sim.y, lambda);
      EXPECT_LT(std::abs(gcv - loo) / loo, 0.15) << "n=" << n << " p=" << p << " h2=" << h2;
      ++checked;
    }
  }
  EXPECT_GE(checked, 20);
}

// (1/m) tr(H) equals (1/m) sum d2/(d2+lambda); checked against the dense hat
TEST(HatTrace, MatchesSpectralSum) {
  const Index n = 40, p = 90;
  const RawGenotypeMatrix m = simulate_genotypes(n, p, 55);
  const StandardizedMatrix z = standardize_true_frequencies(m);
  const SpectralCache cache = gram_spectrum(z);
  for (const double h2 : {0.2, 0.5, 0.8}) {
    const double lambda = lambda_from_h2(h2, p);
    const Eigen::MatrixXd h = hat_matrix(z, lambda);
    double spectral = 0.0;
    for (Index k = 0; k < cache.m; ++k)
      spectral += cache.eigvals(k) / (cache.eigvals(k) + lambda);
    EXPECT_NEAR(h.trace() / n, spectral / n, 1e-8);
  }
}
