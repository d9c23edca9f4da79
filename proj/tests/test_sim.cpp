#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "herit_ridge/experiments.hpp"
#include "herit_ridge/report.hpp"
#include "herit_ridge/sim.hpp"

using namespace heritridge;

TEST(SimulateGenotypes, SupportAndDeterminism) {
  const RawGenotypeMatrix a = simulate_genotypes(30, 20, 5);
  const RawGenotypeMatrix b = simulate_genotypes(30, 20, 5);
  EXPECT_TRUE((a.values.array() == b.values.array()).all());
  for (Index i = 0; i < 30; ++i)
    for (Index j = 0; j < 20; ++j) {
      ASSERT_GE(a.values(i, j), 0);
      ASSERT_LE(a.values(i, j), 2);
    }
  ASSERT_TRUE(a.true_freqs.has_value());
  for (Index j = 0; j < 20; ++j) {
    EXPECT_GE((*a.true_freqs)(j), 0.05);
    EXPECT_LE((*a.true_freqs)(j), 0.5);
  }
  const RawGenotypeMatrix c = simulate_genotypes(30, 20, 6);
  EXPECT_FALSE((a.values.array() == c.values.array()).all());
}

TEST(SimulateGenotypes, EmpiricalFrequenciesTrackTruth) {
  const Index n = 10000, p = 5;
  const RawGenotypeMatrix m = simulate_genotypes(n, p, 99);
  for (Index j = 0; j < p; ++j) {
    const double emp = m.values.col(j).cast<double>().sum() / (2.0 * n);
    EXPECT_NEAR(emp, (*m.true_freqs)(j), 0.02) << "variant " << j;
  }
}

TEST(SimulatePhenotype, CausalCountAndSupport) {
  const RawGenotypeMatrix m = simulate_genotypes(50, 1000, 7);
  const StandardizedMatrix z = standardize_true_frequencies(m);
  const PhenotypeSim sim = simulate_phenotype(z, 0.5, 0.1, 8);
  EXPECT_EQ(sim.causal_indices.size(), 100u);  // floor(1000 * 0.1)
  Index nonzero = 0;
  for (Index j = 0; j < 1000; ++j)
    if (sim.u_true(j) != 0.0) ++nonzero;
  EXPECT_EQ(nonzero, 100);
  const std::set<Index> causal(sim.causal_indices.begin(), sim.causal_indices.end());
  for (Index j = 0; j < 1000; ++j)
    if (sim.u_true(j) != 0.0) EXPECT_TRUE(causal.count(j));
}

TEST(SimulatePhenotype, UnitVarianceByConstruction) {
  const RawGenotypeMatrix m = simulate_genotypes(10000, 500, 9);
  const StandardizedMatrix z = standardize_true_frequencies(m);
  double var_sum = 0.0;
  const int reps = 5;
  for (int r = 0; r < reps; ++r) {
    const PhenotypeSim sim = simulate_phenotype(z, 0.6, 1.0, 10 + r);
    const double mean = sim.y.mean();
    var_sum += (sim.y.array() - mean).square().sum() / sim.y.size();
  }
  EXPECT_NEAR(var_sum / reps, 1.0, 0.05);
}

TEST(SimulatePhenotype, NullHeritabilityGivesPureNoise) {
  const RawGenotypeMatrix m = simulate_genotypes(20, 30, 11);
  const StandardizedMatrix z = standardize_true_frequencies(m);
  const PhenotypeSim sim = simulate_phenotype(z, 0.0, 1.0, 12);
  EXPECT_TRUE((sim.u_true.array() == 0.0).all());
  EXPECT_EQ((sim.y - sim.e).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SimulatePhenotype, NoCausalVariantsRejected) {
  const RawGenotypeMatrix m = simulate_genotypes(10, 5, 13);
  const StandardizedMatrix z = standardize_true_frequencies(m);
  EXPECT_THROW(simulate_phenotype(z, 0.5, 0.1, 14), NoCausalVariants);  // floor(0.5) = 0
}

TEST(SimulateGenotypesDuplicated, PairsColumns) {
  const RawGenotypeMatrix m = simulate_genotypes_duplicated(15, 12, 21);
  for (Index j = 0; j < 6; ++j) {
    EXPECT_TRUE((m.values.col(j).array() == m.values.col(j + 6).array()).all());
    EXPECT_EQ((*m.true_freqs)(j), (*m.true_freqs)(j + 6));
  }
  EXPECT_THROW(simulate_genotypes_duplicated(15, 11, 21), OutOfRange);
}

TEST(PredictionExperiment, EffectRescalingPreservesVariance) {
  // var of the truncated-rescaled effect vector is h2/p per component
  Rng rng(31);
  const Index p_max = 4000;
  const double h2 = 0.6;
  Eigen::VectorXd u(p_max);
  const double sd = std::sqrt(h2 / static_cast<double>(p_max));
  for (Index j = 0; j < p_max; ++j) u(j) = rng.normal(0.0, sd);
  for (const Index p : {4000, 1000, 250}) {
    const Eigen::VectorXd u_p =
        u.head(p) * std::sqrt(static_cast<double>(p_max) / static_cast<double>(p));
    EXPECT_NEAR(u_p.squaredNorm(), h2, 0.15 * h2) << "p=" << p;
  }
}

TEST(PredictionExperiment, PListFromLogRange) {
  const auto ps = p_list_from_log_range(500, -3.0, 3.0, 8);
  ASSERT_EQ(ps.size(), 8u);
  EXPECT_EQ(ps.front(), 10043);
  EXPECT_EQ(ps.back(), 25);
  for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_LT(ps[i], ps[i - 1]);
}

TEST(PredictionExperiment, MiniCampaignDecomposes) {
  PredictionExperimentConfig config;
  config.n_train = 60;
  config.n_test = 150;
  config.training_sets = 25;
  config.h2 = 0.6;
  config.p_list = {240, 120};
  config.seed = 33;
  const PredictionExperimentReport report = run_prediction_experiment(config);
  ASSERT_EQ(report.points.size(), 2u);
  for (const auto& point : report.points) {
    EXPECT_GT(point.err, 0.0);
    EXPECT_GE(point.bias2, 0.0);
    EXPECT_GE(point.var, 0.0);
    EXPECT_GE(point.corr2, 0.0);
    // bias-variance decomposition with the irreducible term, loose MC tolerance
    EXPECT_NEAR(point.err, point.bias2 + point.var + (1.0 - config.h2), 0.15);
    EXPECT_GT(point.sd_over_test_individuals, point.sd_over_training_sets);
  }
}

TEST(Experiments, HeritabilityRowsAreDeterministic) {
  HeritabilityExperimentConfig config;
  config.np_cells = {{60, 240}};
  config.h2_values = {0.4};
  config.fc_values = {1.0};
  config.methods = {H2Method::GcvProjection, H2Method::Reml};
  config.replicates = 3;
  config.seed = 5150;
  config.std_set_size = 50;
  const auto a = run_heritability_experiment(config);
  const auto b = run_heritability_experiment(config);
  EXPECT_EQ(heritability_rows_csv("s", a), heritability_rows_csv("s", b));
  ASSERT_EQ(a.size(), 6u);
}

TEST(Experiments, PredictionReportIsDeterministic) {
  PredictionExperimentConfig config;
  config.n_train = 40;
  config.n_test = 60;
  config.training_sets = 5;
  config.h2 = 0.5;
  config.p_list = {80, 20};
  config.seed = 11;
  const auto a = run_prediction_experiment(config);
  const auto b = run_prediction_experiment(config);
  EXPECT_EQ(prediction_points_csv(a), prediction_points_csv(b));
}

TEST(Experiments, EffectiveRatioCampaignRuns) {
  EffectiveRatioCampaignConfig config;
  config.n_train = 50;
  config.n_test = 100;
  config.training_sets = 8;
  config.p_list = {400, 200};
  config.replicates = 2;
  config.seed = 7;
  const auto indep = run_effective_ratio_campaign(config);
  EXPECT_EQ(indep.per_replicate_slopes.size(), 2u);
  EXPECT_EQ(indep.observations.size(), 4u);
  EXPECT_GT(indep.pooled.ratio_p_over_pe, 0.0);
  config.duplicate_columns = true;
  const auto dup = run_effective_ratio_campaign(config);
  EXPECT_GT(dup.pooled.ratio_p_over_pe, indep.pooled.ratio_p_over_pe);
}
