#ifndef HERIT_RIDGE_EXPERIMENTS_HPP
#define HERIT_RIDGE_EXPERIMENTS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/estimate.hpp"
#include "herit_ridge/kfold.hpp"
#include "herit_ridge/predict.hpp"
#include "herit_ridge/ridge.hpp"
#include "herit_ridge/sim.hpp"
#include "herit_ridge/theory.hpp"

namespace heritridge {

// ---------------------------------------------------------------------------
// Heritability-estimation campaign (the Fig. 4 style grid)
// ---------------------------------------------------------------------------

struct HeritabilityExperimentConfig {
  std::vector<std::pair<Index, Index>> np_cells;  // (n, p)
  std::vector<double> h2_values;
  std::vector<double> fc_values;
  std::vector<H2Method> methods;
  int replicates = 20;
  std::uint64_t seed = 1;
  Index std_set_size = 1000;
  std::vector<double> h2_grid = default_h2_grid();
  int cv_k = 10;
};

struct HeritabilityRow {
  Index n = 0;
  Index p = 0;
  double f_c = 0.0;
  double h2_sim = 0.0;
  H2Method method = H2Method::GcvProjection;
  int replicate = 0;
  double h2_est = 0.0;
  double bias = 0.0;
};

// One large genotype matrix is simulated per campaign and smaller cells are
// carved from its leading rows/columns; the Gram eigendecompositions are then
// computed once per (n, p) and shared by every phenotype replicate.
inline std::vector<HeritabilityRow> run_heritability_experiment(
    const HeritabilityExperimentConfig& config) {
  if (config.np_cells.empty() || config.h2_values.empty() || config.fc_values.empty() ||
      config.methods.empty() || config.replicates < 1)
    throw OutOfRange("heritability experiment config is incomplete");
  validate_h2_grid(config.h2_grid);

  Index n_max = 0, p_max = 0;
  for (const auto& [n, p] : config.np_cells) {
    n_max = std::max(n_max, n);
    p_max = std::max(p_max, p);
  }
  const bool wants_twoset =
      std::find(config.methods.begin(), config.methods.end(), H2Method::GcvTwoset) !=
      config.methods.end();
  const Index n_std = wants_twoset ? config.std_set_size : 0;
  if (wants_twoset && n_std < 30)
    throw StandardizationSetTooSmall("standardization set has fewer than 30 samples");

  const RawGenotypeMatrix big =
      simulate_genotypes(n_max + n_std, p_max, derive_seed(config.seed, 0xA11));

  std::vector<HeritabilityRow> rows;
  std::vector<std::pair<Index, Index>> distinct;
  for (const auto& cell : config.np_cells)
    if (std::find(distinct.begin(), distinct.end(), cell) == distinct.end())
      distinct.push_back(cell);

  std::uint64_t cell_counter = 0;
  for (const auto& [n, p] : distinct) {
    const RawGenotypeMatrix train_raw = carve(big, 0, n, p);
    const StandardizedMatrix z_star_train = standardize_true_frequencies(train_raw);

    const bool wants_self =
        std::any_of(config.methods.begin(), config.methods.end(), [](H2Method m) {
          return m == H2Method::GcvProjection || m == H2Method::Reml || m == H2Method::GcvNaive;
        });
    SpectralCache cache_self;
    if (wants_self) cache_self = gram_spectrum(standardize_empirical(train_raw));

    // two-set machinery: training matrix standardized with the external params
    SpectralCache cache_two;
    Index kept_count = 0, dropped_count = 0;
    StandardizedMatrix z_star_std;
    if (wants_twoset) {
      const RawGenotypeMatrix std_raw = carve(big, n_max, n_std, p);
      z_star_std = standardize_true_frequencies(std_raw);
      const ExternalStandardization ext = external_params_drop_monomorphic(std_raw);
      kept_count = static_cast<Index>(ext.kept.size());
      dropped_count = ext.dropped;
      const RawGenotypeMatrix train_kept = select_columns(train_raw, ext.kept);
      cache_two = gram_spectrum(apply_standardization(train_kept, ext.params));
    }

    std::optional<KfoldPlan> cv_plan;
    if (std::find(config.methods.begin(), config.methods.end(), H2Method::Cv10) !=
        config.methods.end())
      cv_plan.emplace(train_raw, config.cv_k, derive_seed(config.seed, 0xCF, cell_counter));

    // phenotype rows stack the training block on top of the standardization set
    StandardizedMatrix stacked;
    if (wants_twoset) {
      stacked.z.resize(n + n_std, p);
      stacked.z.topRows(n) = z_star_train.z;
      stacked.z.bottomRows(n_std) = z_star_std.z;
    } else {
      stacked.z = z_star_train.z;
    }

    for (const double h2 : config.h2_values) {
      for (const double fc : config.fc_values) {
        ++cell_counter;
        for (int r = 0; r < config.replicates; ++r) {
          const std::uint64_t pheno_seed = derive_seed(config.seed, cell_counter, static_cast<std::uint64_t>(r));
          const PhenotypeSim sim = simulate_phenotype(stacked, h2, fc, pheno_seed);
          const Eigen::VectorXd y_tr = sim.y.head(n);

          for (const H2Method method : config.methods) {
            H2Estimate est;
            switch (method) {
              case H2Method::GcvProjection:
                est = gcv_projection_from_cache(cache_self, y_tr, p, config.h2_grid);
                break;
              case H2Method::Reml:
                est = reml_from_cache(cache_self, y_tr, p, config.h2_grid);
                break;
              case H2Method::GcvNaive:
                est = gcv_naive_from_cache(cache_self, y_tr, p, config.h2_grid);
                break;
              case H2Method::GcvTwoset: {
                const Eigen::VectorXd y_std = sim.y.tail(n_std);
                const Eigen::VectorXd beta = ols_fixed_effects(y_std);
                est = gcv_twoset_from_cache(cache_two, y_tr, beta, nullptr, kept_count,
                                            dropped_count, config.h2_grid);
                break;
              }
              case H2Method::Cv10: {
                GcvCurve curve = cv_plan->curve(y_tr, config.h2_grid, p);
                est = detail::estimate_from_curve(std::move(curve), H2Method::Cv10, n, p);
                break;
              }
            }
            est.curve.reset();  // the tidy table keeps only the point estimate
            HeritabilityRow row;
            row.n = n;
            row.p = p;
            row.f_c = fc;
            row.h2_sim = h2;
            row.method = method;
            row.replicate = r;
            row.h2_est = est.h2;
            row.bias = est.h2 - h2;
            rows.push_back(row);
          }
        }
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Prediction-accuracy campaign (the Fig. 5 / Fig. 6 style sweep)
// ---------------------------------------------------------------------------

struct PredictionExperimentConfig {
  Index n_train = 500;
  Index n_test = 1000;
  int training_sets = 60;  // K
  double h2 = 0.6;
  std::vector<Index> p_list;  // descending from p_max
  std::uint64_t seed = 1;
  bool duplicate_columns = false;
};

// p grid covering log(n/p) in [lo, hi] with `count` evenly spaced points,
// returned descending from the largest p.
inline std::vector<Index> p_list_from_log_range(Index n, double lo, double hi, int count) {
  if (count < 2 || !(hi > lo)) throw OutOfRange("log range needs count >= 2 and hi > lo");
  std::vector<Index> ps;
  for (int i = 0; i < count; ++i) {
    const double log_np = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    const auto p = static_cast<Index>(std::llround(static_cast<double>(n) * std::exp(-log_np)));
    ps.push_back(std::max<Index>(p, 1));
  }
  std::sort(ps.begin(), ps.end(), std::greater<Index>());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

struct PredictionPointResult {
  Index p = 0;
  double n_over_p = 0.0;
  double err = 0.0;     // mean over training sets of the test MSE
  double bias2 = 0.0;   // against the mean-over-training-sets prediction
  double var = 0.0;
  double corr2 = 0.0;   // mean squared correlation
  double normalized_err = 0.0;  // err / mean(y_te^2)
  double theory_test_mse = 0.0;
  double theory_corr2 = 0.0;
  double sd_over_training_sets = 0.0;
  double sd_over_test_individuals = 0.0;
  bool degenerate_corr = false;
};

struct PredictionExperimentReport {
  PredictionExperimentConfig config;
  std::vector<PredictionPointResult> points;
};

namespace detail {

inline RawGenotypeMatrix simulate_campaign_genotypes(Index n, const Eigen::VectorXd& freqs,
                                                     bool duplicated, Rng& rng) {
  const Index p = freqs.size();
  RawGenotypeMatrix out;
  out.values.resize(n, p);
  const Index base = duplicated ? p / 2 : p;
  for (Index j = 0; j < base; ++j) {
    const double f = freqs(j);
    for (Index i = 0; i < n; ++i) out.values(i, j) = static_cast<std::int8_t>(rng.binomial2(f));
  }
  if (duplicated) out.values.rightCols(p - base) = out.values.leftCols(p - base);
  out.true_freqs = freqs;
  return out;
}

}  // namespace detail

// One global frequency vector and one global effect vector are drawn at p_max;
// each p reuses their leading entries, effects rescaled by sqrt(p_max/p) so the
// total genetic variance stays h2. Per p: one fixed test set, K fresh training
// sets, ridge at lambda = p (1-h2)/h2.
inline PredictionExperimentReport run_prediction_experiment(
    const PredictionExperimentConfig& config) {
  if (config.p_list.empty()) throw OutOfRange("prediction experiment needs a p list");
  if (!(config.h2 > 0.0 && config.h2 < 1.0)) throw OutOfRange("h2 must lie in (0,1)");
  if (config.training_sets < 2) throw OutOfRange("need at least 2 training sets");
  for (std::size_t i = 1; i < config.p_list.size(); ++i)
    if (config.p_list[i] >= config.p_list[i - 1])
      throw OutOfRange("p list must be strictly descending");
  if (config.duplicate_columns)
    for (const Index p : config.p_list)
      if (p % 2 != 0) throw OutOfRange("duplicated-column campaign needs even p values");

  const Index p_max = config.p_list.front();
  const double h2 = config.h2;
  const double sd_e = std::sqrt(1.0 - h2);

  Rng global_rng(derive_seed(config.seed, 0x9E0));
  Eigen::VectorXd f_global(p_max);
  if (config.duplicate_columns) {
    for (Index j = 0; j < p_max / 2; ++j) f_global(j) = global_rng.uniform(0.05, 0.5);
    f_global.tail(p_max - p_max / 2) = f_global.head(p_max / 2);
  } else {
    for (Index j = 0; j < p_max; ++j) f_global(j) = global_rng.uniform(0.05, 0.5);
  }
  Eigen::VectorXd u_global(p_max);
  const double sd_u = std::sqrt(h2 / static_cast<double>(p_max));
  for (Index j = 0; j < p_max; ++j) u_global(j) = global_rng.normal(0.0, sd_u);

  PredictionExperimentReport report;
  report.config = config;

  for (std::size_t ip = 0; ip < config.p_list.size(); ++ip) {
    const Index p = config.p_list[ip];
    const double lambda = lambda_from_h2(h2, p);
    Eigen::VectorXd freqs(p);
    if (config.duplicate_columns) {
      freqs.head(p / 2) = f_global.head(p / 2);
      freqs.tail(p - p / 2) = f_global.head(p / 2);
    } else {
      freqs = f_global.head(p);
    }
    const Eigen::VectorXd u_p =
        u_global.head(p) * std::sqrt(static_cast<double>(p_max) / static_cast<double>(p));
    const StandardizationParams params = params_from_frequencies(freqs);

    // fixed test set for this p
    Rng te_rng(derive_seed(config.seed, 0x7E5, ip));
    const RawGenotypeMatrix m_te =
        detail::simulate_campaign_genotypes(config.n_test, freqs, config.duplicate_columns, te_rng);
    const StandardizedMatrix z_te = apply_standardization(m_te, params);
    const Eigen::VectorXd g_true = z_te.z * u_p;
    Eigen::VectorXd y_te(config.n_test);
    for (Index i = 0; i < config.n_test; ++i) y_te(i) = g_true(i) + te_rng.normal(0.0, sd_e);

    const int K = config.training_sets;
    Eigen::MatrixXd preds(config.n_test, K);
    for (int k = 0; k < K; ++k) {
      Rng tr_rng(derive_seed(config.seed, 0x74A, ip, static_cast<std::uint64_t>(k)));
      const RawGenotypeMatrix m_tr = detail::simulate_campaign_genotypes(
          config.n_train, freqs, config.duplicate_columns, tr_rng);
      const StandardizedMatrix z_tr = apply_standardization(m_tr, params);
      Eigen::VectorXd y_tr(config.n_train);
      const Eigen::VectorXd g_tr = z_tr.z * u_p;
      for (Index i = 0; i < config.n_train; ++i) y_tr(i) = g_tr(i) + tr_rng.normal(0.0, sd_e);
      const RidgeSolution sol = ridge_fit(z_tr, y_tr, lambda);
      preds.col(k) = z_te.z * sol.u_hat;
    }

    PredictionPointResult res;
    res.p = p;
    res.n_over_p = static_cast<double>(config.n_train) / static_cast<double>(p);
    const Eigen::VectorXd g_hat = preds.rowwise().mean();

    Eigen::VectorXd mse_k(K);
    double corr2_sum = 0.0;
    bool degenerate = false;
    const double y_mean = y_te.mean();
    const double y_var = (y_te.array() - y_mean).square().sum();
    for (int k = 0; k < K; ++k) {
      const Eigen::VectorXd diff = y_te - preds.col(k);
      mse_k(k) = diff.squaredNorm() / static_cast<double>(config.n_test);
      const double p_mean = preds.col(k).mean();
      const double p_var = (preds.col(k).array() - p_mean).square().sum();
      if (p_var <= 0.0 || y_var <= 0.0) {
        degenerate = true;
        continue;
      }
      const double cov = ((preds.col(k).array() - p_mean) * (y_te.array() - y_mean)).sum();
      corr2_sum += (cov * cov) / (p_var * y_var);
    }
    res.err = mse_k.mean();
    res.bias2 = (g_true - g_hat).squaredNorm() / static_cast<double>(config.n_test);
    res.var = (preds.colwise() - g_hat).squaredNorm() /
              static_cast<double>(config.n_test) / static_cast<double>(K);
    res.corr2 = corr2_sum / static_cast<double>(K);
    res.degenerate_corr = degenerate;
    const double y_meansq = y_te.squaredNorm() / static_cast<double>(config.n_test);
    res.normalized_err = y_meansq > 0.0 ? res.err / y_meansq : 0.0;
    res.theory_test_mse = theory::test_mse(static_cast<double>(config.n_train),
                                           static_cast<double>(p), h2);
    res.theory_corr2 = theory::corr2(static_cast<double>(config.n_train),
                                     static_cast<double>(p), h2);
    // spread across training sets (per-set mean test error)
    res.sd_over_training_sets =
        std::sqrt((mse_k.array() - res.err).square().sum() / static_cast<double>(K - 1));
    // spread across test individuals (per-individual error averaged over sets)
    Eigen::VectorXd per_indiv(config.n_test);
    for (Index i = 0; i < config.n_test; ++i) {
      double acc = 0.0;
      for (int k = 0; k < K; ++k) {
        const double e = y_te(i) - preds(i, k);
        acc += e * e;
      }
      per_indiv(i) = acc / static_cast<double>(K);
    }
    const double pim = per_indiv.mean();
    res.sd_over_test_individuals = std::sqrt((per_indiv.array() - pim).square().sum() /
                                             static_cast<double>(config.n_test - 1));
    report.points.push_back(res);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Effective-number-of-SNPs campaign (criterion-style wrapper)
// ---------------------------------------------------------------------------

struct EffectiveRatioCampaignConfig {
  Index n_train = 100;
  Index n_test = 500;
  int training_sets = 20;
  double h2 = 0.6;
  std::vector<Index> p_list = {6400, 3200, 1600};
  int replicates = 10;
  std::uint64_t seed = 1;
  bool duplicate_columns = false;
};

struct EffectiveRatioCampaignResult {
  EffectiveRatioFit pooled;
  std::vector<double> per_replicate_slopes;
  std::vector<EffectiveRatioObservation> observations;
};

inline EffectiveRatioCampaignResult run_effective_ratio_campaign(
    const EffectiveRatioCampaignConfig& config) {
  EffectiveRatioCampaignResult out;
  for (int rep = 0; rep < config.replicates; ++rep) {
    PredictionExperimentConfig pc;
    pc.n_train = config.n_train;
    pc.n_test = config.n_test;
    pc.training_sets = config.training_sets;
    pc.h2 = config.h2;
    pc.p_list = config.p_list;
    pc.seed = derive_seed(config.seed, 0xEFF, static_cast<std::uint64_t>(rep));
    pc.duplicate_columns = config.duplicate_columns;
    const PredictionExperimentReport report = run_prediction_experiment(pc);
    std::vector<EffectiveRatioObservation> rep_obs;
    for (const auto& point : report.points) {
      EffectiveRatioObservation o;
      o.n = static_cast<double>(config.n_train);
      o.p = static_cast<double>(point.p);
      o.normalized_test_mse = point.normalized_err;
      rep_obs.push_back(o);
      out.observations.push_back(o);
    }
    out.per_replicate_slopes.push_back(fit_effective_ratio(rep_obs, config.h2).ratio_p_over_pe);
  }
  out.pooled = fit_effective_ratio(out.observations, config.h2);
  return out;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_EXPERIMENTS_HPP
