#ifndef HERIT_RIDGE_CLI_HPP
#define HERIT_RIDGE_CLI_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "herit_ridge/csv.hpp"
#include "herit_ridge/errors.hpp"
#include "herit_ridge/estimate.hpp"
#include "herit_ridge/experiments.hpp"
#include "herit_ridge/plink.hpp"
#include "herit_ridge/predict.hpp"
#include "herit_ridge/report.hpp"
#include "herit_ridge/sim.hpp"
#include "herit_ridge/svg.hpp"
#include "herit_ridge/theory.hpp"

namespace heritridge {
namespace cli_detail {

struct Timer {
  using clock = std::chrono::steady_clock;
  clock::time_point start = clock::now();
  std::map<std::string, double> phases;
  clock::time_point mark = clock::now();

  void phase(const std::string& name) {
    const auto now = clock::now();
    phases[name] = std::chrono::duration<double>(now - mark).count();
    mark = now;
  }
};

// Outputs are staged in memory and flushed together once the command has
// fully succeeded; a failing run leaves no partial files behind.
struct OutputStage {
  std::filesystem::path dir;
  std::vector<std::pair<std::string, std::string>> files;

  void add(const std::string& name, std::string content) {
    files.emplace_back(name, std::move(content));
  }

  void flush() const {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files) atomic_write(dir / name, content);
  }
};

// Wall-clock timings go to a sidecar file; report.json stays byte-identical
// across reruns of the same config.
inline void write_timing(const std::filesystem::path& dir, const Timer& timer) {
  json j;
  j["timing_seconds"] = timer.phases;
  j["total_seconds"] =
      std::chrono::duration<double>(Timer::clock::now() - timer.start).count();
  atomic_write(dir / "timing.json", j.dump(2) + "\n");
}

inline std::vector<double> parse_grid_spec(const std::string& spec) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    throw OutOfRange("--grid expects lo:hi:step, got '" + spec + "'");
  return h2_grid_range(lo, hi, step);
}

inline json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  json j;
  in >> j;
  return j;
}

template <typename T>
void override_from(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

struct GenoArgs {
  std::string geno_csv, bed, bim, fam;

  RawGenotypeMatrix load(const char* what) const {
    if (!geno_csv.empty()) return read_genotype_csv(geno_csv);
    if (!bed.empty() || !bim.empty() || !fam.empty()) {
      if (bed.empty() || bim.empty() || fam.empty())
        throw Error("PLINK input needs all of --bed, --bim and --fam");
      return read_plink_bed(bed, bim, fam);
    }
    throw Error(std::string("missing genotype input for ") + what +
                " (--geno or --bed/--bim/--fam)");
  }
};

inline Eigen::VectorXd load_phenotype(const std::string& path, const std::string& column,
                                      const RawGenotypeMatrix& geno) {
  const NumericTable table = read_numeric_table(path);
  Index col = 0;
  if (!column.empty()) {
    const auto it = std::find(table.column_names.begin(), table.column_names.end(), column);
    if (it == table.column_names.end())
      throw Error("phenotype column '" + column + "' not found in " + path);
    col = static_cast<Index>(it - table.column_names.begin());
  }
  const auto order = align_samples(geno.sample_ids, table.sample_ids);
  Eigen::VectorXd y(geno.n_samples());
  for (Index i = 0; i < y.size(); ++i) y(i) = table.values(order[static_cast<std::size_t>(i)], col);
  return y;
}

inline std::optional<Eigen::MatrixXd> load_covariates(const std::string& path,
                                                      const RawGenotypeMatrix& geno) {
  if (path.empty()) return std::nullopt;
  const NumericTable table = read_numeric_table(path);
  const auto order = align_samples(geno.sample_ids, table.sample_ids);
  Eigen::MatrixXd x(geno.n_samples(), table.values.cols());
  for (Index i = 0; i < x.rows(); ++i) x.row(i) = table.values.row(order[static_cast<std::size_t>(i)]);
  return x;
}

}  // namespace cli_detail

// Parses argv (program name excluded), dispatches, writes the RunReport JSON
// and tabular outputs. Returns 0 on success, 1 on user error, 2 on numerical
// failure.
inline int run_command(std::vector<std::string> args) {
  using namespace cli_detail;
  CLI::App app{"ridge/GCV toolkit for genomic heritability and prediction accuracy"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Eigen thread count")
      ->envname("HERIT_RIDGE_THREADS");

  // ---- simulate-genotypes ----
  auto* sim_geno = app.add_subcommand("simulate-genotypes", "draw a synthetic genotype matrix");
  struct {
    std::int64_t n = 0, p = 0;
    std::uint64_t seed = 1;
    std::string out_dir = ".", config;
  } sg;
  sim_geno->add_option("--n", sg.n, "samples")->required();
  sim_geno->add_option("--p", sg.p, "variants")->required();
  sim_geno->add_option("--seed", sg.seed, "RNG seed");
  sim_geno->add_option("--out-dir", sg.out_dir, "output directory");
  sim_geno->add_option("--config", sg.config, "JSON config overriding flags");

  // ---- simulate-phenotype ----
  auto* sim_pheno = app.add_subcommand("simulate-phenotype", "simulate a polygenic phenotype");
  struct {
    GenoArgs geno;
    std::string freqs;  // optional frequency CSV -> true-frequency standardization
    double h2 = 0.5, fc = 1.0;
    std::uint64_t seed = 1;
    std::string out_dir = ".", config;
  } sp;
  sim_pheno->add_option("--geno", sp.geno.geno_csv, "genotype CSV");
  sim_pheno->add_option("--bed", sp.geno.bed, ".bed file");
  sim_pheno->add_option("--bim", sp.geno.bim, ".bim file");
  sim_pheno->add_option("--fam", sp.geno.fam, ".fam file");
  sim_pheno->add_option("--freqs", sp.freqs, "variant frequency CSV (variant_id,freq)");
  sim_pheno->add_option("--h2", sp.h2, "simulated heritability");
  sim_pheno->add_option("--fc", sp.fc, "causal fraction");
  sim_pheno->add_option("--seed", sp.seed, "RNG seed");
  sim_pheno->add_option("--out-dir", sp.out_dir, "output directory");
  sim_pheno->add_option("--config", sp.config, "JSON config overriding flags");

  // ---- estimate-h2 ----
  auto* est = app.add_subcommand("estimate-h2", "estimate genomic heritability");
  struct {
    GenoArgs geno;
    std::string pheno, pheno_col, covar;
    std::string std_geno, std_pheno, std_covar;
    std::string method = "gcv-projection";
    std::string grid = "0.01:0.99:0.01";
    std::uint64_t seed = 1;
    bool with_naive_curve = false;
    std::string out_dir = ".", config;
  } eh;
  est->add_option("--geno", eh.geno.geno_csv, "genotype CSV");
  est->add_option("--bed", eh.geno.bed, ".bed file");
  est->add_option("--bim", eh.geno.bim, ".bim file");
  est->add_option("--fam", eh.geno.fam, ".fam file");
  est->add_option("--pheno", eh.pheno, "phenotype CSV")->required();
  est->add_option("--pheno-col", eh.pheno_col, "phenotype column name");
  est->add_option("--covar", eh.covar, "covariate CSV");
  est->add_option("--std-geno", eh.std_geno, "standardization-set genotype CSV (gcv-twoset)");
  est->add_option("--std-pheno", eh.std_pheno, "standardization-set phenotype CSV (gcv-twoset)");
  est->add_option("--std-covar", eh.std_covar, "standardization-set covariate CSV");
  est->add_option("--method", eh.method,
                  "gcv-projection | gcv-twoset | cv10 | reml | gcv-naive");
  est->add_option("--grid", eh.grid, "h2 grid lo:hi:step");
  est->add_option("--seed", eh.seed, "fold-shuffle seed (cv10)");
  est->add_flag("--with-naive-curve", eh.with_naive_curve,
                "overlay the uncorrected GCV curve in the plot");
  est->add_option("--out-dir", eh.out_dir, "output directory");
  est->add_option("--config", eh.config, "JSON config overriding flags");

  // ---- predict ----
  auto* pred = app.add_subcommand("predict", "fit ridge on a training set, score a test set");
  struct {
    GenoArgs geno, test_geno;
    std::string pheno, pheno_col, covar;
    std::string test_pheno, test_covar;
    std::string std_geno, std_pheno, std_covar;
    double h2 = 0.0, lambda = 0.0;
    std::string out_dir = ".", config;
  } pr;
  pred->add_option("--geno", pr.geno.geno_csv, "training genotype CSV");
  pred->add_option("--bed", pr.geno.bed, ".bed file");
  pred->add_option("--bim", pr.geno.bim, ".bim file");
  pred->add_option("--fam", pr.geno.fam, ".fam file");
  pred->add_option("--pheno", pr.pheno, "training phenotype CSV")->required();
  pred->add_option("--pheno-col", pr.pheno_col, "phenotype column name");
  pred->add_option("--covar", pr.covar, "training covariate CSV");
  pred->add_option("--test-geno", pr.test_geno.geno_csv, "test genotype CSV")->required();
  pred->add_option("--test-pheno", pr.test_pheno, "test phenotype CSV")->required();
  pred->add_option("--test-covar", pr.test_covar, "test covariate CSV");
  pred->add_option("--std-geno", pr.std_geno, "standardization-set genotype CSV");
  pred->add_option("--std-pheno", pr.std_pheno, "standardization-set phenotype CSV");
  pred->add_option("--std-covar", pr.std_covar, "standardization-set covariate CSV");
  pred->add_option("--h2", pr.h2, "heritability giving lambda = p (1-h2)/h2");
  pred->add_option("--lambda", pr.lambda, "explicit ridge penalty");
  pred->add_option("--out-dir", pr.out_dir, "output directory");
  pred->add_option("--config", pr.config, "JSON config overriding flags");

  // ---- theory-curves ----
  auto* theory_cmd = app.add_subcommand("theory-curves", "closed-form accuracy curves");
  struct {
    double h2 = 0.6;
    std::string np_log_range = "-4:4:0.1";
    std::string out_dir = ".", config;
  } th;
  theory_cmd->add_option("--h2", th.h2, "heritability");
  theory_cmd->add_option("--np-log-range", th.np_log_range, "log(n/p) range lo:hi:step");
  theory_cmd->add_option("--out-dir", th.out_dir, "output directory");
  theory_cmd->add_option("--config", th.config, "JSON config overriding flags");

  // ---- experiment-heritability ----
  auto* exp_h = app.add_subcommand("experiment-heritability",
                                   "estimator-bias grid over (n,p) x h2 x f_c");
  struct {
    std::string config;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int replicates = 0;
    bool has_seed = false;
  } xh;
  exp_h->add_option("--config", xh.config, "experiment config JSON")->required();
  exp_h->add_option("--out-dir", xh.out_dir, "output directory");
  exp_h->add_option("--seed", xh.seed, "override config seed");
  exp_h->add_option("--replicates", xh.replicates, "override config replicates");

  // ---- experiment-prediction ----
  auto* exp_p = app.add_subcommand("experiment-prediction",
                                   "prediction accuracy vs n/p with theory overlays");
  struct {
    std::string config;
    std::string out_dir = ".";
  } xp;
  exp_p->add_option("--config", xp.config, "experiment config JSON")->required();
  exp_p->add_option("--out-dir", xp.out_dir, "output directory");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the offending flag
    return code == 0 ? 0 : 1;
  }

  Eigen::setNbThreads(threads);

  try {
    Timer timer;
    if (*sim_geno) {
      if (!sg.config.empty()) {
        const json j = load_config_file(sg.config);
        override_from(j, "n", sg.n);
        override_from(j, "p", sg.p);
        override_from(j, "seed", sg.seed);
      }
      const RawGenotypeMatrix m = simulate_genotypes(sg.n, sg.p, sg.seed);
      timer.phase("simulate");
      OutputStage stage{sg.out_dir, {}};
      stage.add("genotypes.csv", genotype_csv_string(m));
      std::string freqs = "variant_id,freq\n";
      for (Index j = 0; j < m.n_variants(); ++j)
        freqs += m.variant_ids[static_cast<std::size_t>(j)] + "," +
                 format_double((*m.true_freqs)(j)) + "\n";
      stage.add("frequencies.csv", freqs);
      json config_echo{{"n", sg.n}, {"p", sg.p}, {"seed", sg.seed}, {"threads", threads}};
      json results{{"n", m.n_samples()}, {"p", m.n_variants()}};
      stage.add("report.json", pretty(run_report("simulate-genotypes", config_echo, results)));
      stage.flush();
      timer.phase("write");
      write_timing(stage.dir, timer);
      return 0;
    }

    if (*sim_pheno) {
      if (!sp.config.empty()) {
        const json j = load_config_file(sp.config);
        override_from(j, "h2", sp.h2);
        override_from(j, "fc", sp.fc);
        override_from(j, "seed", sp.seed);
      }
      const RawGenotypeMatrix m = sp.geno.load("simulate-phenotype");
      StandardizedMatrix z;
      if (!sp.freqs.empty()) {
        const Eigen::VectorXd freqs = read_frequency_csv(sp.freqs);
        if (freqs.size() != m.n_variants())
          throw DimensionMismatch("frequency CSV row count does not match variant count");
        z = apply_standardization(m, params_from_frequencies(freqs));
      } else if (m.true_freqs) {
        z = standardize_true_frequencies(m);
      } else {
        z = standardize_empirical(m);
      }
      timer.phase("load");
      const PhenotypeSim sim = simulate_phenotype(z, sp.h2, sp.fc, sp.seed);
      timer.phase("simulate");
      OutputStage stage{sp.out_dir, {}};
      NumericTable pheno;
      pheno.sample_ids = m.sample_ids;
      pheno.column_names = {"y"};
      pheno.values = sim.y;
      stage.add("phenotype.csv", numeric_table_csv_string(pheno));
      std::string effects = "variant_id,u\n";
      for (Index j = 0; j < m.n_variants(); ++j)
        effects += m.variant_ids[static_cast<std::size_t>(j)] + "," +
                   format_double(sim.u_true(j)) + "\n";
      stage.add("effects.csv", effects);
      json config_echo{{"h2", sp.h2},   {"fc", sp.fc},           {"seed", sp.seed},
                       {"geno", sp.geno.geno_csv}, {"freqs", sp.freqs}, {"threads", threads},
                       {"standardization", to_string(z.params.source)}};
      json results{{"n", m.n_samples()},
                   {"p", m.n_variants()},
                   {"causal_count", sim.causal_indices.size()},
                   {"phenotype_variance", (sim.y.array() - sim.y.mean()).square().sum() /
                                              static_cast<double>(sim.y.size())}};
      stage.add("report.json", pretty(run_report("simulate-phenotype", config_echo, results)));
      stage.flush();
      timer.phase("write");
      write_timing(stage.dir, timer);
      return 0;
    }

    if (*est) {
      if (!eh.config.empty()) {
        const json j = load_config_file(eh.config);
        override_from(j, "method", eh.method);
        override_from(j, "grid", eh.grid);
        override_from(j, "seed", eh.seed);
      }
      const RawGenotypeMatrix geno = eh.geno.load("estimate-h2");
      const Eigen::VectorXd y = load_phenotype(eh.pheno, eh.pheno_col, geno);
      const auto covar = load_covariates(eh.covar, geno);
      timer.phase("load");
      EstimateOptions options;
      options.h2_grid = parse_grid_spec(eh.grid);
      options.seed = eh.seed;
      const H2Method method = h2_method_from_string(eh.method);

      H2Estimate result;
      std::optional<GcvCurve> naive_curve;
      switch (method) {
        case H2Method::GcvProjection:
          result = estimate_h2_projection(geno, y, covar ? &*covar : nullptr, options);
          break;
        case H2Method::Reml:
          result = estimate_h2_reml(geno, y, covar ? &*covar : nullptr, options);
          break;
        case H2Method::GcvNaive:
          result = estimate_h2_naive(geno, y, options);
          break;
        case H2Method::Cv10:
          result = estimate_h2_cv10(geno, y, options);
          break;
        case H2Method::GcvTwoset: {
          if (eh.std_geno.empty() || eh.std_pheno.empty())
            throw Error("gcv-twoset needs --std-geno and --std-pheno");
          const RawGenotypeMatrix std_geno = read_genotype_csv(eh.std_geno);
          const Eigen::VectorXd y_std = load_phenotype(eh.std_pheno, eh.pheno_col, std_geno);
          const auto std_covar = load_covariates(eh.std_covar, std_geno);
          result = estimate_h2_twoset(geno, y, std_geno, y_std, covar ? &*covar : nullptr,
                                      std_covar ? &*std_covar : nullptr, options);
          break;
        }
      }
      if (eh.with_naive_curve && method != H2Method::GcvNaive) {
        const H2Estimate naive = estimate_h2_naive(geno, y, options);
        naive_curve = naive.curve;
      }
      timer.phase("estimate");

      OutputStage stage{eh.out_dir, {}};
      json config_echo{{"method", eh.method}, {"grid", eh.grid},
                       {"seed", eh.seed},     {"geno", eh.geno.geno_csv},
                       {"pheno", eh.pheno},   {"covar", eh.covar},
                       {"std_geno", eh.std_geno}, {"std_pheno", eh.std_pheno},
                       {"threads", threads}};
      stage.add("report.json",
                pretty(run_report("estimate-h2", config_echo, estimate_to_json(result))));
      if (result.curve) {
        stage.add("curve.csv", curve_csv(*result.curve));
        std::vector<PlotSeries> series;
        PlotSeries main_series;
        main_series.label = eh.method;
        main_series.x = result.curve->h2_grid;
        main_series.y = result.curve->errors;
        main_series.mark_min = true;
        series.push_back(std::move(main_series));
        if (naive_curve) {
          PlotSeries naive_series;
          naive_series.label = "gcv-naive";
          naive_series.x = naive_curve->h2_grid;
          naive_series.y = naive_curve->errors;
          naive_series.mark_min = true;
          series.push_back(std::move(naive_series));
        }
        stage.add("curve.svg",
                  render_line_chart("cross-validated error vs h2", "h2", "error", series));
      }
      stage.flush();
      timer.phase("write");
      write_timing(stage.dir, timer);
      return 0;
    }

    if (*pred) {
      if (!pr.config.empty()) {
        const json j = load_config_file(pr.config);
        override_from(j, "h2", pr.h2);
        override_from(j, "lambda", pr.lambda);
      }
      const RawGenotypeMatrix train = pr.geno.load("predict (training)");
      const Eigen::VectorXd y_tr = load_phenotype(pr.pheno, pr.pheno_col, train);
      const auto x_tr = load_covariates(pr.covar, train);
      const RawGenotypeMatrix test = pr.test_geno.load("predict (test)");
      const Eigen::VectorXd y_te = load_phenotype(pr.test_pheno, pr.pheno_col, test);
      const auto x_te = load_covariates(pr.test_covar, test);
      if (test.n_variants() != train.n_variants())
        throw DimensionMismatch("training and test sets cover different variants");
      timer.phase("load");

      PredictionResult result;
      double lambda_used = 0.0;
      Index p_used = 0;
      if (!pr.std_geno.empty()) {
        if (pr.std_pheno.empty()) throw Error("--std-geno needs --std-pheno");
        const RawGenotypeMatrix std_geno = read_genotype_csv(pr.std_geno);
        const Eigen::VectorXd y_std = load_phenotype(pr.std_pheno, pr.pheno_col, std_geno);
        const auto x_std = load_covariates(pr.std_covar, std_geno);
        const ExternalStandardization ext = external_params_drop_monomorphic(std_geno);
        const RawGenotypeMatrix train_kept = select_columns(train, ext.kept);
        const RawGenotypeMatrix test_kept = select_columns(test, ext.kept);
        p_used = train_kept.n_variants();
        lambda_used = pr.lambda > 0.0 ? pr.lambda : lambda_from_h2(pr.h2, p_used);
        const StandardizedMatrix z_tr = apply_standardization(train_kept, ext.params);
        const Eigen::VectorXd beta = ols_fixed_effects(y_std, x_std ? &*x_std : nullptr);
        const Eigen::MatrixXd x_full_tr = design_with_covariates(y_tr.size(), x_tr ? &*x_tr : nullptr);
        if (beta.size() != x_full_tr.cols())
          throw DimensionMismatch("training and standardization covariate counts differ");
        const RidgeSolution sol = ridge_fit(z_tr, y_tr - x_full_tr * beta, lambda_used);
        result = predict_out_of_sample(sol, ext.params, beta, test_kept, y_te,
                                       x_te ? &*x_te : nullptr);
      } else {
        p_used = train.n_variants();
        lambda_used = pr.lambda > 0.0 ? pr.lambda : lambda_from_h2(pr.h2, p_used);
        const StandardizationParams params = empirical_params(train);
        const StandardizedMatrix z_tr = apply_standardization(train, params);
        const ContrastMatrix c =
            contrast_from_qr(design_with_covariates(y_tr.size(), x_tr ? &*x_tr : nullptr));
        StandardizedMatrix z_c;
        z_c.z = c.c * z_tr.z;
        z_c.params = params;
        const RidgeSolution sol = ridge_fit(z_c, c.c * y_tr, lambda_used);
        const Eigen::VectorXd beta = ols_fixed_effects(y_tr, x_tr ? &*x_tr : nullptr);
        result = predict_out_of_sample(sol, params, beta, test, y_te, x_te ? &*x_te : nullptr);
      }
      timer.phase("fit");

      OutputStage stage{pr.out_dir, {}};
      NumericTable preds;
      preds.sample_ids = test.sample_ids;
      preds.column_names = {"residual", "g_hat", "f_hat"};
      preds.values.resize(test.n_samples(), 3);
      preds.values.col(0) = result.residuals;
      preds.values.col(1) = result.g_hat;
      preds.values.col(2) = result.f_hat;
      stage.add("predictions.csv", numeric_table_csv_string(preds));
      json config_echo{{"h2", pr.h2},         {"lambda", lambda_used}, {"geno", pr.geno.geno_csv},
                       {"pheno", pr.pheno},   {"test_geno", pr.test_geno.geno_csv},
                       {"test_pheno", pr.test_pheno}, {"std_geno", pr.std_geno},
                       {"p_used", p_used},    {"threads", threads}};
      json results{{"mse", result.mse},
                   {"corr2", result.corr2},
                   {"normalized_mse", result.normalized_mse},
                   {"degenerate_corr", result.degenerate_corr},
                   {"n_test", test.n_samples()}};
      stage.add("report.json", pretty(run_report("predict", config_echo, results)));
      stage.flush();
      timer.phase("write");
      write_timing(stage.dir, timer);
      return 0;
    }

    if (*theory_cmd) {
      if (!th.config.empty()) {
        const json j = load_config_file(th.config);
        override_from(j, "h2", th.h2);
        override_from(j, "np_log_range", th.np_log_range);
      }
      double lo = 0.0, hi = 0.0, step = 0.0;
      if (std::sscanf(th.np_log_range.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
          !(step > 0.0) || !(hi >= lo))
        throw OutOfRange("--np-log-range expects lo:hi:step");
      // ratio-only formulas: evaluate at a large reference scale
      const double ref = 1e6;
      std::string csv = "log_np,n_over_p,test_mse,train_mse,corr2\n";
      std::vector<double> xs, test_curve, train_curve, corr_curve;
      for (int i = 0; lo + i * step <= hi + 1e-12; ++i) {
        const double l = lo + i * step;
        const double ratio = std::exp(l);
        const double n = ratio >= 1.0 ? ref * ratio : ref;
        const double p = ratio >= 1.0 ? ref : ref / ratio;
        const auto point = theory::point(n, p, th.h2);
        csv += format_double(l);
        csv += ',';
        csv += format_double(ratio);
        csv += ',';
        csv += format_double(point.test_mse);
        csv += ',';
        csv += format_double(point.train_mse);
        csv += ',';
        csv += format_double(point.corr2);
        csv += '\n';
        xs.push_back(l);
        test_curve.push_back(point.test_mse);
        train_curve.push_back(point.train_mse);
        corr_curve.push_back(point.corr2);
      }
      timer.phase("compute");
      OutputStage stage{th.out_dir, {}};
      stage.add("theory.csv", csv);
      stage.add("theory.svg",
                render_line_chart("theoretical accuracy, h2 = " + format_double(th.h2),
                                  "log(n/p)", "value",
                                  {{"test_mse", xs, test_curve, {}, false},
                                   {"train_mse", xs, train_curve, {}, false},
                                   {"corr2", xs, corr_curve, {}, false}}));
      json config_echo{{"h2", th.h2}, {"np_log_range", th.np_log_range}, {"threads", threads}};
      json results{{"rows", xs.size()}};
      stage.add("report.json", pretty(run_report("theory-curves", config_echo, results)));
      stage.flush();
      timer.phase("write");
      write_timing(stage.dir, timer);
      return 0;
    }

    if (*exp_h) {
      const json j = load_config_file(xh.config);
      HeritabilityExperimentConfig config;
      std::string scenario = j.value("scenario", std::string("fully-synthetic"));
      for (const auto& cell : j.at("cells"))
        config.np_cells.emplace_back(cell.at(0).get<Index>(), cell.at(1).get<Index>());
      config.h2_values = j.at("h2_values").get<std::vector<double>>();
      config.fc_values = j.at("fc_values").get<std::vector<double>>();
      for (const auto& m : j.at("methods"))
        config.methods.push_back(h2_method_from_string(m.get<std::string>()));
      config.replicates = j.value("replicates", 20);
      config.seed = j.value("seed", std::uint64_t{1});
      config.std_set_size = j.value("std_set_size", Index{1000});
      if (j.contains("grid")) {
        const auto& g = j.at("grid");
        config.h2_grid = h2_grid_range(g.at("lo").get<double>(), g.at("hi").get<double>(),
                                       g.at("step").get<double>());
      }
      if (xh.replicates > 0) config.replicates = xh.replicates;
      if (exp_h->count("--seed") > 0) config.seed = xh.seed;
      timer.phase("load");

      const std::vector<HeritabilityRow> rows = run_heritability_experiment(config);
      timer.phase("run");

      OutputStage stage{xh.out_dir, {}};
      stage.add("heritability.csv", heritability_rows_csv(scenario, rows));
      // per-cell mean bias summary
      json summary = json::array();
      for (const auto& [n, p] : config.np_cells)
        for (const double h2 : config.h2_values)
          for (const double fc : config.fc_values)
            for (const H2Method method : config.methods) {
              double sum = 0.0;
              int count = 0;
              for (const auto& r : rows)
                if (r.n == n && r.p == p && r.h2_sim == h2 && r.f_c == fc && r.method == method) {
                  sum += r.bias;
                  ++count;
                }
              if (count > 0)
                summary.push_back(json{{"n", n},
                                       {"p", p},
                                       {"h2_sim", h2},
                                       {"f_c", fc},
                                       {"method", to_string(method)},
                                       {"mean_bias", sum / count},
                                       {"replicates", count}});
            }
      json config_echo = j;
      config_echo["resolved_replicates"] = config.replicates;
      config_echo["resolved_seed"] = config.seed;
      config_echo["threads"] = threads;
      stage.add("report.json", pretty(run_report("experiment-heritability", config_echo,
                                                 json{{"cells", summary}})));
      stage.flush();
      timer.phase("write");
      write_timing(stage.dir, timer);
      return 0;
    }

    if (*exp_p) {
      const json j = load_config_file(xp.config);
      PredictionExperimentConfig config;
      config.n_train = j.value("n_train", Index{500});
      config.n_test = j.value("n_test", Index{1000});
      config.training_sets = j.value("training_sets", 60);
      config.h2 = j.value("h2", 0.6);
      config.seed = j.value("seed", std::uint64_t{1});
      config.duplicate_columns = j.value("duplicate_columns", false);
      if (j.contains("p_list")) {
        config.p_list = j.at("p_list").get<std::vector<Index>>();
      } else if (j.contains("np_log_range")) {
        const auto& r = j.at("np_log_range");
        config.p_list = p_list_from_log_range(config.n_train, r.at("lo").get<double>(),
                                              r.at("hi").get<double>(), r.at("count").get<int>());
      } else {
        throw Error("experiment-prediction config needs p_list or np_log_range");
      }
      timer.phase("load");

      const PredictionExperimentReport report = run_prediction_experiment(config);
      timer.phase("run");

      OutputStage stage{xp.out_dir, {}};
      stage.add("prediction.csv", prediction_points_csv(report));
      std::vector<double> xs, err, terr, c2, tc2, sd_tr, sd_ind;
      for (const auto& point : report.points) {
        xs.push_back(std::log(point.n_over_p));
        err.push_back(point.err);
        terr.push_back(point.theory_test_mse);
        c2.push_back(point.corr2);
        tc2.push_back(point.theory_corr2);
        sd_tr.push_back(point.sd_over_training_sets);
        sd_ind.push_back(point.sd_over_test_individuals);
      }
      if (xs.size() >= 2) {
        stage.add("prediction_mse_trainingset_sd.svg",
                  render_line_chart("test MSE vs log(n/p), error bars over training sets",
                                    "log(n/p)", "test MSE",
                                    {{"empirical", xs, err, sd_tr, false},
                                     {"theory", xs, terr, {}, false}}));
        stage.add("prediction_mse_individual_sd.svg",
                  render_line_chart("test MSE vs log(n/p), error bars over test individuals",
                                    "log(n/p)", "test MSE",
                                    {{"empirical", xs, err, sd_ind, false},
                                     {"theory", xs, terr, {}, false}}));
        stage.add("prediction_corr2.svg",
                  render_line_chart("squared correlation vs log(n/p)", "log(n/p)", "corr^2",
                                    {{"empirical", xs, c2, {}, false},
                                     {"theory", xs, tc2, {}, false}}));
      }
      json config_echo = j;
      config_echo["resolved_p_list"] = config.p_list;
      config_echo["threads"] = threads;
      stage.add("report.json", pretty(run_report("experiment-prediction", config_echo,
                                                 json{{"points", prediction_points_json(report)}})));
      stage.flush();
      timer.phase("write");
      write_timing(stage.dir, timer);
      return 0;
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_CLI_HPP
