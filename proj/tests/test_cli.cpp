#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "herit_ridge/cli.hpp"

using namespace heritridge;
namespace fs = std::filesystem;

namespace {

class CliFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("herit_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliFixture, SimulateGenotypesWritesFiles) {
  const int rc = run_command({"simulate-genotypes", "--n", "12", "--p", "8", "--seed", "4",
                              "--out-dir", path("g")});
  ASSERT_EQ(rc, 0);
  EXPECT_TRUE(fs::exists(dir_ / "g" / "genotypes.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "g" / "frequencies.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "g" / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "g" / "timing.json"));
  const RawGenotypeMatrix m = read_genotype_csv(path("g/genotypes.csv"));
  EXPECT_EQ(m.n_samples(), 12);
  EXPECT_EQ(m.n_variants(), 8);
  const json report = json::parse(slurp(dir_ / "g" / "report.json"));
  EXPECT_EQ(report.at("schema_version").get<int>(), 1);
  EXPECT_EQ(report.at("command").get<std::string>(), "simulate-genotypes");
}

TEST_F(CliFixture, FullPipelineEstimate) {
  ASSERT_EQ(run_command({"simulate-genotypes", "--n", "80", "--p", "200", "--seed", "9",
                         "--out-dir", path("g")}),
            0);
  ASSERT_EQ(run_command({"simulate-phenotype", "--geno", path("g/genotypes.csv"), "--freqs",
                         path("g/frequencies.csv"), "--h2", "0.5", "--fc", "1.0", "--seed", "10",
                         "--out-dir", path("p")}),
            0);
  ASSERT_EQ(run_command({"estimate-h2", "--geno", path("g/genotypes.csv"), "--pheno",
                         path("p/phenotype.csv"), "--method", "gcv-projection", "--grid",
                         "0.01:0.99:0.01", "--out-dir", path("e")}),
            0);
  const json report = json::parse(slurp(dir_ / "e" / "report.json"));
  const double h2 = report.at("results").at("h2").get<double>();
  EXPECT_GT(h2, 0.0);
  EXPECT_LT(h2, 1.0);
  EXPECT_EQ(report.at("results").at("p_used").get<int>(), 200);
  EXPECT_TRUE(fs::exists(dir_ / "e" / "curve.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "e" / "curve.svg"));
}

TEST_F(CliFixture, TheoryCurveRowAtLogZero) {
  ASSERT_EQ(run_command({"theory-curves", "--h2", "0.6", "--np-log-range", "-4:4:0.1",
                         "--out-dir", path("t")}),
            0);
  std::ifstream in(dir_ / "t" / "theory.csv");
  std::string line;
  std::getline(in, line);  // header
  bool found = false;
  while (std::getline(in, line)) {
    const auto fields = split_csv_line(line);
    if (std::abs(std::stod(fields[0])) < 1e-9) {
      EXPECT_NEAR(std::stod(fields[2]), 0.64, 1e-9);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliFixture, UnknownFlagFailsWithoutOutputs) {
  const int rc = run_command({"estimate-h2", "--does-not-exist", "1", "--out-dir", path("x")});
  EXPECT_EQ(rc, 1);
  EXPECT_FALSE(fs::exists(dir_ / "x" / "report.json"));
}

TEST_F(CliFixture, MissingInputFileIsUserError) {
  const int rc = run_command({"estimate-h2", "--geno", path("nope.csv"), "--pheno",
                              path("nope2.csv"), "--out-dir", path("x")});
  EXPECT_EQ(rc, 1);
  EXPECT_FALSE(fs::exists(dir_ / "x" / "report.json"));
}

TEST_F(CliFixture, HelpExitsZero) {
  EXPECT_EQ(run_command({"--help"}), 0);
  EXPECT_EQ(run_command({}), 1);  // a subcommand is required
}

TEST_F(CliFixture, ReportsAreByteIdenticalAcrossReruns) {
  const std::vector<std::string> base = {"simulate-genotypes", "--n", "15", "--p", "6",
                                         "--seed", "21"};
  auto with_dir = [&](const std::string& d) {
    auto v = base;
    v.push_back("--out-dir");
    v.push_back(path(d));
    return v;
  };
  ASSERT_EQ(run_command(with_dir("a")), 0);
  ASSERT_EQ(run_command(with_dir("b")), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "genotypes.csv"), slurp(dir_ / "b" / "genotypes.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "frequencies.csv"), slurp(dir_ / "b" / "frequencies.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "b" / "report.json"));
}

TEST_F(CliFixture, ExperimentPredictionMini) {
  {
    std::ofstream cfg(dir_ / "exp.json");
    cfg << R"({"n_train": 40, "n_test": 60, "training_sets": 4, "h2": 0.5,
               "p_list": [80, 20], "seed": 3})";
  }
  ASSERT_EQ(run_command({"experiment-prediction", "--config", path("exp.json"), "--out-dir",
                         path("o1")}),
            0);
  ASSERT_EQ(run_command({"experiment-prediction", "--config", path("exp.json"), "--out-dir",
                         path("o2")}),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "o1" / "prediction.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "o1" / "prediction_corr2.svg"));
  EXPECT_EQ(slurp(dir_ / "o1" / "prediction.csv"), slurp(dir_ / "o2" / "prediction.csv"));
  EXPECT_EQ(slurp(dir_ / "o1" / "report.json"), slurp(dir_ / "o2" / "report.json"));
  std::ifstream in(dir_ / "o1" / "prediction.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 3);  // header + 2 p values
}

TEST_F(CliFixture, ExperimentHeritabilityMini) {
  {
    std::ofstream cfg(dir_ / "exp.json");
    cfg << R"({"scenario": "fully-synthetic", "cells": [[50, 200]], "h2_values": [0.5],
               "fc_values": [1.0], "methods": ["gcv-projection", "reml"],
               "replicates": 2, "seed": 8, "std_set_size": 40})";
  }
  ASSERT_EQ(run_command({"experiment-heritability", "--config", path("exp.json"), "--out-dir",
                         path("o")}),
            0);
  std::ifstream in(dir_ / "o" / "heritability.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "scenario,n,p,f_c,h2_sim,method,replicate,h2_est,bias");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 4);  // 1 cell x 2 methods x 2 replicates
  const json report = json::parse(slurp(dir_ / "o" / "report.json"));
  EXPECT_EQ(report.at("results").at("cells").size(), 2u);
}

TEST_F(CliFixture, PredictCommandEndToEnd) {
  ASSERT_EQ(run_command({"simulate-genotypes", "--n", "120", "--p", "60", "--seed", "31",
                         "--out-dir", path("g")}),
            0);
  ASSERT_EQ(run_command({"simulate-phenotype", "--geno", path("g/genotypes.csv"), "--freqs",
                         path("g/frequencies.csv"), "--h2", "0.6", "--fc", "1", "--seed", "32",
                         "--out-dir", path("p")}),
            0);
  // split by hand: first 80 train, last 40 test
  const RawGenotypeMatrix all = read_genotype_csv(path("g/genotypes.csv"));
  const NumericTable pheno = read_numeric_table(path("p/phenotype.csv"));
  auto write_split = [&](Index begin, Index count, const std::string& gname,
                         const std::string& pname) {
    RawGenotypeMatrix sub;
    sub.values = all.values.block(begin, 0, count, all.n_variants());
    sub.variant_ids = all.variant_ids;
    // genotype CSVs carry no sample column; the re-read assigns default ids
    sub.sample_ids = default_sample_ids(count);
    std::ofstream g(path(gname));
    g << genotype_csv_string(sub);
    NumericTable t;
    t.sample_ids = sub.sample_ids;
    t.column_names = {"y"};
    t.values = pheno.values.block(begin, 0, count, 1);
    std::ofstream p(path(pname));
    p << numeric_table_csv_string(t);
  };
  write_split(0, 80, "train.csv", "train_pheno.csv");
  write_split(80, 40, "test.csv", "test_pheno.csv");

  ASSERT_EQ(run_command({"predict", "--geno", path("train.csv"), "--pheno",
                         path("train_pheno.csv"), "--test-geno", path("test.csv"),
                         "--test-pheno", path("test_pheno.csv"), "--h2", "0.6", "--out-dir",
                         path("out")}),
            0);
  const json report = json::parse(slurp(dir_ / "out" / "report.json"));
  EXPECT_GT(report.at("results").at("mse").get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "predictions.csv"));
  const NumericTable preds = read_numeric_table(path("out/predictions.csv"));
  EXPECT_EQ(preds.values.rows(), 40);
  EXPECT_EQ(preds.column_names.size(), 3u);
}
