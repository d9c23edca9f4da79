#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "herit_ridge/report.hpp"
#include "herit_ridge/svg.hpp"

using namespace heritridge;
namespace fs = std::filesystem;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(0.64), "0.64");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(AtomicWrite, WritesAndOverwrites) {
  const fs::path path = fs::temp_directory_path() / "herit_atomic.txt";
  atomic_write(path, "first");
  {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "first");
  }
  atomic_write(path, "second");
  {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "second");
  }
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
  fs::remove(path);
}

TEST(RunReport, SchemaFields) {
  const json j = run_report("estimate-h2", json{{"seed", 1}}, json{{"h2", 0.5}});
  EXPECT_EQ(j.at("schema_version").get<int>(), kReportSchemaVersion);
  EXPECT_EQ(j.at("command").get<std::string>(), "estimate-h2");
  EXPECT_TRUE(j.contains("versions"));
  EXPECT_TRUE(j.contains("config_echo"));
  EXPECT_TRUE(j.contains("results"));
  EXPECT_EQ(j.at("versions").at("herit-ridge").get<std::string>(), std::string(kVersion));
}

TEST(CurveCsv, HeaderAndRows) {
  GcvCurve curve;
  curve.h2_grid = {0.25, 0.5};
  curve.lambda_grid = {30.0, 10.0};
  curve.errors = {1.5, 0.75};
  finalize_curve(curve);
  const std::string csv = curve_csv(curve);
  EXPECT_EQ(csv, "h2,lambda,error\n0.25,30,1.5\n0.5,10,0.75\n");
}

TEST(HeritabilityCsv, ColumnOrder) {
  HeritabilityRow row;
  row.n = 100;
  row.p = 200;
  row.f_c = 0.1;
  row.h2_sim = 0.5;
  row.method = H2Method::Reml;
  row.replicate = 3;
  row.h2_est = 0.45;
  row.bias = -0.05;
  const std::string csv = heritability_rows_csv("fully-synthetic", {row});
  EXPECT_EQ(csv,
            "scenario,n,p,f_c,h2_sim,method,replicate,h2_est,bias\n"
            "fully-synthetic,100,200,0.1,0.5,reml,3,0.45,-0.05\n");
}

TEST(Svg, DeterministicBytes) {
  PlotSeries s;
  s.label = "curve";
  s.x = {0.0, 1.0, 2.0};
  s.y = {1.0, 0.5, 0.75};
  s.mark_min = true;
  const std::string a = render_line_chart("t", "x", "y", {s});
  const std::string b = render_line_chart("t", "x", "y", {s});
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("<svg"), std::string::npos);
  EXPECT_NE(a.find("polyline"), std::string::npos);
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);  // argmin marker
}

TEST(Svg, TwoSeriesTwoPolylines) {
  PlotSeries a{"one", {0, 1, 2}, {1, 2, 3}, {}, false};
  PlotSeries b{"two", {0, 1, 2}, {3, 2, 1}, {0.1, 0.1, 0.1}, false};
  const std::string svg = render_line_chart("t", "x", "y", {a, b});
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  EXPECT_EQ(count, 2u);
  EXPECT_NE(svg.find(">one<"), std::string::npos);
  EXPECT_NE(svg.find(">two<"), std::string::npos);
}

TEST(Svg, SingleRowRejected) {
  PlotSeries s{"one", {0.5}, {1.0}, {}, false};
  EXPECT_THROW(render_line_chart("t", "x", "y", {s}), EmptyCurve);
  EXPECT_THROW(render_line_chart("t", "x", "y", {}), EmptyCurve);
  PlotSeries bad{"b", {0, 1}, {1, 2}, {0.1}, false};
  EXPECT_THROW(render_line_chart("t", "x", "y", {bad}), DimensionMismatch);
}

TEST(PredictionCsv, HeaderMatchesDocumentedOrder) {
  PredictionExperimentReport report;
  PredictionPointResult r;
  r.p = 100;
  r.n_over_p = 0.5;
  report.points.push_back(r);
  const std::string csv = prediction_points_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "p,n_over_p,err,bias2,var,corr2,normalized_err,theory_test_mse,theory_corr2,"
            "sd_over_training_sets,sd_over_test_individuals,degenerate_corr");
}
