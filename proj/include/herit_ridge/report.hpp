#ifndef HERIT_RIDGE_REPORT_HPP
#define HERIT_RIDGE_REPORT_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "herit_ridge/csv.hpp"
#include "herit_ridge/errors.hpp"
#include "herit_ridge/estimate.hpp"
#include "herit_ridge/experiments.hpp"
#include "herit_ridge/theory.hpp"
#include "herit_ridge/version.hpp"

namespace heritridge {

using json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

// temp file + rename, so a crashed run never leaves a partial output behind
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline json curve_to_json(const GcvCurve& curve) {
  json j;
  j["method"] = to_string(curve.method);
  j["h2"] = curve.h2_grid;
  j["lambda"] = curve.lambda_grid;
  j["error"] = curve.errors;
  j["argmin_h2"] = curve.argmin_h2;
  j["boundary_warning"] = curve.boundary_warning;
  return j;
}

inline json estimate_to_json(const H2Estimate& est) {
  json j;
  j["h2"] = est.h2;
  j["lambda"] = est.lambda;
  j["method"] = to_string(est.method);
  j["n_used"] = est.n_used;
  j["p_used"] = est.p_used;
  j["boundary_warning"] = est.boundary_warning;
  if (est.dropped_variants > 0) j["dropped_variants"] = est.dropped_variants;
  if (est.curve) j["curve"] = curve_to_json(*est.curve);
  return j;
}

inline std::string curve_csv(const GcvCurve& curve) {
  std::string out = "h2,lambda,error\n";
  for (std::size_t i = 0; i < curve.h2_grid.size(); ++i) {
    out += format_double(curve.h2_grid[i]);
    out += ',';
    out += format_double(curve.lambda_grid[i]);
    out += ',';
    out += format_double(curve.errors[i]);
    out += '\n';
  }
  return out;
}

inline std::string heritability_rows_csv(const std::string& scenario,
                                         const std::vector<HeritabilityRow>& rows) {
  std::string out = "scenario,n,p,f_c,h2_sim,method,replicate,h2_est,bias\n";
  for (const auto& r : rows) {
    out += scenario;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.p);
    out += ',';
    out += format_double(r.f_c);
    out += ',';
    out += format_double(r.h2_sim);
    out += ',';
    out += to_string(r.method);
    out += ',';
    out += std::to_string(r.replicate);
    out += ',';
    out += format_double(r.h2_est);
    out += ',';
    out += format_double(r.bias);
    out += '\n';
  }
  return out;
}

inline std::string prediction_points_csv(const PredictionExperimentReport& report) {
  std::string out =
      "p,n_over_p,err,bias2,var,corr2,normalized_err,theory_test_mse,theory_corr2,"
      "sd_over_training_sets,sd_over_test_individuals,degenerate_corr\n";
  for (const auto& r : report.points) {
    out += std::to_string(r.p);
    out += ',';
    out += format_double(r.n_over_p);
    out += ',';
    out += format_double(r.err);
    out += ',';
    out += format_double(r.bias2);
    out += ',';
    out += format_double(r.var);
    out += ',';
    out += format_double(r.corr2);
    out += ',';
    out += format_double(r.normalized_err);
    out += ',';
    out += format_double(r.theory_test_mse);
    out += ',';
    out += format_double(r.theory_corr2);
    out += ',';
    out += format_double(r.sd_over_training_sets);
    out += ',';
    out += format_double(r.sd_over_test_individuals);
    out += ',';
    out += r.degenerate_corr ? "1" : "0";
    out += '\n';
  }
  return out;
}

inline json prediction_points_json(const PredictionExperimentReport& report) {
  json arr = json::array();
  for (const auto& r : report.points) {
    json j;
    j["p"] = r.p;
    j["n_over_p"] = r.n_over_p;
    j["err"] = r.err;
    j["bias2"] = r.bias2;
    j["var"] = r.var;
    j["corr2"] = r.corr2;
    j["normalized_err"] = r.normalized_err;
    j["theory_test_mse"] = r.theory_test_mse;
    j["theory_corr2"] = r.theory_corr2;
    j["sd_over_training_sets"] = r.sd_over_training_sets;
    j["sd_over_test_individuals"] = r.sd_over_test_individuals;
    j["degenerate_corr"] = r.degenerate_corr;
    arr.push_back(j);
  }
  return arr;
}

inline json run_report(const std::string& command, json config_echo, json results) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  j["versions"] = {{"herit-ridge", kVersion}};
  j["config_echo"] = std::move(config_echo);
  j["results"] = std::move(results);
  return j;
}

inline std::string pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace heritridge

#endif  // HERIT_RIDGE_REPORT_HPP
