#ifndef HERIT_RIDGE_PREDICT_HPP
#define HERIT_RIDGE_PREDICT_HPP

#include <Eigen/Dense>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/genotype.hpp"
#include "herit_ridge/ridge.hpp"
#include "herit_ridge/spectral.hpp"

namespace heritridge {

struct PredictionResult {
  Eigen::VectorXd g_hat;       // Z_te u_hat
  Eigen::VectorXd f_hat;       // [1 X_te] beta_hat
  Eigen::VectorXd residuals;   // y_te - f_hat
  double mse = 0.0;            // (1/n_te) || residuals - g_hat ||^2
  double corr2 = 0.0;          // squared correlation of (residuals, g_hat)
  double normalized_mse = 0.0; // mse / mean(residuals^2)
  bool degenerate_corr = false;
};

// Out-of-sample prediction. Test genotypes are standardized with the supplied
// params (never with test-set statistics).
inline PredictionResult predict_out_of_sample(const RidgeSolution& solution,
                                              const StandardizationParams& params,
                                              const Eigen::VectorXd& beta_hat,
                                              const RawGenotypeMatrix& test_geno,
                                              const Eigen::VectorXd& y_test,
                                              const Eigen::MatrixXd* x_test = nullptr) {
  const Index n_te = test_geno.n_samples();
  if (y_test.size() != n_te)
    throw DimensionMismatch("test phenotype length does not match test genotypes");
  if (solution.u_hat.size() != test_geno.n_variants())
    throw DimensionMismatch("effect vector length does not match test variant count");
  const StandardizedMatrix z_te = apply_standardization(test_geno, params);

  PredictionResult out;
  out.g_hat = z_te.z * solution.u_hat;
  const Eigen::MatrixXd x_full = design_with_covariates(n_te, x_test);
  if (beta_hat.size() != x_full.cols())
    throw DimensionMismatch("beta_hat length does not match fixed-effect design");
  out.f_hat = x_full * beta_hat;
  out.residuals = y_test - out.f_hat;

  const Eigen::VectorXd diff = out.residuals - out.g_hat;
  out.mse = diff.squaredNorm() / static_cast<double>(n_te);
  const double mean_sq = out.residuals.squaredNorm() / static_cast<double>(n_te);
  out.normalized_mse = mean_sq > 0.0 ? out.mse / mean_sq : 0.0;

  const double mg = out.g_hat.mean();
  const double mr = out.residuals.mean();
  const double var_g = (out.g_hat.array() - mg).square().sum();
  const double var_r = (out.residuals.array() - mr).square().sum();
  if (var_g <= 0.0 || var_r <= 0.0) {
    out.corr2 = 0.0;
    out.degenerate_corr = true;
  } else {
    const double cov = ((out.g_hat.array() - mg) * (out.residuals.array() - mr)).sum();
    out.corr2 = (cov * cov) / (var_g * var_r);
  }
  return out;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_PREDICT_HPP
