#ifndef HERIT_RIDGE_ESTIMATE_HPP
#define HERIT_RIDGE_ESTIMATE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/gcv.hpp"
#include "herit_ridge/genotype.hpp"
#include "herit_ridge/kfold.hpp"
#include "herit_ridge/reml.hpp"
#include "herit_ridge/ridge.hpp"
#include "herit_ridge/spectral.hpp"

namespace heritridge {

enum class H2Method { GcvProjection, GcvTwoset, Cv10, Reml, GcvNaive };

inline const char* to_string(H2Method m) {
  switch (m) {
    case H2Method::GcvProjection: return "gcv-projection";
    case H2Method::GcvTwoset: return "gcv-twoset";
    case H2Method::Cv10: return "cv10";
    case H2Method::Reml: return "reml";
    case H2Method::GcvNaive: return "gcv-naive";
  }
  return "?";
}

inline H2Method h2_method_from_string(const std::string& s) {
  if (s == "gcv-projection") return H2Method::GcvProjection;
  if (s == "gcv-twoset") return H2Method::GcvTwoset;
  if (s == "cv10") return H2Method::Cv10;
  if (s == "reml") return H2Method::Reml;
  if (s == "gcv-naive") return H2Method::GcvNaive;
  throw OutOfRange("unknown estimation method: " + s);
}

struct H2Estimate {
  double h2 = 0.0;
  double lambda = 0.0;
  H2Method method = H2Method::GcvProjection;
  std::optional<GcvCurve> curve;
  Index n_used = 0;
  Index p_used = 0;
  bool boundary_warning = false;
  Index dropped_variants = 0;  // two-set route: monomorphic in the standardization set
};

struct EstimateOptions {
  std::vector<double> h2_grid = default_h2_grid();
  std::uint64_t seed = 1;  // cv10 fold shuffle
  int kfold_k = 10;
};

namespace detail {

inline H2Estimate estimate_from_curve(GcvCurve&& curve, H2Method method, Index m_used,
                                      Index p_used) {
  H2Estimate est;
  est.h2 = curve.argmin_h2;
  est.lambda = lambda_from_h2(curve.argmin_h2, p_used);
  est.method = method;
  est.n_used = m_used;
  est.p_used = p_used;
  est.boundary_warning = curve.boundary_warning;
  est.curve = std::move(curve);
  return est;
}

}  // namespace detail

// Projection route on a precomputed (uncontrasted) spectral cache of the
// self-standardized Gram; used by the experiment harness so one
// eigendecomposition serves every replicate. Intercept-only case.
inline H2Estimate gcv_projection_from_cache(const SpectralCache& cache, const Eigen::VectorXd& y,
                                            Index p, const std::vector<double>& h2_grid) {
  if (!has_constant_null_eigenvector(cache))
    throw NoConstantNullEigenvector(
        "projection route needs the empirically-centered null eigenvector; use covariates/QR route");
  const Eigen::VectorXd b_full = cache.rotate(y);
  const Index m = cache.m - 1;
  GcvCurve curve = gcv_curve_from_rotated(cache.eigvals.head(m), b_full.head(m), h2_grid, p);
  return detail::estimate_from_curve(std::move(curve), H2Method::GcvProjection, m, p);
}

inline H2Estimate reml_from_cache(const SpectralCache& cache, const Eigen::VectorXd& y, Index p,
                                  const std::vector<double>& h2_grid) {
  if (!has_constant_null_eigenvector(cache))
    throw NoConstantNullEigenvector(
        "projection route needs the empirically-centered null eigenvector; use covariates/QR route");
  const Eigen::VectorXd b_full = cache.rotate(y);
  const Index m = cache.m - 1;
  RemlOptions opts;
  opts.coarse_grid = h2_grid;
  const RemlFit fit = reml_profile_from_rotated(cache.eigvals.head(m), b_full.head(m), p, opts);
  H2Estimate est;
  est.h2 = fit.h2;
  est.lambda = lambda_from_h2(fit.h2, p);
  est.method = H2Method::Reml;
  est.n_used = m;
  est.p_used = p;
  est.boundary_warning = fit.boundary_warning;
  return est;
}

// Naive diagnostic pipeline: empirical standardization, empirical centering of
// the phenotype, no contrast. Reproduces the high-dimensional GCV bias.
inline H2Estimate gcv_naive_from_cache(const SpectralCache& cache, const Eigen::VectorXd& y,
                                       Index p, const std::vector<double>& h2_grid) {
  const Eigen::VectorXd centered = y.array() - y.mean();
  GcvCurve curve = gcv_error_curve(cache, centered, h2_grid, p);
  return detail::estimate_from_curve(std::move(curve), H2Method::GcvNaive, cache.m, p);
}

// Two-set route on a precomputed cache of the externally-standardized training
// Gram. y_std supplies the intercept/covariate estimates per replicate.
inline H2Estimate gcv_twoset_from_cache(const SpectralCache& cache, const Eigen::VectorXd& y_train,
                                        const Eigen::VectorXd& beta_hat,
                                        const Eigen::MatrixXd* x_train, Index p_used,
                                        Index dropped, const std::vector<double>& h2_grid) {
  const Eigen::MatrixXd x_full = design_with_covariates(y_train.size(), x_train);
  if (beta_hat.size() != x_full.cols())
    throw DimensionMismatch("beta_hat length does not match fixed-effect design");
  const Eigen::VectorXd adjusted = y_train - x_full * beta_hat;
  GcvCurve curve = gcv_error_curve(cache, adjusted, h2_grid, p_used);
  H2Estimate est = detail::estimate_from_curve(std::move(curve), H2Method::GcvTwoset, cache.m, p_used);
  est.dropped_variants = dropped;
  return est;
}

// ---- user-facing entry points (raw genotypes in, estimate out) ----

inline H2Estimate estimate_h2_projection(const RawGenotypeMatrix& geno, const Eigen::VectorXd& y,
                                         const Eigen::MatrixXd* covariates = nullptr,
                                         const EstimateOptions& options = {}) {
  validate_h2_grid(options.h2_grid);
  const Index n = geno.n_samples();
  const Index p = geno.n_variants();
  if (y.size() != n) throw DimensionMismatch("phenotype length does not match sample count");
  const StandardizedMatrix z = standardize_empirical(geno);
  if (covariates == nullptr || covariates->cols() == 0) {
    const SpectralCache cache = gram_spectrum(z);
    if (has_constant_null_eigenvector(cache))
      return gcv_projection_from_cache(cache, y, p, options.h2_grid);
    // n > p (or a degenerate spectrum): fall through to the QR contrast
  }
  const ContrastMatrix c = contrast_from_qr(design_with_covariates(n, covariates));
  const SpectralCache cache = gram_spectrum(z, &c);
  const Eigen::VectorXd y_c = c.c * y;
  GcvCurve curve = gcv_error_curve(cache, y_c, options.h2_grid, p);
  return detail::estimate_from_curve(std::move(curve), H2Method::GcvProjection, cache.m, p);
}

inline H2Estimate estimate_h2_reml(const RawGenotypeMatrix& geno, const Eigen::VectorXd& y,
                                   const Eigen::MatrixXd* covariates = nullptr,
                                   const EstimateOptions& options = {}) {
  validate_h2_grid(options.h2_grid);
  const Index n = geno.n_samples();
  const Index p = geno.n_variants();
  if (y.size() != n) throw DimensionMismatch("phenotype length does not match sample count");
  const StandardizedMatrix z = standardize_empirical(geno);
  if (covariates == nullptr || covariates->cols() == 0) {
    const SpectralCache cache = gram_spectrum(z);
    if (has_constant_null_eigenvector(cache)) return reml_from_cache(cache, y, p, options.h2_grid);
  }
  const ContrastMatrix c = contrast_from_qr(design_with_covariates(n, covariates));
  const SpectralCache cache = gram_spectrum(z, &c);
  const Eigen::VectorXd y_c = c.c * y;
  RemlOptions ropts;
  ropts.coarse_grid = options.h2_grid;
  const RemlFit fit = reml_profile_h2(cache, y_c, p, ropts);
  H2Estimate est;
  est.h2 = fit.h2;
  est.lambda = lambda_from_h2(fit.h2, p);
  est.method = H2Method::Reml;
  est.n_used = cache.m;
  est.p_used = p;
  est.boundary_warning = fit.boundary_warning;
  return est;
}

inline H2Estimate estimate_h2_naive(const RawGenotypeMatrix& geno, const Eigen::VectorXd& y,
                                    const EstimateOptions& options = {}) {
  validate_h2_grid(options.h2_grid);
  if (y.size() != geno.n_samples())
    throw DimensionMismatch("phenotype length does not match sample count");
  const StandardizedMatrix z = standardize_empirical(geno);
  const SpectralCache cache = gram_spectrum(z);
  return gcv_naive_from_cache(cache, y, geno.n_variants(), options.h2_grid);
}

inline H2Estimate estimate_h2_twoset(const RawGenotypeMatrix& train, const Eigen::VectorXd& y_train,
                                     const RawGenotypeMatrix& std_set,
                                     const Eigen::VectorXd& y_std,
                                     const Eigen::MatrixXd* x_train = nullptr,
                                     const Eigen::MatrixXd* x_std = nullptr,
                                     const EstimateOptions& options = {}) {
  validate_h2_grid(options.h2_grid);
  if (std_set.n_samples() < 30)
    throw StandardizationSetTooSmall("standardization set has fewer than 30 samples");
  if (std_set.n_variants() != train.n_variants())
    throw DimensionMismatch("standardization and training sets cover different variants");
  if (y_train.size() != train.n_samples() || y_std.size() != std_set.n_samples())
    throw DimensionMismatch("phenotype length does not match sample count");

  const ExternalStandardization ext = external_params_drop_monomorphic(std_set);
  const RawGenotypeMatrix train_kept = select_columns(train, ext.kept);
  const StandardizedMatrix z = apply_standardization(train_kept, ext.params);
  const SpectralCache cache = gram_spectrum(z);
  const Eigen::VectorXd beta_hat = ols_fixed_effects(y_std, x_std);
  return gcv_twoset_from_cache(cache, y_train, beta_hat, x_train,
                               static_cast<Index>(ext.kept.size()), ext.dropped, options.h2_grid);
}

inline H2Estimate estimate_h2_cv10(const RawGenotypeMatrix& geno, const Eigen::VectorXd& y,
                                   const EstimateOptions& options = {}) {
  validate_h2_grid(options.h2_grid);
  const KfoldPlan plan(geno, options.kfold_k, options.seed);
  GcvCurve curve = plan.curve(y, options.h2_grid, geno.n_variants());
  return detail::estimate_from_curve(std::move(curve), H2Method::Cv10, geno.n_samples(),
                                     geno.n_variants());
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_ESTIMATE_HPP
