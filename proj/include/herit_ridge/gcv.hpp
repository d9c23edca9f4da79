#ifndef HERIT_RIDGE_GCV_HPP
#define HERIT_RIDGE_GCV_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/ridge.hpp"
#include "herit_ridge/spectral.hpp"

namespace heritridge {

enum class CurveMethod { Gcv, LooExact, Kfold };

inline const char* to_string(CurveMethod m) {
  switch (m) {
    case CurveMethod::Gcv: return "gcv";
    case CurveMethod::LooExact: return "loo-exact";
    case CurveMethod::Kfold: return "kfold";
  }
  return "?";
}

// Error-vs-heritability curve over the Eq.-style grid lambda = p (1-h2)/h2.
struct GcvCurve {
  std::vector<double> h2_grid;
  std::vector<double> lambda_grid;
  std::vector<double> errors;
  CurveMethod method = CurveMethod::Gcv;
  std::size_t argmin_index = 0;
  double argmin_h2 = 0.0;
  bool boundary_warning = false;
};

inline std::vector<double> default_h2_grid() {
  std::vector<double> grid;
  grid.reserve(99);
  for (int k = 1; k <= 99; ++k) grid.push_back(static_cast<double>(k) / 100.0);
  return grid;
}

inline std::vector<double> h2_grid_range(double lo, double hi, double step) {
  if (!(lo > 0.0 && hi < 1.0 && lo <= hi && step > 0.0))
    throw OutOfRange("h2 grid must satisfy 0 < lo <= hi < 1 with step > 0");
  std::vector<double> grid;
  for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(std::min(v, hi));
  return grid;
}

inline void validate_h2_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw OutOfRange("h2 grid is empty");
  double prev = 0.0;
  for (const double v : grid) {
    if (!(v > 0.0 && v < 1.0)) throw OutOfRange("h2 grid values must lie in (0,1)");
    if (v <= prev) throw OutOfRange("h2 grid must be strictly ascending");
    prev = v;
  }
}

// GCV error at one penalty from the rotated phenotype b = U^T y:
//   err = (1/m) sum_k b_k^2 (lambda/(d_k^2+lambda))^2
//         / [(1/m) sum_k lambda/(d_k^2+lambda)]^2.
// The 1/m on the numerator follows the supplementary derivation, so the
// lambda -> infinity limit equals the mean squared phenotype.
inline double gcv_error_from_rotated(const Eigen::VectorXd& eigvals, const Eigen::VectorXd& b,
                                     double lambda) {
  const Index m = eigvals.size();
  if (b.size() != m) throw DimensionMismatch("rotated phenotype does not match eigenvalue count");
  double num = 0.0, tr = 0.0;
  for (Index k = 0; k < m; ++k) {
    const double shrink = lambda / (eigvals(k) + lambda);
    num += b(k) * b(k) * shrink * shrink;
    tr += shrink;
  }
  const double dm = static_cast<double>(m);
  const double denom = tr / dm;
  return (num / dm) / (denom * denom);
}

// Picks the argmin; ties go to the smallest h2 (the more regularized model).
inline void finalize_curve(GcvCurve& curve) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.errors.size(); ++i)
    if (curve.errors[i] < curve.errors[best]) best = i;
  curve.argmin_index = best;
  curve.argmin_h2 = curve.h2_grid[best];
  curve.boundary_warning = (best == 0 || best + 1 == curve.errors.size());
}

inline GcvCurve gcv_curve_from_rotated(const Eigen::VectorXd& eigvals, const Eigen::VectorXd& b,
                                       const std::vector<double>& h2_grid, Index p) {
  validate_h2_grid(h2_grid);
  GcvCurve curve;
  curve.method = CurveMethod::Gcv;
  curve.h2_grid = h2_grid;
  curve.lambda_grid.reserve(h2_grid.size());
  curve.errors.reserve(h2_grid.size());
  for (const double h2 : h2_grid) {
    const double lambda = lambda_from_h2(h2, p);
    curve.lambda_grid.push_back(lambda);
    curve.errors.push_back(gcv_error_from_rotated(eigvals, b, lambda));
  }
  finalize_curve(curve);
  return curve;
}

inline GcvCurve gcv_error_curve(const SpectralCache& cache, const Eigen::VectorXd& y_contrasted,
                                const std::vector<double>& h2_grid, Index p) {
  if (y_contrasted.size() != cache.m)
    throw DimensionMismatch("contrasted phenotype length does not match cache dimension");
  const Eigen::VectorXd b = cache.rotate(y_contrasted);
  return gcv_curve_from_rotated(cache.eigvals, b, h2_grid, p);
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_GCV_HPP
