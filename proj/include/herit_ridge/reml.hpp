#ifndef HERIT_RIDGE_REML_HPP
#define HERIT_RIDGE_REML_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/gcv.hpp"
#include "herit_ridge/ridge.hpp"
#include "herit_ridge/spectral.hpp"

namespace heritridge {

struct RemlOptions {
  double lower = 1e-4;
  double upper = 1.0 - 1e-4;
  double tol = 1e-5;  // |delta h2| convergence
  int max_iterations = 200;
  std::vector<double> coarse_grid = default_h2_grid();
};

struct RemlFit {
  double h2 = 0.0;
  double tau = 0.0;
  double sigma2 = 0.0;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = true;
  bool boundary_warning = false;
};

// Restricted log-likelihood of the contrasted model y_c ~ N(0, tau K + s2 I)
// written through the spectrum of K: eigenvalues d2, b = U^T y_c.
inline double reml_loglik(const Eigen::VectorXd& eigvals, const Eigen::VectorXd& b, double tau,
                          double sigma2) {
  if (b.size() != eigvals.size()) throw DimensionMismatch("b length does not match eigenvalues");
  if (!(sigma2 > 0.0) || tau < 0.0) throw OutOfRange("need sigma2 > 0 and tau >= 0");
  const Index m = eigvals.size();
  double logdet = 0.0, quad = 0.0;
  for (Index k = 0; k < m; ++k) {
    const double v = tau * eigvals(k) + sigma2;
    logdet += std::log(v);
    quad += b(k) * b(k) / v;
  }
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  return -0.5 * (static_cast<double>(m) * kLog2Pi + logdet + quad);
}

namespace detail {

// Profiled criterion: with lambda = p (1-h2)/h2 and sigma2 profiled out
// analytically, up to constants the negative restricted log-likelihood is
//   m log(S(lambda)/m) + sum_k log((d_k^2+lambda)/lambda),
// with S(lambda) = sum_k b_k^2 lambda/(d_k^2+lambda).
struct RemlProfile {
  const Eigen::VectorXd& eigvals;
  const Eigen::VectorXd& b;
  Index p;

  double sigma2_hat(double lambda) const {
    double s = 0.0;
    for (Index k = 0; k < eigvals.size(); ++k)
      s += b(k) * b(k) * lambda / (eigvals(k) + lambda);
    return s / static_cast<double>(eigvals.size());
  }

  double negloglik(double h2) const {
    const double lambda = lambda_from_h2(h2, p);
    const double m = static_cast<double>(eigvals.size());
    double s = 0.0, logdet = 0.0;
    for (Index k = 0; k < eigvals.size(); ++k) {
      s += b(k) * b(k) * lambda / (eigvals(k) + lambda);
      logdet += std::log((eigvals(k) + lambda) / lambda);
    }
    return m * std::log(s / m) + logdet;
  }
};

}  // namespace detail

inline RemlFit reml_profile_from_rotated(const Eigen::VectorXd& eigvals, const Eigen::VectorXd& b,
                                         Index p, const RemlOptions& options = {}) {
  if (b.size() != eigvals.size()) throw DimensionMismatch("b length does not match eigenvalues");
  if (p < 1) throw OutOfRange("p must be >= 1");
  const detail::RemlProfile profile{eigvals, b, p};

  // coarse bracket over the grid (plus the search bounds themselves)
  std::vector<double> grid;
  grid.push_back(options.lower);
  for (const double g : options.coarse_grid)
    if (g > options.lower && g < options.upper) grid.push_back(g);
  grid.push_back(options.upper);

  std::size_t best = 0;
  double best_f = profile.negloglik(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double f = profile.negloglik(grid[i]);
    if (f < best_f) {
      best_f = f;
      best = i;
    }
  }
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[best + 1 >= grid.size() ? grid.size() - 1 : best + 1];

  // golden-section refinement
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo, c = hi;
  double x1 = c - kInvPhi * (c - a);
  double x2 = a + kInvPhi * (c - a);
  double f1 = profile.negloglik(x1);
  double f2 = profile.negloglik(x2);
  int iterations = 0;
  bool converged = false;
  while (iterations < options.max_iterations) {
    ++iterations;
    if (f1 <= f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - kInvPhi * (c - a);
      f1 = profile.negloglik(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (c - a);
      f2 = profile.negloglik(x2);
    }
    if (c - a < options.tol) {
      converged = true;
      break;
    }
  }

  RemlFit fit;
  fit.h2 = f1 <= f2 ? x1 : x2;
  if (profile.negloglik(grid[best]) < profile.negloglik(fit.h2)) fit.h2 = grid[best];
  fit.iterations = iterations;
  fit.converged = converged;
  const double lambda = lambda_from_h2(fit.h2, p);
  fit.sigma2 = profile.sigma2_hat(lambda);
  fit.tau = fit.sigma2 / lambda;
  fit.loglik = reml_loglik(eigvals, b, fit.tau, fit.sigma2);
  fit.boundary_warning =
      fit.h2 <= options.lower + options.tol || fit.h2 >= options.upper - options.tol;
  return fit;
}

inline RemlFit reml_profile_h2(const SpectralCache& contrasted_cache,
                               const Eigen::VectorXd& y_contrasted, Index p,
                               const RemlOptions& options = {}) {
  const Eigen::VectorXd b = contrasted_cache.rotate(y_contrasted);
  return reml_profile_from_rotated(contrasted_cache.eigvals, b, p, options);
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_REML_HPP
