#ifndef HERIT_RIDGE_RIDGE_HPP
#define HERIT_RIDGE_RIDGE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/genotype.hpp"
#include "herit_ridge/spectral.hpp"

namespace heritridge {

// h2 = p / (p + lambda)  <=>  lambda = p (1 - h2) / h2
inline double lambda_from_h2(double h2, Index p) {
  if (!(h2 > 0.0 && h2 < 1.0)) throw OutOfRange("h2 must lie in (0,1)");
  if (p < 1) throw OutOfRange("p must be >= 1");
  return static_cast<double>(p) * (1.0 - h2) / h2;
}

inline double h2_from_lambda(double lambda, Index p) {
  if (!(lambda > 0.0)) throw OutOfRange("lambda must be > 0");
  if (p < 1) throw OutOfRange("p must be >= 1");
  return static_cast<double>(p) / (static_cast<double>(p) + lambda);
}

enum class RidgeForm { Dual, Primal };

struct RidgeSolution {
  Eigen::VectorXd u_hat;
  double lambda = 0.0;
  RidgeForm fitted_via = RidgeForm::Dual;
};

// Dual form Z^T (Z Z^T + lambda I_n)^{-1} y when p > n, primal otherwise.
// A SpectralCache of Z Z^T short-circuits the dual solve.
inline RidgeSolution ridge_fit(const StandardizedMatrix& z, const Eigen::VectorXd& y,
                               double lambda, const SpectralCache* cache = nullptr) {
  const Index n = z.n_samples();
  const Index p = z.n_variants();
  if (y.size() != n) throw DimensionMismatch("phenotype length does not match sample count");
  if (!(lambda > 0.0)) throw OutOfRange("ridge_fit requires lambda > 0");
  RidgeSolution out;
  out.lambda = lambda;
  if (p > n) {
    out.fitted_via = RidgeForm::Dual;
    Eigen::VectorXd alpha;
    if (cache != nullptr) {
      if (cache->m != n) throw DimensionMismatch("spectral cache dimension does not match data");
      const Eigen::VectorXd b = cache->rotate(y);
      alpha = cache->eigvecs * (b.array() / (cache->eigvals.array() + lambda)).matrix();
    } else {
      Eigen::MatrixXd g = gram_matrix(z.z);
      g.diagonal().array() += lambda;
      alpha = Eigen::LLT<Eigen::MatrixXd>(g).solve(y);
    }
    out.u_hat = z.z.transpose() * alpha;
  } else {
    out.fitted_via = RidgeForm::Primal;
    Eigen::MatrixXd gtg = Eigen::MatrixXd::Zero(p, p);
    gtg.selfadjointView<Eigen::Lower>().rankUpdate(z.z.transpose());
    gtg.diagonal().array() += lambda;
    // LLT reads the lower triangle only
    out.u_hat = Eigen::LLT<Eigen::MatrixXd>(gtg).solve(z.z.transpose() * y);
  }
  return out;
}

// Dense H_lambda = Z Z^T (Z Z^T + lambda I)^{-1}; for small-instance checks.
inline Eigen::MatrixXd hat_matrix(const StandardizedMatrix& z, double lambda) {
  Eigen::MatrixXd g = gram_matrix(z.z);
  Eigen::MatrixXd shifted = g;
  shifted.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) throw SingularSystem("Z Z^T + lambda I is not positive definite");
  return llt.solve(g).transpose();
}

// Exact leave-one-out error via the hat diagonal (Sherman-Morrison route):
// err = (1/n) sum_i ((y_i - yhat_i) / (1 - h_ii))^2.
// Equals refit-per-fold LOO under shared standardization exactly.
inline double loo_error_exact(const StandardizedMatrix& z, const Eigen::VectorXd& y,
                              double lambda) {
  const Index n = z.n_samples();
  if (y.size() != n) throw DimensionMismatch("phenotype length does not match sample count");
  if (!(lambda > 0.0)) throw OutOfRange("loo_error_exact requires lambda > 0");
  Eigen::MatrixXd g = gram_matrix(z.z);
  Eigen::MatrixXd shifted = g;
  shifted.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) throw SingularSystem("Z Z^T + lambda I is not positive definite");
  const Eigen::VectorXd alpha = llt.solve(y);
  const Eigen::VectorXd fitted = g * alpha;
  const Eigen::MatrixXd hinv_g = llt.solve(g);
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double hii = hinv_g(i, i);
    if (hii >= 1.0 - 1e-12) throw HatDiagonalOne(i);
    const double r = (y(i) - fitted(i)) / (1.0 - hii);
    acc += r * r;
  }
  return acc / static_cast<double>(n);
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_RIDGE_HPP
