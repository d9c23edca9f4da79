#ifndef HERIT_RIDGE_SPECTRAL_HPP
#define HERIT_RIDGE_SPECTRAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/genotype.hpp"

namespace heritridge {

enum class ContrastMethod { SvdConstantVector, Qr };

inline const char* to_string(ContrastMethod m) {
  return m == ContrastMethod::SvdConstantVector ? "svd-constant-vector" : "qr";
}

// Semi-orthogonal (n-r-1) x n matrix with C C^T = I annihilating the intercept
// column (and covariates, QR route). Left-multiplying the model by C removes
// the non-penalized effects before GCV / REML.
struct ContrastMatrix {
  Eigen::MatrixXd c;
  ContrastMethod method = ContrastMethod::Qr;

  Index rows() const { return c.rows(); }
  Index cols() const { return c.cols(); }
};

// Eigendecomposition of Z Z^T (or of the contrasted Gram C Z Z^T C^T).
// This is the single O(n^2 p + n^3) factorization; GCV, exact LOO and REML all
// reuse it, evaluating each penalty in O(m).
struct SpectralCache {
  Eigen::VectorXd eigvals;  // descending, >= 0 after clamping
  Eigen::MatrixXd eigvecs;  // columns match eigvals
  Index m = 0;
  double trace = 0.0;

  Eigen::VectorXd rotate(const Eigen::VectorXd& y) const {
    if (y.size() != m) throw DimensionMismatch("rotate: vector length does not match cache dimension");
    return eigvecs.transpose() * y;
  }
};

inline Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(z.rows(), z.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(z);
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

// Eigenvalues below 1e-8 * tr(G) are snapped to exactly 0 so that the
// null-eigenvector test stays robust against eigensolver round-off.
inline SpectralCache spectrum_of_gram(const Eigen::MatrixXd& gram) {
  if (gram.rows() != gram.cols()) throw DimensionMismatch("gram matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigendecomposition did not converge");
  const Index m = gram.rows();
  const double raw_trace = gram.trace();
  const double clamp_below = 1e-8 * std::abs(raw_trace);
  SpectralCache cache;
  cache.m = m;
  cache.eigvals.resize(m);
  cache.eigvecs.resize(m, m);
  // Eigen returns ascending order; store descending.
  for (Index k = 0; k < m; ++k) {
    double v = solver.eigenvalues()(m - 1 - k);
    if (v < clamp_below) v = 0.0;
    cache.eigvals(k) = v;
    cache.eigvecs.col(k) = solver.eigenvectors().col(m - 1 - k);
  }
  cache.trace = cache.eigvals.sum();
  return cache;
}

inline SpectralCache gram_spectrum(const StandardizedMatrix& z,
                                   const ContrastMatrix* contrast = nullptr) {
  if (contrast == nullptr) return spectrum_of_gram(gram_matrix(z.z));
  if (contrast->cols() != z.n_samples())
    throw DimensionMismatch("contrast has " + std::to_string(contrast->cols()) +
                            " columns, matrix has " + std::to_string(z.n_samples()) + " rows");
  const Eigen::MatrixXd cz = contrast->c * z.z;
  return spectrum_of_gram(gram_matrix(cz));
}

// The paper's high-dimensional degeneracy marker: after empirical centering
// with p >= n the Gram has a null eigenvalue whose eigenvector is constant.
inline bool has_constant_null_eigenvector(const SpectralCache& cache) {
  if (cache.m < 2) return false;
  if (cache.eigvals(cache.m - 1) != 0.0) return false;
  if (cache.eigvals(cache.m - 2) == 0.0) return false;  // multiple null dims: basis arbitrary
  const Eigen::VectorXd v = cache.eigvecs.col(cache.m - 1);
  const double mean = v.mean();
  const double dev = (v.array() - mean).abs().maxCoeff();
  return dev < 1e-6 * v.norm();
}

// Contrast from the spectral route (intercept-only case): keep the n-1 leading
// eigenvector directions, drop the constant null one. The contrasted Gram is
// then diagonal in this basis, which makes the GCV grid evaluation trivial.
inline ContrastMatrix contrast_from_svd(const SpectralCache& cache) {
  if (!has_constant_null_eigenvector(cache))
    throw NoConstantNullEigenvector(
        "smallest eigenvalue is not a simple null with constant eigenvector; "
        "use the QR route (covariates present or n > p)");
  ContrastMatrix out;
  out.method = ContrastMethod::SvdConstantVector;
  out.c = cache.eigvecs.leftCols(cache.m - 1).transpose();
  return out;
}

// Contrast from the QR route: Q2^T annihilates the full fixed-effect design
// X_full = [1 X]. Works with any covariate count, including n > p.
inline ContrastMatrix contrast_from_qr(const Eigen::MatrixXd& x_full) {
  const Index n = x_full.rows();
  const Index q = x_full.cols();
  if (q >= n) throw DimensionMismatch("fixed-effect design must have fewer columns than rows");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(x_full);
  if (rank_check.rank() < q)
    throw RankDeficientCovariates("fixed-effect design is rank deficient (duplicated covariate?)");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x_full);
  const Eigen::MatrixXd q_full = qr.householderQ();
  ContrastMatrix out;
  out.method = ContrastMethod::Qr;
  out.c = q_full.rightCols(n - q).transpose();
  return out;
}

inline Eigen::MatrixXd intercept_only_design(Index n) { return Eigen::MatrixXd::Ones(n, 1); }

inline Eigen::MatrixXd design_with_covariates(Index n, const Eigen::MatrixXd* covariates) {
  if (covariates == nullptr || covariates->cols() == 0) return intercept_only_design(n);
  if (covariates->rows() != n) throw DimensionMismatch("covariate rows do not match sample count");
  Eigen::MatrixXd x(n, covariates->cols() + 1);
  x.col(0).setOnes();
  x.rightCols(covariates->cols()) = *covariates;
  return x;
}

// Least-squares effects of [1 X] on y; beta_hat(0) is the intercept.
inline Eigen::VectorXd ols_fixed_effects(const Eigen::VectorXd& y,
                                         const Eigen::MatrixXd* covariates = nullptr) {
  const Eigen::MatrixXd x = design_with_covariates(y.size(), covariates);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) throw RankDeficientCovariates("fixed-effect design is rank deficient");
  return qr.solve(y);
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_SPECTRAL_HPP
