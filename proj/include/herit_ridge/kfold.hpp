#ifndef HERIT_RIDGE_KFOLD_HPP
#define HERIT_RIDGE_KFOLD_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/gcv.hpp"
#include "herit_ridge/genotype.hpp"
#include "herit_ridge/rng.hpp"
#include "herit_ridge/spectral.hpp"

namespace heritridge {

struct KfoldOptions {
  // The "true" k-fold: every training split standardizes itself and centers
  // its own phenotype; held-out rows reuse the split's parameters. Disabling
  // both reproduces the shared-standardization LOO when k = n (test hook).
  bool per_fold_standardization = true;
  bool center_y = true;
};

// Fold partition is fixed up front by the seed; fold standardization and the
// per-fold spectra depend only on the genotypes, so one plan serves any number
// of phenotypes. Each penalty then costs O(sum n_tr * n_ho) per phenotype.
class KfoldPlan {
 public:
  KfoldPlan(const RawGenotypeMatrix& raw, int k, std::uint64_t seed, KfoldOptions options = {})
      : n_(raw.n_samples()), options_(options) {
    if (k < 2 || static_cast<Index>(k) > n_) throw OutOfRange("k must lie in [2, n]");

    std::vector<Index> order(static_cast<std::size_t>(n_));
    for (Index i = 0; i < n_; ++i) order[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
    for (Index i = 0; i < n_; ++i)
      folds[static_cast<std::size_t>(i % k)].push_back(order[static_cast<std::size_t>(i)]);
    if (options_.per_fold_standardization) {
      for (const auto& fold : folds)
        if (fold.size() < 2)
          throw FoldTooSmall(
              "a fold has fewer than 2 samples; reduce k or disable per-fold standardization");
    }

    StandardizedMatrix shared;
    if (!options_.per_fold_standardization) shared = standardize_empirical(raw);

    folds_.reserve(folds.size());
    for (const auto& heldout : folds) {
      FoldData fd;
      fd.heldout = heldout;
      std::vector<bool> is_heldout(static_cast<std::size_t>(n_), false);
      for (const Index i : heldout) is_heldout[static_cast<std::size_t>(i)] = true;
      for (Index i = 0; i < n_; ++i)
        if (!is_heldout[static_cast<std::size_t>(i)]) fd.train.push_back(i);

      const Index n_tr = static_cast<Index>(fd.train.size());
      const Index n_ho = static_cast<Index>(fd.heldout.size());
      Eigen::MatrixXd z_tr, z_ho;
      if (options_.per_fold_standardization) {
        // standardize on the training split; columns constant there are dropped
        std::vector<double> means, inv_sds;
        std::vector<Index> kept;
        for (Index j = 0; j < raw.n_variants(); ++j) {
          double sum = 0.0, sumsq = 0.0;
          for (const Index i : fd.train) {
            const double v = static_cast<double>(raw.values(i, j));
            sum += v;
            sumsq += v * v;
          }
          const double mean = sum / static_cast<double>(n_tr);
          const double var = sumsq / static_cast<double>(n_tr) - mean * mean;
          if (var <= 0.0) continue;
          means.push_back(mean);
          inv_sds.push_back(1.0 / std::sqrt(var));
          kept.push_back(j);
        }
        const Index p_kept = static_cast<Index>(kept.size());
        if (p_kept < 1) throw ZeroVarianceColumn(0);
        z_tr.resize(n_tr, p_kept);
        z_ho.resize(n_ho, p_kept);
        for (Index c = 0; c < p_kept; ++c) {
          const Index j = kept[static_cast<std::size_t>(c)];
          const double mean = means[static_cast<std::size_t>(c)];
          const double inv_sd = inv_sds[static_cast<std::size_t>(c)];
          for (Index r = 0; r < n_tr; ++r)
            z_tr(r, c) =
                (static_cast<double>(raw.values(fd.train[static_cast<std::size_t>(r)], j)) - mean) *
                inv_sd;
          for (Index r = 0; r < n_ho; ++r)
            z_ho(r, c) =
                (static_cast<double>(raw.values(fd.heldout[static_cast<std::size_t>(r)], j)) - mean) *
                inv_sd;
        }
      } else {
        z_tr.resize(n_tr, raw.n_variants());
        z_ho.resize(n_ho, raw.n_variants());
        for (Index r = 0; r < n_tr; ++r)
          z_tr.row(r) = shared.z.row(fd.train[static_cast<std::size_t>(r)]);
        for (Index r = 0; r < n_ho; ++r)
          z_ho.row(r) = shared.z.row(fd.heldout[static_cast<std::size_t>(r)]);
      }

      fd.spectrum = spectrum_of_gram(gram_matrix(z_tr));
      fd.cross = z_ho * z_tr.transpose() * fd.spectrum.eigvecs;
      folds_.push_back(std::move(fd));
    }
  }

  // Rotated per-fold phenotypes; reusable across the whole penalty grid.
  struct BoundPhenotype {
    std::vector<Eigen::VectorXd> b;          // U^T centered training phenotype
    std::vector<Eigen::VectorXd> y_heldout;  // raw held-out values
    std::vector<double> intercept;
  };

  BoundPhenotype bind(const Eigen::VectorXd& y) const {
    if (y.size() != n_) throw DimensionMismatch("phenotype length does not match sample count");
    BoundPhenotype bp;
    for (const auto& fd : folds_) {
      Eigen::VectorXd y_tr(static_cast<Index>(fd.train.size()));
      for (Index r = 0; r < y_tr.size(); ++r) y_tr(r) = y(fd.train[static_cast<std::size_t>(r)]);
      double mu = 0.0;
      if (options_.center_y) {
        mu = y_tr.mean();
        y_tr.array() -= mu;
      }
      Eigen::VectorXd y_ho(static_cast<Index>(fd.heldout.size()));
      for (Index r = 0; r < y_ho.size(); ++r) y_ho(r) = y(fd.heldout[static_cast<std::size_t>(r)]);
      bp.b.push_back(fd.spectrum.rotate(y_tr));
      bp.y_heldout.push_back(std::move(y_ho));
      bp.intercept.push_back(mu);
    }
    return bp;
  }

  double error(const BoundPhenotype& bp, double lambda) const {
    if (!(lambda > 0.0)) throw OutOfRange("kfold error requires lambda > 0");
    double sum_sq = 0.0;
    for (std::size_t f = 0; f < folds_.size(); ++f) {
      const auto& fd = folds_[f];
      const Eigen::VectorXd alpha_rot =
          (bp.b[f].array() / (fd.spectrum.eigvals.array() + lambda)).matrix();
      const Eigen::VectorXd pred = fd.cross * alpha_rot;
      for (Index r = 0; r < bp.y_heldout[f].size(); ++r) {
        const double e = bp.y_heldout[f](r) - (pred(r) + bp.intercept[f]);
        sum_sq += e * e;
      }
    }
    return sum_sq / static_cast<double>(n_);
  }

  double error(const Eigen::VectorXd& y, double lambda) const { return error(bind(y), lambda); }

  GcvCurve curve(const Eigen::VectorXd& y, const std::vector<double>& h2_grid, Index p) const {
    validate_h2_grid(h2_grid);
    const BoundPhenotype bp = bind(y);
    GcvCurve out;
    out.method = CurveMethod::Kfold;
    out.h2_grid = h2_grid;
    for (const double h2 : h2_grid) {
      const double lambda = lambda_from_h2(h2, p);
      out.lambda_grid.push_back(lambda);
      out.errors.push_back(error(bp, lambda));
    }
    finalize_curve(out);
    return out;
  }

 private:
  struct FoldData {
    std::vector<Index> train;
    std::vector<Index> heldout;
    SpectralCache spectrum;
    Eigen::MatrixXd cross;  // Z_ho Z_tr^T U
  };

  Index n_;
  KfoldOptions options_;
  std::vector<FoldData> folds_;
};

// One-shot form: partitions samples into k folds by seeded shuffle, fits each
// fold's ridge on its self-standardized training split, scores the held-out
// split, and returns the mean squared held-out error. Deterministic given seed.
inline double kfold_cv_error(const RawGenotypeMatrix& raw, const Eigen::VectorXd& y, double lambda,
                             int k, std::uint64_t seed, KfoldOptions options = {}) {
  return KfoldPlan(raw, k, seed, options).error(y, lambda);
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_KFOLD_HPP
