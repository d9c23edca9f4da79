#ifndef HERIT_RIDGE_THEORY_HPP
#define HERIT_RIDGE_THEORY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "herit_ridge/errors.hpp"

namespace heritridge {
namespace theory {

inline void check_args(double n, double p, double h2) {
  if (!(n >= 1.0 && p >= 1.0)) throw OutOfRange("n and p must be >= 1");
  if (!(h2 > 0.0 && h2 < 1.0)) throw OutOfRange("h2 must lie in (0,1)");
}

// Expected test-set MSE under unit total variance, at lambda = p (1-h2)/h2:
//   p >= n :  1 - (n/p) h2^2
//   n >  p :  (1-h2) (1 + (n/p) h2) / (1 + h2 (n/p - 1))
// Both branches meet at n = p.
inline double test_mse(double n, double p, double h2) {
  check_args(n, p, h2);
  const double r = n / p;
  if (p >= n) return 1.0 - r * h2 * h2;
  return (1.0 - h2) * (1.0 + r * h2) / (1.0 + h2 * (r - 1.0));
}

// Expected training-set MSE; constant (1-h2)^2 in the high-dimensional regime.
inline double train_mse(double n, double p, double h2) {
  check_args(n, p, h2);
  if (p > n) return (1.0 - h2) * (1.0 - h2);
  const double lambda = p * (1.0 - h2) / h2;
  const double a = n / (n + lambda);
  const double c = (p / n) * (1.0 - h2) + h2;
  return 1.0 - 2.0 * a * c + a * a * c;
}

// Expected squared correlation between phenotype and prediction:
//   n <  p :  (n/p) h2^2
//   n >= p :  h2^2 / ((p/n)(1-h2) + h2)
inline double corr2(double n, double p, double h2) {
  check_args(n, p, h2);
  if (n < p) return (n / p) * h2 * h2;
  return h2 * h2 / ((p / n) * (1.0 - h2) + h2);
}

// The three prediction-error terms in the p >= n regime; they sum exactly to
// test_mse there (appendix identity).
inline double irreducible_term(double h2) { return 1.0 - h2; }

inline double variance_term(double n, double p, double h2) {
  return (1.0 - h2) * h2 * h2 * (n / p);
}

inline double bias_term(double n, double p, double h2) {
  return h2 * (1.0 + (n / p) * (h2 * h2 - 2.0 * h2));
}

enum class Regime { HighDim, LowDim };

struct TheoryPoint {
  double n = 0.0;
  double p = 0.0;
  double h2 = 0.0;
  double test_mse = 0.0;
  double train_mse = 0.0;
  double corr2 = 0.0;
  Regime regime = Regime::HighDim;
};

inline TheoryPoint point(double n, double p, double h2) {
  TheoryPoint t;
  t.n = n;
  t.p = p;
  t.h2 = h2;
  t.test_mse = test_mse(n, p, h2);
  t.train_mse = train_mse(n, p, h2);
  t.corr2 = corr2(n, p, h2);
  t.regime = p >= n ? Regime::HighDim : Regime::LowDim;
  return t;
}

}  // namespace theory

// One prediction-campaign observation in the p > n regime.
struct EffectiveRatioObservation {
  double n = 0.0;
  double p = 0.0;
  double normalized_test_mse = 0.0;
};

// Through-origin fit of estimated n/p_e against true n/p; the slope is p/p_e.
struct EffectiveRatioFit {
  double ratio_p_over_pe = 0.0;
  std::vector<std::pair<double, double>> per_n_estimates;  // (n, estimated n/p_e)
  double r2_of_fit = 0.0;
  std::int64_t dropped = 0;  // observations with mse >= 1 (inversion undefined)
  std::int64_t clipped = 0;  // observations below the irreducible error
};

// Inverts 1 - (n/p_e) h2^2 = observed_mse per observation, then regresses the
// estimates against the true n/p through the origin (n/p_e = 0 must map to
// n/p = 0, so no intercept).
inline EffectiveRatioFit fit_effective_ratio(const std::vector<EffectiveRatioObservation>& obs,
                                             double h2) {
  if (!(h2 > 0.0 && h2 < 1.0)) throw OutOfRange("h2 must lie in (0,1)");
  EffectiveRatioFit fit;
  const double h4 = h2 * h2;
  std::vector<double> xs, ys;
  for (const auto& o : obs) {
    if (!(o.p > o.n)) throw OutOfRange("effective-ratio observations must have p > n");
    double mse = o.normalized_test_mse;
    if (mse >= 1.0) {
      ++fit.dropped;
      continue;
    }
    if (mse < 1.0 - h2) {
      mse = 1.0 - h2;
      ++fit.clipped;
    }
    const double n_over_pe = (1.0 - mse) / h4;
    xs.push_back(o.n / o.p);
    ys.push_back(n_over_pe);
    fit.per_n_estimates.emplace_back(o.n, n_over_pe);
  }
  if (xs.empty())
    throw InvalidInversion("every observation had mse >= 1; cannot estimate the effective ratio");
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
    syy += ys[i] * ys[i];
  }
  if (!(sxx > 0.0)) throw InvalidInversion("degenerate n/p values in observations");
  fit.ratio_p_over_pe = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.ratio_p_over_pe * xs[i];
    ss_res += r * r;
  }
  fit.r2_of_fit = syy > 0.0 ? 1.0 - ss_res / syy : 0.0;
  return fit;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_THEORY_HPP
