#ifndef HERIT_RIDGE_SIM_HPP
#define HERIT_RIDGE_SIM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/genotype.hpp"
#include "herit_ridge/rng.hpp"

namespace heritridge {

struct SimConfig {
  Index n = 0;
  Index p = 0;
  double h2_sim = 0.5;
  double f_c = 1.0;  // causal fraction
  int replicates = 1;
  std::uint64_t seed = 1;
  Index standardization_set_size = 1000;
};

// Variant frequencies f_j ~ U[0.05, 0.5], entries Binomial(2, f_j).
inline RawGenotypeMatrix simulate_genotypes(Index n, Index p, std::uint64_t seed) {
  if (n < 2 || p < 1) throw OutOfRange("simulate_genotypes needs n >= 2 and p >= 1");
  Rng rng(seed);
  RawGenotypeMatrix out;
  Eigen::VectorXd freqs(p);
  for (Index j = 0; j < p; ++j) freqs(j) = rng.uniform(0.05, 0.5);
  out.values.resize(n, p);
  for (Index j = 0; j < p; ++j) {
    const double f = freqs(j);
    for (Index i = 0; i < n; ++i)
      out.values(i, j) = static_cast<std::int8_t>(rng.binomial2(f));
  }
  out.true_freqs = std::move(freqs);
  out.sample_ids = default_sample_ids(n);
  out.variant_ids = default_variant_ids(p);
  return out;
}

// Every column duplicated once: p/2 independent base columns, then a copy.
// Used to exercise the effective-number-of-SNPs fit with a known p/p_e = 2.
inline RawGenotypeMatrix simulate_genotypes_duplicated(Index n, Index p, std::uint64_t seed) {
  if (p % 2 != 0) throw OutOfRange("duplicated-column simulation needs an even p");
  RawGenotypeMatrix base = simulate_genotypes(n, p / 2, seed);
  RawGenotypeMatrix out;
  out.values.resize(n, p);
  out.values.leftCols(p / 2) = base.values;
  out.values.rightCols(p / 2) = base.values;
  Eigen::VectorXd freqs(p);
  freqs.head(p / 2) = *base.true_freqs;
  freqs.tail(p / 2) = *base.true_freqs;
  out.true_freqs = std::move(freqs);
  out.sample_ids = std::move(base.sample_ids);
  out.variant_ids = default_variant_ids(p);
  return out;
}

struct PhenotypeSim {
  Eigen::VectorXd y;
  Eigen::VectorXd u_true;  // zero outside the causal set
  Eigen::VectorXd e;
  std::vector<Index> causal_indices;
};

// floor(p f_c) causal variants drawn without replacement, effects
// N(0, h2/(p f_c)), residuals N(0, 1-h2), y = Z u + e. The caller passes the
// standardized matrix the phenotype should be generated from (true-frequency
// standardization in the fully synthetic scenario).
inline PhenotypeSim simulate_phenotype(const StandardizedMatrix& z, double h2_sim, double f_c,
                                       std::uint64_t seed) {
  if (!(h2_sim >= 0.0 && h2_sim < 1.0)) throw OutOfRange("h2_sim must lie in [0,1)");
  if (!(f_c > 0.0 && f_c <= 1.0)) throw OutOfRange("f_c must lie in (0,1]");
  const Index p = z.n_variants();
  const Index n = z.n_samples();
  const auto n_causal = static_cast<Index>(std::floor(static_cast<double>(p) * f_c + 1e-9));
  if (n_causal < 1) throw NoCausalVariants("floor(p * f_c) is zero");

  Rng rng(seed);
  PhenotypeSim out;
  out.causal_indices.reserve(static_cast<std::size_t>(n_causal));
  for (const auto idx : rng.sample_without_replacement(n_causal, p)) out.causal_indices.push_back(idx);
  out.u_true = Eigen::VectorXd::Zero(p);
  if (h2_sim > 0.0) {
    const double tau = h2_sim / (static_cast<double>(p) * f_c);
    const double sd_u = std::sqrt(tau);
    for (const Index idx : out.causal_indices) out.u_true(idx) = rng.normal(0.0, sd_u);
  }
  const double sd_e = std::sqrt(1.0 - h2_sim);
  out.e.resize(n);
  for (Index i = 0; i < n; ++i) out.e(i) = rng.normal(0.0, sd_e);
  out.y = z.z * out.u_true + out.e;
  return out;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_SIM_HPP
