#ifndef HERIT_RIDGE_GENOTYPE_HPP
#define HERIT_RIDGE_GENOTYPE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "herit_ridge/errors.hpp"

namespace heritridge {

using Index = Eigen::Index;
using GenotypeValues = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

// n x p allele-count matrix, entries in {0,1,2}. true_freqs is set for
// synthetic data simulated from known variant frequencies.
struct RawGenotypeMatrix {
  GenotypeValues values;
  std::vector<std::string> variant_ids;
  std::vector<std::string> sample_ids;
  std::optional<Eigen::VectorXd> true_freqs;

  Index n_samples() const { return values.rows(); }
  Index n_variants() const { return values.cols(); }
};

inline std::vector<std::string> default_sample_ids(Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i + 1));
  return ids;
}

inline std::vector<std::string> default_variant_ids(Index p) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) ids.push_back("v" + std::to_string(j + 1));
  return ids;
}

enum class StandardizationSource { EmpiricalOnSelf, ExternalSet, TrueFrequencies };

inline const char* to_string(StandardizationSource s) {
  switch (s) {
    case StandardizationSource::EmpiricalOnSelf: return "empirical-on-self";
    case StandardizationSource::ExternalSet: return "external-set";
    case StandardizationSource::TrueFrequencies: return "true-frequencies";
  }
  return "?";
}

struct StandardizationParams {
  Eigen::VectorXd means;
  Eigen::VectorXd sds;  // strictly positive
  StandardizationSource source = StandardizationSource::EmpiricalOnSelf;

  Index size() const { return means.size(); }
};

struct StandardizedMatrix {
  Eigen::MatrixXd z;
  StandardizationParams params;
  bool empirically_centered_on_self = false;

  Index n_samples() const { return z.rows(); }
  Index n_variants() const { return z.cols(); }
};

// Column variance is the population variance (divide by n), so that
// tr(Z Z^T) = n * p after empirical standardization.
inline StandardizationParams empirical_params(const RawGenotypeMatrix& m) {
  const Index n = m.n_samples();
  const Index p = m.n_variants();
  if (n < 2 || p < 1) throw DimensionMismatch("need n >= 2 and p >= 1 to standardize");
  StandardizationParams out;
  out.means.resize(p);
  out.sds.resize(p);
  out.source = StandardizationSource::EmpiricalOnSelf;
  for (Index j = 0; j < p; ++j) {
    double sum = 0.0, sumsq = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double v = static_cast<double>(m.values(i, j));
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;
    if (var <= 0.0) throw ZeroVarianceColumn(j);
    out.means(j) = mean;
    out.sds(j) = std::sqrt(var);
  }
  return out;
}

// mean = 2 f, sd = sqrt(2 f (1-f)) for allele counts Binomial(2, f).
inline StandardizationParams params_from_frequencies(const Eigen::VectorXd& freqs) {
  StandardizationParams out;
  out.means.resize(freqs.size());
  out.sds.resize(freqs.size());
  out.source = StandardizationSource::TrueFrequencies;
  for (Index j = 0; j < freqs.size(); ++j) {
    const double f = freqs(j);
    if (!(f > 0.0 && f < 1.0)) throw OutOfRange("variant frequency must lie in (0,1)");
    out.means(j) = 2.0 * f;
    out.sds(j) = std::sqrt(2.0 * f * (1.0 - f));
  }
  return out;
}

inline StandardizedMatrix apply_standardization(const RawGenotypeMatrix& m,
                                                const StandardizationParams& params) {
  const Index n = m.n_samples();
  const Index p = m.n_variants();
  if (params.size() != p)
    throw DimensionMismatch("standardization params cover " + std::to_string(params.size()) +
                            " variants, genotype matrix has " + std::to_string(p));
  for (Index j = 0; j < p; ++j)
    if (!(params.sds(j) > 0.0)) throw NonPositiveSd(j);
  StandardizedMatrix out;
  out.params = params;
  out.empirically_centered_on_self = false;
  out.z.resize(n, p);
  for (Index j = 0; j < p; ++j) {
    const double mean = params.means(j);
    const double inv_sd = 1.0 / params.sds(j);
    for (Index i = 0; i < n; ++i)
      out.z(i, j) = (static_cast<double>(m.values(i, j)) - mean) * inv_sd;
  }
  return out;
}

inline StandardizedMatrix standardize_empirical(const RawGenotypeMatrix& m) {
  StandardizedMatrix out = apply_standardization(m, empirical_params(m));
  out.empirically_centered_on_self = true;
  return out;
}

inline StandardizedMatrix standardize_true_frequencies(const RawGenotypeMatrix& m) {
  if (!m.true_freqs) throw Error("genotype matrix carries no true frequencies");
  return apply_standardization(m, params_from_frequencies(*m.true_freqs));
}

// Two-set standardization: variants monomorphic in the standardization set are
// dropped (their sd is undefined there); `kept` maps surviving columns back to
// the original variant indices.
struct ExternalStandardization {
  StandardizationParams params;
  std::vector<Index> kept;
  Index dropped = 0;
};

inline ExternalStandardization external_params_drop_monomorphic(const RawGenotypeMatrix& std_set) {
  const Index n = std_set.n_samples();
  const Index p = std_set.n_variants();
  if (n < 2) throw DimensionMismatch("standardization set needs at least 2 samples");
  std::vector<double> means, sds;
  ExternalStandardization out;
  for (Index j = 0; j < p; ++j) {
    double sum = 0.0, sumsq = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double v = static_cast<double>(std_set.values(i, j));
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;
    if (var <= 0.0) {
      ++out.dropped;
      continue;
    }
    means.push_back(mean);
    sds.push_back(std::sqrt(var));
    out.kept.push_back(j);
  }
  out.params.means = Eigen::Map<Eigen::VectorXd>(means.data(), static_cast<Index>(means.size()));
  out.params.sds = Eigen::Map<Eigen::VectorXd>(sds.data(), static_cast<Index>(sds.size()));
  out.params.source = StandardizationSource::ExternalSet;
  return out;
}

inline RawGenotypeMatrix select_columns(const RawGenotypeMatrix& m, const std::vector<Index>& cols) {
  RawGenotypeMatrix out;
  out.values.resize(m.n_samples(), static_cast<Index>(cols.size()));
  out.variant_ids.reserve(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.values.col(static_cast<Index>(c)) = m.values.col(cols[c]);
    if (!m.variant_ids.empty()) out.variant_ids.push_back(m.variant_ids[static_cast<std::size_t>(cols[c])]);
  }
  out.sample_ids = m.sample_ids;
  if (m.true_freqs) {
    Eigen::VectorXd f(static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) f(static_cast<Index>(c)) = (*m.true_freqs)(cols[c]);
    out.true_freqs = std::move(f);
  }
  return out;
}

// Leading-rows / leading-columns sub-matrix, used by the experiment harness to
// carve smaller cells out of one large simulated matrix.
inline RawGenotypeMatrix carve(const RawGenotypeMatrix& m, Index row_begin, Index n, Index p) {
  if (row_begin + n > m.n_samples() || p > m.n_variants())
    throw DimensionMismatch("carve: requested block exceeds source matrix");
  RawGenotypeMatrix out;
  out.values = m.values.block(row_begin, 0, n, p);
  if (!m.sample_ids.empty())
    out.sample_ids.assign(m.sample_ids.begin() + row_begin, m.sample_ids.begin() + row_begin + n);
  if (!m.variant_ids.empty())
    out.variant_ids.assign(m.variant_ids.begin(), m.variant_ids.begin() + p);
  if (m.true_freqs) out.true_freqs = m.true_freqs->head(p);
  return out;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_GENOTYPE_HPP
