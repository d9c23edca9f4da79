#ifndef HERIT_RIDGE_CSV_HPP
#define HERIT_RIDGE_CSV_HPP

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/genotype.hpp"

namespace heritridge {

// Shortest round-trip representation; identical bytes for identical values,
// which the byte-reproducibility contract of reports and tables relies on.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

// Genotype CSV: header row of variant ids, one row per sample, integer entries
// 0/1/2, '.' for missing. Missing entries are imputed to the rounded column
// mean of observed counts, same convention as the PLINK reader.
inline RawGenotypeMatrix read_genotype_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open genotype CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("genotype CSV is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  RawGenotypeMatrix out;
  out.variant_ids = split_csv_line(line);
  const Index p = static_cast<Index>(out.variant_ids.size());
  if (p < 1) throw Error("genotype CSV has no variant columns");
  std::vector<std::vector<std::int8_t>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Index>(fields.size()) != p)
      throw DimensionMismatch("genotype CSV row " + std::to_string(rows.size() + 1) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(p));
    std::vector<std::int8_t> row(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j) {
      const std::string& f = fields[static_cast<std::size_t>(j)];
      if (f == ".") {
        row[static_cast<std::size_t>(j)] = -1;
      } else if (f == "0" || f == "1" || f == "2") {
        row[static_cast<std::size_t>(j)] = static_cast<std::int8_t>(f[0] - '0');
      } else {
        throw Error("genotype CSV entry '" + f + "' is not 0, 1, 2 or '.'");
      }
    }
    rows.push_back(std::move(row));
  }
  const Index n = static_cast<Index>(rows.size());
  if (n < 1) throw Error("genotype CSV has no sample rows");
  out.values.resize(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j)
      out.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  // mean-impute any missing entries, rounded back into {0,1,2}
  for (Index j = 0; j < p; ++j) {
    long sum = 0;
    Index observed = 0;
    for (Index i = 0; i < n; ++i) {
      if (out.values(i, j) >= 0) {
        sum += out.values(i, j);
        ++observed;
      }
    }
    if (observed == n) continue;
    std::int8_t fill = 0;
    if (observed > 0)
      fill = static_cast<std::int8_t>(std::lround(static_cast<double>(sum) / observed));
    for (Index i = 0; i < n; ++i)
      if (out.values(i, j) < 0) out.values(i, j) = fill;
  }
  out.sample_ids = default_sample_ids(n);
  return out;
}

inline std::string genotype_csv_string(const RawGenotypeMatrix& m) {
  std::string out;
  const Index n = m.n_samples();
  const Index p = m.n_variants();
  const auto& ids = m.variant_ids.empty() ? default_variant_ids(p) : m.variant_ids;
  for (Index j = 0; j < p; ++j) {
    if (j) out += ',';
    out += ids[static_cast<std::size_t>(j)];
  }
  out += '\n';
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (j) out += ',';
      out += static_cast<char>('0' + m.values(i, j));
    }
    out += '\n';
  }
  return out;
}

// Phenotype / covariate CSV: sample_id column plus named numeric columns.
struct NumericTable {
  std::vector<std::string> sample_ids;
  std::vector<std::string> column_names;  // excludes sample_id
  Eigen::MatrixXd values;                 // n x columns
};

inline NumericTable read_numeric_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("CSV is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "sample_id")
    throw Error("CSV must start with a sample_id column followed by named numeric columns: " + path);
  NumericTable out;
  out.column_names.assign(header.begin() + 1, header.end());
  const Index cols = static_cast<Index>(out.column_names.size());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Index>(fields.size()) != cols + 1)
      throw DimensionMismatch("CSV row has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(cols + 1));
    out.sample_ids.push_back(fields[0]);
    std::vector<double> row(static_cast<std::size_t>(cols));
    for (Index c = 0; c < cols; ++c) {
      const std::string& f = fields[static_cast<std::size_t>(c + 1)];
      try {
        row[static_cast<std::size_t>(c)] = std::stod(f);
      } catch (const std::exception&) {
        throw Error("CSV entry '" + f + "' is not numeric");
      }
    }
    rows.push_back(std::move(row));
  }
  const Index n = static_cast<Index>(rows.size());
  out.values.resize(n, cols);
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < cols; ++c)
      out.values(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  return out;
}

inline std::string numeric_table_csv_string(const NumericTable& table) {
  std::string out = "sample_id";
  for (const auto& name : table.column_names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (Index i = 0; i < table.values.rows(); ++i) {
    out += table.sample_ids[static_cast<std::size_t>(i)];
    for (Index c = 0; c < table.values.cols(); ++c) {
      out += ',';
      out += format_double(table.values(i, c));
    }
    out += '\n';
  }
  return out;
}

// Frequency CSV: header "variant_id,freq", one row per variant.
inline Eigen::VectorXd read_frequency_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open frequency CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("frequency CSV is empty: " + path);
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw Error("frequency CSV rows must be variant_id,freq");
    try {
      values.push_back(std::stod(fields[1]));
    } catch (const std::exception&) {
      throw Error("frequency CSV entry '" + fields[1] + "' is not numeric");
    }
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
}

// Aligns a phenotype/covariate table to the genotype sample order. Ids are
// matched when both sides carry real ids; otherwise row order is used.
inline std::vector<Index> align_samples(const std::vector<std::string>& geno_ids,
                                        const std::vector<std::string>& table_ids) {
  if (geno_ids.size() != table_ids.size())
    throw DimensionMismatch("sample counts differ: genotypes " + std::to_string(geno_ids.size()) +
                            ", table " + std::to_string(table_ids.size()));
  std::vector<Index> order(table_ids.size());
  bool direct = true;
  for (std::size_t i = 0; i < geno_ids.size(); ++i)
    if (geno_ids[i] != table_ids[i]) {
      direct = false;
      break;
    }
  if (direct) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
    return order;
  }
  for (std::size_t i = 0; i < geno_ids.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < table_ids.size(); ++j) {
      if (table_ids[j] == geno_ids[i]) {
        order[i] = static_cast<Index>(j);
        found = true;
        break;
      }
    }
    if (!found) throw DimensionMismatch("sample id '" + geno_ids[i] + "' missing from table");
  }
  return order;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_CSV_HPP
