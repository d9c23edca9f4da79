#ifndef HERIT_RIDGE_PLINK_HPP
#define HERIT_RIDGE_PLINK_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "herit_ridge/errors.hpp"
#include "herit_ridge/genotype.hpp"

namespace heritridge {

namespace detail {

inline std::vector<std::vector<std::string>> read_whitespace_table(const std::string& path,
                                                                   const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(std::string("cannot open ") + what + " file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (ss >> field) fields.push_back(field);
    if (!fields.empty()) rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace detail

// PLINK 1 binary trio, SNP-major. Two-bit codes per sample, least significant
// bits first within each byte: 00 -> 2 copies of A1, 10 -> 1, 11 -> 0,
// 01 -> missing. Missing entries are imputed to the rounded column mean of the
// observed allele counts so that every stored entry stays in {0,1,2}.
inline RawGenotypeMatrix read_plink_bed(const std::string& bed_path, const std::string& bim_path,
                                        const std::string& fam_path) {
  const auto fam = detail::read_whitespace_table(fam_path, ".fam");
  const auto bim = detail::read_whitespace_table(bim_path, ".bim");
  const Index n = static_cast<Index>(fam.size());
  const Index p = static_cast<Index>(bim.size());
  if (n < 1 || p < 1) throw InconsistentDimensions(".fam or .bim lists no entries");

  RawGenotypeMatrix out;
  out.sample_ids.reserve(static_cast<std::size_t>(n));
  for (const auto& row : fam) {
    if (row.size() < 2) throw Error(".fam row has fewer than 2 fields");
    out.sample_ids.push_back(row[1]);
  }
  out.variant_ids.reserve(static_cast<std::size_t>(p));
  for (const auto& row : bim) {
    if (row.size() < 2) throw Error(".bim row has fewer than 2 fields");
    out.variant_ids.push_back(row[1]);
  }

  std::ifstream bed(bed_path, std::ios::binary);
  if (!bed) throw Error("cannot open .bed file: " + bed_path);
  unsigned char header[3] = {0, 0, 0};
  bed.read(reinterpret_cast<char*>(header), 3);
  if (bed.gcount() != 3 || header[0] != 0x6C || header[1] != 0x1B)
    throw BadMagic(".bed file does not start with the PLINK magic bytes 0x6C 0x1B");
  if (header[2] != 0x01)
    throw BadMagic(".bed mode byte is not 0x01 (only SNP-major files are supported)");

  const std::size_t bytes_per_variant = static_cast<std::size_t>((n + 3) / 4);
  const std::size_t expected = bytes_per_variant * static_cast<std::size_t>(p);
  std::vector<unsigned char> payload(expected);
  bed.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(expected));
  if (static_cast<std::size_t>(bed.gcount()) < expected)
    throw TruncatedPayload(".bed payload is shorter than ceil(n/4)*p bytes");
  char extra;
  if (bed.read(&extra, 1), bed.gcount() != 0)
    throw InconsistentDimensions(".bed payload is longer than .bim/.fam dimensions allow");

  out.values.resize(n, p);
  std::vector<Index> missing_rows;
  for (Index j = 0; j < p; ++j) {
    const unsigned char* block = payload.data() + static_cast<std::size_t>(j) * bytes_per_variant;
    missing_rows.clear();
    long sum = 0;
    Index observed = 0;
    for (Index i = 0; i < n; ++i) {
      const unsigned bits = (block[i >> 2] >> ((i & 3) * 2)) & 3u;
      std::int8_t count;
      switch (bits) {
        case 0u: count = 2; break;   // hom A1
        case 2u: count = 1; break;   // het
        case 3u: count = 0; break;   // hom A2
        default: count = -1; break;  // 01: missing
      }
      out.values(i, j) = count;
      if (count < 0) {
        missing_rows.push_back(i);
      } else {
        sum += count;
        ++observed;
      }
    }
    if (!missing_rows.empty()) {
      std::int8_t fill = 0;
      if (observed > 0) {
        const double mean = static_cast<double>(sum) / static_cast<double>(observed);
        fill = static_cast<std::int8_t>(std::lround(mean));
      }
      for (const Index i : missing_rows) out.values(i, j) = fill;
    }
  }
  return out;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_PLINK_HPP
