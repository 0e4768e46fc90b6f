// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "curiomol/chem.hpp"
#include "curiomol/errors.hpp"
#include "embedded_tables.hpp"

namespace curiomol {

namespace {

// Pinned FNV-1a hashes of data/qed_desirability.tsv and
// data/crippen_contribs.tsv. Update both when a table is edited.
constexpr std::uint64_t kQedChecksum = 0x0abdec71467e438bULL;
constexpr std::uint64_t kCrippenChecksum = 0xb3ec56b2e7506991ULL;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad number in parameter table: '" + s + "'");
  }
  return v;
}

// Non-comment, non-blank lines.
std::vector<std::string> rows(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

void verify(std::string_view text, std::uint64_t expected, const char* name) {
  if (fnv1a64(text) != expected) {
    throw std::runtime_error(std::string(name) + " table checksum mismatch");
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<QedParameter> parse_qed_table(std::string_view text) {
  std::vector<QedParameter> out;
  for (const std::string& line : rows(text)) {
    const auto f = split_tabs(line);
    if (f.size() != 9) throw std::runtime_error("QED table: expected 9 columns: " + line);
    out.push_back({f[0], to_double(f[1]), to_double(f[2]), to_double(f[3]), to_double(f[4]),
                   to_double(f[5]), to_double(f[6]), to_double(f[7]), to_double(f[8])});
  }
  return out;
}

std::vector<CrippenEntry> parse_crippen_table(std::string_view text) {
  std::vector<CrippenEntry> out;
  for (const std::string& line : rows(text)) {
    const auto f = split_tabs(line);
    if (f.size() != 3) throw std::runtime_error("Crippen table: expected 3 columns: " + line);
    out.push_back({f[0], f[1], to_double(f[2])});
  }
  return out;
}

const std::vector<QedParameter>& qed_parameters() {
  static const std::vector<QedParameter> table = [] {
    verify(embedded::kQedTable, kQedChecksum, "QED");
    return parse_qed_table(embedded::kQedTable);
  }();
  return table;
}

const std::vector<CrippenEntry>& crippen_table() {
  static const std::vector<CrippenEntry> table = [] {
    verify(embedded::kCrippenTable, kCrippenChecksum, "Crippen");
    return parse_crippen_table(embedded::kCrippenTable);
  }();
  return table;
}

double crippen_contribution(std::string_view type) {
  for (const CrippenEntry& e : crippen_table()) {
    if (e.type == type) return e.logp;
  }
  throw ContractViolation("unknown Crippen type " + std::string(type));
}

}  // namespace curiomol
