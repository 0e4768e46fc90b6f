// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <utility>

#include "curiomol/chem.hpp"
#include "curiomol/errors.hpp"
#include "curiomol/random.hpp"

namespace curiomol {

namespace {

std::uint64_t combine(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

}  // namespace

Fingerprint::Fingerprint(int width, int radius) : width_(width), radius_(radius) {
  if (width <= 0 || !std::has_single_bit(static_cast<unsigned>(width))) {
    throw ContractViolation("Fingerprint: width must be a power of two");
  }
  if (radius < 0) throw ContractViolation("Fingerprint: negative radius");
  words_.assign((static_cast<std::size_t>(width) + 63) / 64, 0);
}

void Fingerprint::set(int bit) { words_[bit / 64] |= std::uint64_t{1} << (bit % 64); }

bool Fingerprint::test(int bit) const { return (words_[bit / 64] >> (bit % 64)) & 1U; }

int Fingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

Fingerprint morgan_fingerprint(const MolGraph& mol, int radius, int width) {
  Fingerprint fp(width, radius);
  const auto adj = adjacency(mol);
  const int n = mol.atom_count();
  std::vector<std::uint64_t> ids(n);
  for (int i = 0; i < n; ++i) {
    const Atom& a = mol.atoms[i];
    std::uint64_t h = combine(0, static_cast<std::uint64_t>(a.element) + 1);
    h = combine(h, adj[i].size());
    h = combine(h, static_cast<std::uint64_t>(a.implicit_hydrogens));
    h = combine(h, a.in_ring ? 1 : 0);
    ids[i] = h;
  }
  const auto mark = [&] {
    for (std::uint64_t id : ids) fp.set(static_cast<int>(id % static_cast<std::uint64_t>(width)));
  };
  mark();
  std::vector<std::pair<int, std::uint64_t>> env;
  for (int round = 1; round <= radius; ++round) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const Neighbor& nb : adj[i]) env.emplace_back(nb.order, ids[nb.atom]);
      std::sort(env.begin(), env.end());
      std::uint64_t h = combine(static_cast<std::uint64_t>(round), ids[i]);
      for (const auto& [order, id] : env) h = combine(combine(h, order), id);
      next[i] = h;
    }
    ids = std::move(next);
    mark();
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width()) throw ContractViolation("tanimoto: fingerprint width mismatch");
  int both = 0;
  int either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += std::popcount(a.words()[i] & b.words()[i]);
    either += std::popcount(a.words()[i] | b.words()[i]);
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / either;
}

}  // namespace curiomol
