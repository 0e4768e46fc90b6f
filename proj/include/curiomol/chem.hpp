// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_CHEM_HPP_
#define CURIOMOL_CHEM_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curiomol/molgraph.hpp"

namespace curiomol {

// ---------------------------------------------------------------------------
// Ring perception
// ---------------------------------------------------------------------------

//! Smallest set of smallest rings: a minimum cycle basis, each ring given as
//! its atoms in cyclic order. Its size equals ring_count().
std::vector<std::vector<int>> smallest_rings(const MolGraph& mol);

//! Cycle rank |bonds| - |atoms| + components.
int ring_count(const MolGraph& mol);

//! Rings of size 5 or 6 in which every atom either carries an endocyclic
//! double bond or is a singly-bonded N/O/S lone-pair donor (one donor in a
//! five-ring, none in a six-ring). No Hueckel perception.
std::vector<std::vector<int>> aromatic_rings(const MolGraph& mol);

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

struct DescriptorVector {
  double molecular_weight = 0.0;  // Da
  double logp = 0.0;
  int hbond_donors = 0;
  int hbond_acceptors = 0;
  int rotatable_bonds = 0;
  int ring_count = 0;
  int aromatic_ring_count = 0;
  double polar_surface_area = 0.0;  // A^2

  friend bool operator==(const DescriptorVector&, const DescriptorVector&) = default;
};

DescriptorVector descriptors(const MolGraph& mol);

//! Wildman-Crippen atom type of every heavy atom, and of the hydrogens
//! attached to it (hydrogens on one atom share a type).
struct CrippenTypes {
  std::vector<std::string> heavy;
  std::vector<std::string> hydrogen;
};
CrippenTypes crippen_types(const MolGraph& mol);

//! Sum of atom-type contributions, implicit hydrogens included.
double crippen_logp(const MolGraph& mol);

//! Topological polar surface area from N/O group contributions.
double tpsa(const MolGraph& mol);

double molecular_weight(const MolGraph& mol);

// ---------------------------------------------------------------------------
// Property oracles
// ---------------------------------------------------------------------------

//! Weighted geometric mean of the eight QED desirabilities; the
//! structural-alert count is fixed at 0.
double qed(const MolGraph& mol);
double qed(const DescriptorVector& d);

//! One QED desirability function evaluated at `x`, normalized by its maximum.
//! `name` is one of MW, ALOGP, HBA, HBD, PSA, ROTB, AROM, ALERTS.
double qed_desirability(std::string_view name, double x);

//! 0.05 * heavy atoms + 0.5 * rings + 0.25 * branch points (degree >= 3).
double sa_proxy(const MolGraph& mol);

//! logP - saProxy - ringCount.
double penalized_logp(const MolGraph& mol);
inline double penalized_logp(double logp, double sa, int rings) {
  return logp - sa - static_cast<double>(rings);
}

// ---------------------------------------------------------------------------
// Fingerprints
// ---------------------------------------------------------------------------

class Fingerprint {
 public:
  Fingerprint() = default;
  Fingerprint(int width, int radius);

  int width() const { return width_; }
  int radius() const { return radius_; }
  void set(int bit);
  bool test(int bit) const;
  int popcount() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  int width_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

//! Circular fingerprint. Atom invariants are (element, heavy degree,
//! implicit H, ring flag); each round folds in the sorted (bond order,
//! neighbor identifier) list. Every identifier from rounds 0..radius sets bit
//! (id mod width). Hashing is SplitMix64-based and platform independent.
Fingerprint morgan_fingerprint(const MolGraph& mol, int radius = 2, int width = 2048);

//! |a & b| / |a | b|; 1 when both are empty. Throws ContractViolation on
//! a width mismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

enum class PropertyKind { QED, PenalizedLogP, Similarity, Custom };

//! The extrinsic reward p(mol). evaluate() of the empty molecule is 0.
class PropertyOracle {
 public:
  static PropertyOracle qed_oracle();
  static PropertyOracle penalized_logp_oracle();
  static PropertyOracle similarity_oracle(Fingerprint target);
  //! Arbitrary scoring function, for test environments.
  static PropertyOracle custom(std::function<double(const MolGraph&)> fn);

  PropertyKind kind() const { return kind_; }
  const std::optional<Fingerprint>& target() const { return target_; }
  double evaluate(const MolGraph& mol) const;

 private:
  PropertyOracle(PropertyKind kind, std::optional<Fingerprint> target,
                 std::function<double(const MolGraph&)> fn = {})
      : kind_(kind), target_(std::move(target)), fn_(std::move(fn)) {}

  PropertyKind kind_;
  std::optional<Fingerprint> target_;
  std::function<double(const MolGraph&)> fn_;
};

// ---------------------------------------------------------------------------
// Parameter tables (committed under data/, embedded at build time)
// ---------------------------------------------------------------------------

struct QedParameter {
  std::string name;
  double a, b, c, d, e, f, dmax, weight;
};

//! FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

//! Parsed desirability table. Throws std::runtime_error if the embedded
//! text does not match its pinned checksum.
const std::vector<QedParameter>& qed_parameters();

struct CrippenEntry {
  std::string type;
  std::string pattern;
  double logp;
};
const std::vector<CrippenEntry>& crippen_table();

//! Contribution of a Crippen type label (e.g. "C1", "H2").
double crippen_contribution(std::string_view type);

std::vector<QedParameter> parse_qed_table(std::string_view text);
std::vector<CrippenEntry> parse_crippen_table(std::string_view text);

}  // namespace curiomol

#endif  // CURIOMOL_CHEM_HPP_
