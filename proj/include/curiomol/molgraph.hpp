// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_MOLGRAPH_HPP_
#define CURIOMOL_MOLGRAPH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curiomol {

enum class Element : std::uint8_t { C, N, O, S, P, F, Cl, Br };

inline constexpr std::array<Element, 8> kElements = {
    Element::C, Element::N, Element::O, Element::S,
    Element::P, Element::F, Element::Cl, Element::Br};

//! Bonding capacity used during decoding: C 4, N 3, O 2, S 6, P 5, halogens 1.
int max_valence(Element e);

//! Valence the implicit-hydrogen fill rounds up to: the smallest standard
//! valence (S: 2/4/6, P: 3/5, others: max_valence) that is >= `bonded`.
//! Returns `bonded` when it already exceeds every standard valence.
int fill_valence(Element e, int bonded);

std::string_view symbol(Element e);
double atomic_mass(Element e);
//! Mass of one hydrogen atom.
inline constexpr double kHydrogenMass = 1.008;

struct Atom {
  Element element = Element::C;
  int implicit_hydrogens = 0;
  bool in_ring = false;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Bond {
  int a = 0;
  int b = 0;
  int order = 1;

  friend bool operator==(const Bond&, const Bond&) = default;
};

//! Undirected hydrogen-suppressed molecular graph. No self loops and no
//! parallel bonds; every atom is hydrogen-filled to a standard valence.
struct MolGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  bool empty() const { return atoms.empty(); }
  int atom_count() const { return static_cast<int>(atoms.size()); }
  int bond_count() const { return static_cast<int>(bonds.size()); }

  friend bool operator==(const MolGraph&, const MolGraph&) = default;
};

struct Neighbor {
  int atom = 0;
  int order = 1;
  int bond = 0;
};

//! Adjacency lists indexed by atom.
std::vector<std::vector<Neighbor>> adjacency(const MolGraph& mol);

//! Sum of incident bond orders per atom.
std::vector<int> bond_order_sums(const MolGraph& mol);

//! Number of connected components (0 for the empty graph).
int component_count(const MolGraph& mol);

//! Marks bonds that lie on at least one cycle.
std::vector<bool> ring_bonds(const MolGraph& mol);

//! Recomputes Atom::in_ring from the bond topology.
void assign_ring_flags(MolGraph& mol);

//! Molecular formula: C, H, then the other elements alphabetically. H stays
//! in front when there is no carbon. Empty graph gives "".
std::string molecular_formula(const MolGraph& mol);

//! Counts of single, double and triple bonds.
std::array<int, 3> bond_order_histogram(const MolGraph& mol);

}  // namespace curiomol

#endif  // CURIOMOL_MOLGRAPH_HPP_
