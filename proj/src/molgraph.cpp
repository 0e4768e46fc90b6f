// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include "curiomol/molgraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace curiomol {

int max_valence(Element e) {
  switch (e) {
    case Element::C: return 4;
    case Element::N: return 3;
    case Element::O: return 2;
    case Element::S: return 6;
    case Element::P: return 5;
    case Element::F:
    case Element::Cl:
    case Element::Br: return 1;
  }
  return 0;
}

int fill_valence(Element e, int bonded) {
  switch (e) {
    case Element::S:
      for (int v : {2, 4, 6}) {
        if (v >= bonded) return v;
      }
      return bonded;
    case Element::P:
      for (int v : {3, 5}) {
        if (v >= bonded) return v;
      }
      return bonded;
    default:
      return std::max(max_valence(e), bonded);
  }
}

std::string_view symbol(Element e) {
  switch (e) {
    case Element::C: return "C";
    case Element::N: return "N";
    case Element::O: return "O";
    case Element::S: return "S";
    case Element::P: return "P";
    case Element::F: return "F";
    case Element::Cl: return "Cl";
    case Element::Br: return "Br";
  }
  return "?";
}

double atomic_mass(Element e) {
  switch (e) {
    case Element::C: return 12.011;
    case Element::N: return 14.007;
    case Element::O: return 15.999;
    case Element::S: return 32.067;
    case Element::P: return 30.974;
    case Element::F: return 18.998;
    case Element::Cl: return 35.453;
    case Element::Br: return 79.904;
  }
  return 0.0;
}

std::vector<std::vector<Neighbor>> adjacency(const MolGraph& mol) {
  std::vector<std::vector<Neighbor>> adj(mol.atoms.size());
  for (int i = 0; i < mol.bond_count(); ++i) {
    const Bond& b = mol.bonds[i];
    adj[b.a].push_back({b.b, b.order, i});
    adj[b.b].push_back({b.a, b.order, i});
  }
  return adj;
}

std::vector<int> bond_order_sums(const MolGraph& mol) {
  std::vector<int> sums(mol.atoms.size(), 0);
  for (const Bond& b : mol.bonds) {
    sums[b.a] += b.order;
    sums[b.b] += b.order;
  }
  return sums;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

int component_count(const MolGraph& mol) {
  std::vector<int> parent(mol.atoms.size());
  std::iota(parent.begin(), parent.end(), 0);
  int components = mol.atom_count();
  for (const Bond& b : mol.bonds) {
    int ra = find_root(parent, b.a);
    int rb = find_root(parent, b.b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

// Bridge finding (iterative Tarjan); a bond is a ring bond iff it is not a bridge.
std::vector<bool> ring_bonds(const MolGraph& mol) {
  const int n = mol.atom_count();
  std::vector<bool> in_ring(mol.bonds.size(), true);
  if (n == 0) return in_ring;
  const auto adj = adjacency(mol);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.atom].size()) {
        const Neighbor nb = adj[f.atom][f.next++];
        if (nb.bond == f.parent_bond) continue;
        if (disc[nb.atom] == -1) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          Frame& up = stack.back();
          low[up.atom] = std::min(low[up.atom], low[done.atom]);
          if (low[done.atom] > disc[up.atom]) in_ring[done.parent_bond] = false;
        }
      }
    }
  }
  return in_ring;
}

void assign_ring_flags(MolGraph& mol) {
  for (Atom& a : mol.atoms) a.in_ring = false;
  const auto rb = ring_bonds(mol);
  for (std::size_t i = 0; i < mol.bonds.size(); ++i) {
    if (!rb[i]) continue;
    mol.atoms[mol.bonds[i].a].in_ring = true;
    mol.atoms[mol.bonds[i].b].in_ring = true;
  }
}

std::string molecular_formula(const MolGraph& mol) {
  if (mol.empty()) return "";
  std::map<std::string, int> counts;
  int hydrogens = 0;
  for (const Atom& a : mol.atoms) {
    ++counts[std::string(symbol(a.element))];
    hydrogens += a.implicit_hydrogens;
  }
  if (hydrogens > 0) counts["H"] = hydrogens;

  std::string out;
  auto emit = [&out](const std::string& sym, int n) {
    out += sym;
    if (n > 1) out += std::to_string(n);
  };
  // C, then H, then the rest alphabetically; H still leads without carbon.
  if (counts.count("C")) {
    emit("C", counts["C"]);
    counts.erase("C");
  }
  if (counts.count("H")) {
    emit("H", counts["H"]);
    counts.erase("H");
  }
  for (const auto& [sym, n] : counts) emit(sym, n);
  return out;
}

std::array<int, 3> bond_order_histogram(const MolGraph& mol) {
  std::array<int, 3> h{0, 0, 0};
  for (const Bond& b : mol.bonds) ++h[b.order - 1];
  return h;
}

}  // namespace curiomol
