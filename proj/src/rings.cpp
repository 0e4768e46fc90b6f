// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdint>
#include <queue>

#include "curiomol/chem.hpp"
#include "perception.hpp"

namespace curiomol {

namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  int length;
  EdgeSet edges;
};

void flip(EdgeSet& s, int bond) { s[bond / 64] ^= std::uint64_t{1} << (bond % 64); }
bool has(const EdgeSet& s, int bond) { return (s[bond / 64] >> (bond % 64)) & 1U; }

// Atoms of a simple cycle in traversal order, starting at its lowest index.
std::vector<int> cycle_atoms(const MolGraph& mol, const EdgeSet& edges) {
  std::vector<std::vector<int>> local(mol.atoms.size());
  int start = -1;
  for (int i = 0; i < mol.bond_count(); ++i) {
    if (!has(edges, i)) continue;
    const Bond& b = mol.bonds[i];
    local[b.a].push_back(b.b);
    local[b.b].push_back(b.a);
    const int lo = std::min(b.a, b.b);
    if (start < 0 || lo < start) start = lo;
  }
  std::vector<int> ring{start};
  int prev = -1;
  int cur = start;
  while (true) {
    auto& nbrs = local[cur];
    std::sort(nbrs.begin(), nbrs.end());
    int next = nbrs[0] != prev ? nbrs[0] : nbrs[1];
    if (prev == -1) next = nbrs[0];
    if (next == start) break;
    ring.push_back(next);
    prev = cur;
    cur = next;
  }
  return ring;
}

}  // namespace

int ring_count(const MolGraph& mol) {
  return mol.bond_count() - mol.atom_count() + component_count(mol);
}

// Minimum cycle basis from Horton candidates: for every root v and bond
// (x, y), the cycle P(v,x) + (x,y) + P(y,v) when the two shortest paths meet
// only at v. Candidates are added shortest first while GF(2)-independent.
std::vector<std::vector<int>> smallest_rings(const MolGraph& mol) {
  const int rank = ring_count(mol);
  if (rank == 0) return {};
  const int n = mol.atom_count();
  const int words = (mol.bond_count() + 63) / 64;
  const auto adj = adjacency(mol);

  std::vector<Candidate> candidates;
  for (int root = 0; root < n; ++root) {
    std::vector<int> dist(n, -1), parent_bond(n, -1), parent(n, -1);
    std::queue<int> q;
    dist[root] = 0;
    q.push(root);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const Neighbor& nb : adj[u]) {
        if (dist[nb.atom] != -1) continue;
        dist[nb.atom] = dist[u] + 1;
        parent[nb.atom] = u;
        parent_bond[nb.atom] = nb.bond;
        q.push(nb.atom);
      }
    }
    auto path = [&](int x) {
      std::vector<int> atoms;
      for (int v = x; v != -1; v = parent[v]) atoms.push_back(v);
      return atoms;
    };
    for (int i = 0; i < mol.bond_count(); ++i) {
      const Bond& b = mol.bonds[i];
      if (dist[b.a] < 0 || dist[b.b] < 0) continue;
      if (parent_bond[b.a] == i || parent_bond[b.b] == i) continue;
      const auto pa = path(b.a);
      const auto pb = path(b.b);
      bool disjoint = true;
      for (int x : pa) {
        if (x != root && std::find(pb.begin(), pb.end(), x) != pb.end()) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint) continue;
      Candidate c{dist[b.a] + dist[b.b] + 1, EdgeSet(words, 0)};
      flip(c.edges, i);
      for (int v = b.a; v != root; v = parent[v]) flip(c.edges, parent_bond[v]);
      for (int v = b.b; v != root; v = parent[v]) flip(c.edges, parent_bond[v]);
      candidates.push_back(std::move(c));
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.edges < b.edges;
  });

  // Incremental Gaussian elimination; basis rows keyed by pivot bond.
  std::vector<EdgeSet> basis;
  std::vector<int> pivots;
  std::vector<std::vector<int>> rings;
  for (const Candidate& c : candidates) {
    if (static_cast<int>(rings.size()) == rank) break;
    EdgeSet r = c.edges;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (has(r, pivots[k])) {
        for (int w = 0; w < words; ++w) r[w] ^= basis[k][w];
      }
    }
    int pivot = -1;
    for (int i = 0; i < mol.bond_count(); ++i) {
      if (has(r, i)) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (has(basis[k], pivot)) {
        for (int w = 0; w < words; ++w) basis[k][w] ^= r[w];
      }
    }
    basis.push_back(r);
    pivots.push_back(pivot);
    rings.push_back(cycle_atoms(mol, c.edges));
  }
  return rings;
}

std::vector<std::vector<int>> aromatic_rings(const MolGraph& mol) {
  std::vector<std::vector<int>> out;
  const auto adj = adjacency(mol);
  for (const auto& ring : smallest_rings(mol)) {
    const int size = static_cast<int>(ring.size());
    if (size != 5 && size != 6) continue;
    auto in_ring = [&](int atom) { return std::find(ring.begin(), ring.end(), atom) != ring.end(); };
    int donors = 0;
    bool ok = true;
    for (int atom : ring) {
      bool endocyclic_double = false;
      bool any_multiple = false;
      for (const Neighbor& nb : adj[atom]) {
        if (nb.order >= 2) any_multiple = true;
        if (nb.order == 2 && in_ring(nb.atom)) endocyclic_double = true;
      }
      if (endocyclic_double) continue;
      const Element e = mol.atoms[atom].element;
      const bool donor_element = e == Element::N || e == Element::O || e == Element::S;
      if (donor_element && !any_multiple) {
        ++donors;
      } else {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if ((size == 6 && donors == 0) || (size == 5 && donors == 1)) out.push_back(ring);
  }
  return out;
}

Perception perceive(const MolGraph& mol) {
  Perception p;
  p.adj = adjacency(mol);
  p.aromatic_atom.assign(mol.atoms.size(), false);
  p.aromatic_bond.assign(mol.bonds.size(), false);
  p.in_ring3.assign(mol.atoms.size(), false);
  p.rings = smallest_rings(mol);
  for (const auto& ring : p.rings) {
    if (ring.size() == 3) {
      for (int a : ring) p.in_ring3[a] = true;
    }
  }
  p.aromatic = aromatic_rings(mol);
  for (const auto& ring : p.aromatic) {
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const int a = ring[k];
      const int b = ring[(k + 1) % ring.size()];
      p.aromatic_atom[a] = true;
      for (const Neighbor& nb : p.adj[a]) {
        if (nb.atom == b) p.aromatic_bond[nb.bond] = true;
      }
    }
  }
  return p;
}

}  // namespace curiomol
