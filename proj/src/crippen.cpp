// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

// Wildman-Crippen atom typing. Each rule below mirrors one pattern row of
// data/crippen_contribs.tsv and is tried in table order; the first match
// wins. Only neutral atoms of the supported elements occur, so charged and
// metal rows never match.

#include <functional>

#include "curiomol/chem.hpp"
#include "perception.hpp"

namespace curiomol {

namespace {

struct Nb {
  int atom;
  Element el;
  bool arom;       // neighbor atom aromatic
  int order;
  bool arom_bond;  // bond lies in an aromatic ring
  int h;
  int x;  // total connections of the neighbor, hydrogens included
};

// SMARTS bond primitives: unspecified means single or aromatic.
bool dflt(const Nb& n) { return n.arom_bond || n.order == 1; }
bool single(const Nb& n) { return !n.arom_bond && n.order == 1; }
bool dbl(const Nb& n) { return !n.arom_bond && n.order == 2; }
bool triple(const Nb& n) { return n.order == 3; }

bool is_C(const Nb& n) { return n.el == Element::C && !n.arom; }
bool is_c(const Nb& n) { return n.el == Element::C && n.arom; }
bool aliph(const Nb& n) { return !n.arom; }
bool arom(const Nb& n) { return n.arom; }
bool aliph_hetero(const Nb& n) { return !n.arom && n.el != Element::C; }

struct Env {
  int index;
  Element el;
  bool arom;
  int h;
  int x;
  std::vector<Nb> nbrs;

  int count(const std::function<bool(const Nb&)>& p) const {
    int k = 0;
    for (const Nb& n : nbrs) k += p(n) ? 1 : 0;
    return k;
  }
  bool any(const std::function<bool(const Nb&)>& p) const { return count(p) > 0; }
  // Two distinct neighbors, one matching each predicate.
  bool pair(const std::function<bool(const Nb&)>& p, const std::function<bool(const Nb&)>& q) const {
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (!p(nbrs[i])) continue;
      for (std::size_t j = 0; j < nbrs.size(); ++j) {
        if (i != j && q(nbrs[j])) return true;
      }
    }
    return false;
  }
};

std::vector<Env> environments(const MolGraph& mol, const Perception& p) {
  std::vector<Env> envs(mol.atoms.size());
  for (int i = 0; i < mol.atom_count(); ++i) {
    envs[i].index = i;
    envs[i].el = mol.atoms[i].element;
    envs[i].arom = p.aromatic_atom[i];
    envs[i].h = mol.atoms[i].implicit_hydrogens;
    envs[i].x = static_cast<int>(p.adj[i].size()) + envs[i].h;
  }
  for (int i = 0; i < mol.atom_count(); ++i) {
    for (const Neighbor& nb : p.adj[i]) {
      envs[i].nbrs.push_back({nb.atom, envs[nb.atom].el, envs[nb.atom].arom, nb.order,
                              p.aromatic_bond[nb.bond], envs[nb.atom].h, envs[nb.atom].x});
    }
  }
  return envs;
}

const char* carbon_type(const Env& a) {
  auto dC = [](const Nb& n) { return dflt(n) && is_C(n); };
  auto dAliph = [](const Nb& n) { return dflt(n) && aliph(n); };
  auto dHet = [](const Nb& n) { return dflt(n) && aliph_hetero(n); };
  auto dArom = [](const Nb& n) { return dflt(n) && arom(n); };
  auto eqC = [](const Nb& n) { return dbl(n) && is_C(n); };

  if (!a.arom) {
    if (a.h == 4) return "C1";
    if (a.h == 3 && a.any(dC)) return "C1";
    if (a.h == 2 && a.count(dC) >= 2) return "C1";
    if (a.h == 1 && a.count(dC) >= 3) return "C2";
    if (a.count(dC) >= 4) return "C2";
    if (a.h == 3 && a.any(dHet)) return "C3";
    if (a.h == 2 && a.x == 4 && a.any(dHet) && a.count(dAliph) >= 2) return "C3";
    if (a.h == 1 && a.x == 4 && a.any(dHet) && a.count(dAliph) >= 3) return "C4";
    if (a.h == 0 && a.x == 4 && a.any(dHet) && a.count(dAliph) >= 4) return "C4";
    if (a.any([](const Nb& n) { return dbl(n) && aliph(n) && n.el != Element::C; })) return "C5";
    if (a.h == 2 && a.any(eqC)) return "C6";
    if (a.h == 1 && a.any(eqC) && a.any(dAliph)) return "C6";
    if (a.h == 0 && a.any(eqC) && a.count(dAliph) >= 2) return "C6";
    if (a.count(eqC) >= 2) return "C6";
    if (a.x == 2 && a.any([](const Nb& n) { return triple(n) && aliph(n); })) return "C7";
    if (a.h == 3 && a.any([](const Nb& n) { return dflt(n) && is_c(n); })) return "C8";
    if (a.h == 3 && a.any(dArom)) return "C9";
    if (a.h == 2 && a.x == 4 && a.any(dArom)) return "C10";
    if (a.h == 1 && a.x == 4 && a.any(dArom)) return "C11";
    if (a.h == 0 && a.x == 4 && a.any(dArom)) return "C12";
    if (a.any(eqC) && a.any(dArom) && a.any(dAliph)) return "C26";
    if (a.any(eqC) && a.pair([](const Nb& n) { return dflt(n) && is_c(n); }, dArom)) return "C26";
    if (a.h == 1 && a.any(eqC) && a.any(dArom)) return "C26";
    if (a.any([](const Nb& n) { return dbl(n) && is_c(n); })) return "C26";
    return "CS";
  }

  auto ring = [](const Nb& n) { return n.arom_bond && n.arom; };
  if (a.h == 0 && a.any([](const Nb& n) { return single(n) && aliph(n) && n.el == Element::P; })) return "C13";
  if (a.any([](const Nb& n) { return dflt(n) && n.el == Element::F; })) return "C14";
  if (a.any([](const Nb& n) { return dflt(n) && n.el == Element::Cl; })) return "C15";
  if (a.any([](const Nb& n) { return dflt(n) && n.el == Element::Br; })) return "C16";
  if (a.h == 1) return "C18";
  const int ring_nbrs = a.count(ring);
  if (ring_nbrs >= 3) return "C19";
  if (ring_nbrs >= 2) {
    if (a.any([](const Nb& n) { return single(n) && arom(n); })) return "C20";
    if (a.any([](const Nb& n) { return single(n) && is_C(n); })) return "C21";
    if (a.any([](const Nb& n) { return single(n) && aliph(n) && n.el == Element::N; })) return "C22";
    if (a.any([](const Nb& n) { return single(n) && aliph(n) && n.el == Element::O; })) return "C23";
    if (a.any([](const Nb& n) { return single(n) && aliph(n) && n.el == Element::S; })) return "C24";
    if (a.any([](const Nb& n) {
          return dbl(n) && aliph(n) && (n.el == Element::C || n.el == Element::N || n.el == Element::O);
        })) {
      return "C25";
    }
  }
  return "CS";
}

const char* nitrogen_type(const Env& a) {
  if (a.arom) return "N11";
  auto dAliph = [](const Nb& n) { return dflt(n) && aliph(n); };
  auto dArom = [](const Nb& n) { return dflt(n) && arom(n); };
  if (a.h == 2 && a.any(dAliph)) return "N1";
  if (a.h == 1 && a.count(dAliph) >= 2) return "N2";
  if (a.h == 2 && a.any(dArom)) return "N3";
  if (a.h == 1 && a.pair(dArom, dflt)) return "N4";
  if (a.h == 1 && a.any(dbl)) return "N5";
  if (a.any(dbl) && a.any(dflt)) return "N6";
  if (a.count(dAliph) >= 3) return "N7";
  if (a.any(dArom) && a.any(dAliph) && a.count(dflt) >= 3) return "N8";
  if (a.count(dArom) >= 3) return "N8";
  if (a.any([](const Nb& n) { return triple(n) && aliph(n); })) return "N9";
  return "NS";
}

const char* oxygen_type(const Env& a, const std::vector<Env>& envs) {
  if (a.arom) return "O1";
  if (a.h == 1 || a.h == 2) return "O2";
  auto dAliph = [](const Nb& n) { return dflt(n) && aliph(n); };
  auto dArom = [](const Nb& n) { return dflt(n) && arom(n); };
  if (a.count(dAliph) >= 2) return "O3";
  if (a.pair(dArom, dflt)) return "O4";
  if (a.any([](const Nb& n) { return dbl(n) && (n.el == Element::N || n.el == Element::O); })) return "O5";
  if (a.any([](const Nb& n) { return dbl(n) && n.el == Element::S; })) return "O6";
  if (a.any([](const Nb& n) { return dbl(n) && is_c(n); })) return "O8";

  const Nb* carbonyl = nullptr;
  for (const Nb& n : a.nbrs) {
    if (dbl(n) && is_C(n)) carbonyl = &n;
  }
  if (carbonyl != nullptr) {
    const Env& c = envs[carbonyl->atom];
    auto dC = [](const Nb& n) { return dflt(n) && is_C(n); };
    auto dNO = [](const Nb& n) {
      return dflt(n) && aliph(n) && (n.el == Element::N || n.el == Element::O);
    };
    if (c.h == 1 && c.any(dC)) return "O9";
    if (c.pair(dC, dAliph)) return "O9";
    if (c.h == 1 && c.any(dNO)) return "O9";
    if (c.h == 2) return "O9";
    const int self = a.index;
    if (c.x == 2 && c.any([self](const Nb& n) {
          return dbl(n) && n.el == Element::O && aliph(n) && n.atom != self;
        })) {
      return "O9";
    }
    if (c.h == 1 && c.any([](const Nb& n) { return dflt(n) && is_c(n); })) return "O10";
    if (c.pair([](const Nb& n) { return dflt(n) && n.el == Element::C; }, dArom)) return "O10";
    if (c.pair([](const Nb& n) { return dflt(n) && is_c(n); }, dAliph)) return "O10";
    if (c.count([](const Nb& n) { return dflt(n) && n.el != Element::C; }) >= 2) return "O11";
  }
  return "OS";
}

const char* sulfur_type(const Env& a) {
  if (!a.arom && a.any([](const Nb& n) {
        return dbl(n) && aliph(n) &&
               (n.el == Element::N || n.el == Element::O || n.el == Element::P || n.el == Element::S);
      })) {
    return "S2";
  }
  return a.arom ? "S3" : "S1";
}

const char* heavy_type(const Env& a, const std::vector<Env>& envs) {
  switch (a.el) {
    case Element::C: return carbon_type(a);
    case Element::N: return nitrogen_type(a);
    case Element::O: return oxygen_type(a, envs);
    case Element::S: return sulfur_type(a);
    case Element::P: return "P";
    case Element::F: return "F";
    case Element::Cl: return "Cl";
    case Element::Br: return "Br";
  }
  return "CS";
}

// Type shared by every hydrogen attached to `a`.
const char* hydrogen_type(const Env& a, const std::vector<Env>& envs) {
  if (a.el == Element::C) return "H1";
  const bool aliphatic_o = a.el == Element::O && !a.arom;
  if (aliphatic_o) {
    if (a.any([](const Nb& n) { return dflt(n) && ((is_C(n) && n.x == 4) || is_c(n)); })) return "H2";
    const bool other_h = a.h >= 2;
    if (other_h || a.any([](const Nb& n) {
          return dflt(n) && !(aliph(n) && (n.el == Element::C || n.el == Element::N ||
                                           n.el == Element::O || n.el == Element::S));
        })) {
      return "H2";
    }
  }
  const bool aliphatic_cno =
      !a.arom && (a.el == Element::C || a.el == Element::N || a.el == Element::O);
  if (!aliphatic_cno) return "H2";
  if (a.el == Element::N) return "H3";
  // Aliphatic hydroxyl oxygen from here on.
  if (a.any([](const Nb& n) { return dflt(n) && n.el == Element::N; })) return "H3";
  for (const Nb& n : a.nbrs) {
    if (!(dflt(n) && is_C(n))) continue;
    const Env& c = envs[n.atom];
    if (c.any([](const Nb& m) {
          return dbl(m) && (m.el == Element::C || m.el == Element::N ||
                            (aliph(m) && (m.el == Element::O || m.el == Element::S)));
        })) {
      return "H4";
    }
  }
  if (a.any([](const Nb& n) {
        return dflt(n) && aliph(n) && (n.el == Element::O || n.el == Element::S);
      })) {
    return "H4";
  }
  return "HS";
}

}  // namespace

CrippenTypes crippen_types(const MolGraph& mol) {
  const Perception p = perceive(mol);
  const auto envs = environments(mol, p);
  CrippenTypes out;
  for (const Env& e : envs) {
    out.heavy.emplace_back(heavy_type(e, envs));
    out.hydrogen.emplace_back(e.h > 0 ? hydrogen_type(e, envs) : "");
  }
  return out;
}

double crippen_logp(const MolGraph& mol) {
  const CrippenTypes types = crippen_types(mol);
  double logp = 0.0;
  for (int i = 0; i < mol.atom_count(); ++i) {
    logp += crippen_contribution(types.heavy[i]);
    if (mol.atoms[i].implicit_hydrogens > 0) {
      logp += mol.atoms[i].implicit_hydrogens * crippen_contribution(types.hydrogen[i]);
    }
  }
  return logp;
}

}  // namespace curiomol
