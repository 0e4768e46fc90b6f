// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <utility>
#include <stdexcept>

#include "curiomol/chem.hpp"
#include "curiomol/errors.hpp"
#include "perception.hpp"

namespace curiomol {

namespace {

struct BondCounts {
  int single = 0;
  int dbl = 0;
  int triple = 0;
  int arom = 0;
};

BondCounts count_bonds(const Perception& p, int atom) {
  BondCounts n;
  for (const Neighbor& nb : p.adj[atom]) {
    if (p.aromatic_bond[nb.bond]) {
      ++n.arom;
    } else if (nb.order == 1) {
      ++n.single;
    } else if (nb.order == 2) {
      ++n.dbl;
    } else {
      ++n.triple;
    }
  }
  return n;
}

// Group contributions for neutral N and O (Ertl TPSA, N/O only).
double nitrogen_psa(int degree, int h, const BondCounts& n, bool in3) {
  double v = -1.0;
  if (degree == 1) {
    if (h == 0 && n.triple == 1) v = 23.79;
    else if (h == 1 && n.dbl == 1) v = 23.85;
    else if (h == 2 && n.single == 1) v = 26.02;
  } else if (degree == 2) {
    if (h == 0 && n.single == 1 && n.dbl == 1) v = 12.36;
    else if (h == 0 && n.triple == 1 && n.dbl == 1) v = 13.60;
    else if (h == 1 && n.single == 2) v = in3 ? 21.94 : 12.03;
    else if (h == 0 && n.arom == 2) v = 12.89;
    else if (h == 1 && n.arom == 2) v = 15.79;
  } else if (degree == 3) {
    if (h == 0 && n.single == 3) v = in3 ? 3.01 : 3.24;
    else if (h == 0 && n.single == 1 && n.dbl == 2) v = 11.68;
    else if (h == 0 && n.arom == 3) v = 4.41;
    else if (h == 0 && n.single == 1 && n.arom == 2) v = 4.93;
    else if (h == 0 && n.dbl == 1 && n.arom == 2) v = 8.39;
  }
  if (v < 0.0) v = std::max(0.0, 30.5 - 8.2 * degree + 1.5 * h);
  return v;
}

double oxygen_psa(int degree, int h, const BondCounts& n, bool in3) {
  double v = -1.0;
  if (degree == 1) {
    if (h == 0 && n.dbl == 1) v = 17.07;
    else if (h == 1 && n.single == 1) v = 20.23;
  } else if (degree == 2) {
    if (h == 0 && n.single == 2) v = in3 ? 12.53 : 9.23;
    else if (h == 0 && n.arom == 2) v = 13.14;
  }
  if (v < 0.0) v = std::max(0.0, 28.5 - 8.6 * degree + 1.5 * h);
  return v;
}

double tpsa(const MolGraph& mol, const Perception& p) {
  double total = 0.0;
  for (int i = 0; i < mol.atom_count(); ++i) {
    const Atom& a = mol.atoms[i];
    const int degree = static_cast<int>(p.adj[i].size());
    if (a.element == Element::N) {
      total += nitrogen_psa(degree, a.implicit_hydrogens, count_bonds(p, i), p.in_ring3[i]);
    } else if (a.element == Element::O) {
      total += oxygen_psa(degree, a.implicit_hydrogens, count_bonds(p, i), p.in_ring3[i]);
    }
  }
  return total;
}

const QedParameter& qed_parameter(std::string_view name) {
  for (const QedParameter& q : qed_parameters()) {
    if (q.name == name) return q;
  }
  throw ContractViolation("unknown QED descriptor " + std::string(name));
}

}  // namespace

double tpsa(const MolGraph& mol) { return tpsa(mol, perceive(mol)); }

double molecular_weight(const MolGraph& mol) {
  double mw = 0.0;
  for (const Atom& a : mol.atoms) {
    mw += atomic_mass(a.element) + kHydrogenMass * a.implicit_hydrogens;
  }
  return mw;
}

DescriptorVector descriptors(const MolGraph& mol) {
  DescriptorVector d;
  if (mol.empty()) return d;
  const Perception p = perceive(mol);
  d.molecular_weight = molecular_weight(mol);
  d.logp = crippen_logp(mol);
  for (const Atom& a : mol.atoms) {
    if (a.element == Element::N || a.element == Element::O) {
      ++d.hbond_acceptors;
      if (a.implicit_hydrogens > 0) ++d.hbond_donors;
    }
  }
  const auto in_cycle = ring_bonds(mol);
  for (int i = 0; i < mol.bond_count(); ++i) {
    const Bond& b = mol.bonds[i];
    if (b.order != 1 || in_cycle[i]) continue;
    if (p.adj[b.a].size() >= 2 && p.adj[b.b].size() >= 2) ++d.rotatable_bonds;
  }
  d.ring_count = ring_count(mol);
  d.aromatic_ring_count = static_cast<int>(p.aromatic.size());
  d.polar_surface_area = tpsa(mol, p);
  return d;
}

double qed_desirability(std::string_view name, double x) {
  const QedParameter& q = qed_parameter(name);
  const double exp1 = 1.0 + std::exp(-(x - q.c + q.d / 2.0) / q.e);
  const double exp2 = 1.0 + std::exp(-(x - q.c - q.d / 2.0) / q.f);
  return (q.a + q.b / exp1 * (1.0 - 1.0 / exp2)) / q.dmax;
}

double qed(const DescriptorVector& d) {
  const std::pair<const char*, double> inputs[] = {
      {"MW", d.molecular_weight},
      {"ALOGP", d.logp},
      {"HBA", static_cast<double>(d.hbond_acceptors)},
      {"HBD", static_cast<double>(d.hbond_donors)},
      {"PSA", d.polar_surface_area},
      {"ROTB", static_cast<double>(d.rotatable_bonds)},
      {"AROM", static_cast<double>(d.aromatic_ring_count)},
      {"ALERTS", 0.0},
  };
  double weighted_log = 0.0;
  double weight_sum = 0.0;
  for (const auto& [name, x] : inputs) {
    const double w = qed_parameter(name).weight;
    weighted_log += w * std::log(qed_desirability(name, x));
    weight_sum += w;
  }
  return std::exp(weighted_log / weight_sum);
}

double qed(const MolGraph& mol) {
  if (mol.empty()) return 0.0;
  return qed(descriptors(mol));
}

double sa_proxy(const MolGraph& mol) {
  const auto adj = adjacency(mol);
  int branch_points = 0;
  for (const auto& nbrs : adj) branch_points += nbrs.size() >= 3 ? 1 : 0;
  return 0.05 * mol.atom_count() + 0.5 * ring_count(mol) + 0.25 * branch_points;
}

double penalized_logp(const MolGraph& mol) {
  if (mol.empty()) return 0.0;
  return penalized_logp(crippen_logp(mol), sa_proxy(mol), ring_count(mol));
}

PropertyOracle PropertyOracle::qed_oracle() { return {PropertyKind::QED, std::nullopt}; }

PropertyOracle PropertyOracle::penalized_logp_oracle() {
  return {PropertyKind::PenalizedLogP, std::nullopt};
}

PropertyOracle PropertyOracle::similarity_oracle(Fingerprint target) {
  return {PropertyKind::Similarity, std::move(target)};
}

PropertyOracle PropertyOracle::custom(std::function<double(const MolGraph&)> fn) {
  return {PropertyKind::Custom, std::nullopt, std::move(fn)};
}

double PropertyOracle::evaluate(const MolGraph& mol) const {
  if (mol.empty()) return 0.0;
  switch (kind_) {
    case PropertyKind::QED:
      return qed(mol);
    case PropertyKind::PenalizedLogP:
      return penalized_logp(mol);
    case PropertyKind::Similarity:
      return tanimoto(morgan_fingerprint(mol, target_->radius(), target_->width()), *target_);
    case PropertyKind::Custom:
      return fn_(mol);
  }
  return 0.0;
}

}  // namespace curiomol
