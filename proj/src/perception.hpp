// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_SRC_PERCEPTION_HPP_
#define CURIOMOL_SRC_PERCEPTION_HPP_

#include <vector>

#include "curiomol/molgraph.hpp"

namespace curiomol {

// Ring and aromaticity facts shared by the logP typer and TPSA.
struct Perception {
  std::vector<std::vector<Neighbor>> adj;
  std::vector<std::vector<int>> rings;
  std::vector<std::vector<int>> aromatic;
  std::vector<bool> aromatic_atom;
  std::vector<bool> aromatic_bond;
  std::vector<bool> in_ring3;
};

Perception perceive(const MolGraph& mol);

}  // namespace curiomol

#endif  // CURIOMOL_SRC_PERCEPTION_HPP_
