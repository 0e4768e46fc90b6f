// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_ENV_HPP_
#define CURIOMOL_ENV_HPP_

#include <span>

#include "curiomol/chem.hpp"
#include "curiomol/selfies.hpp"

namespace curiomol {

enum class RewardMode { TerminalOnly, Dense };

struct EnvConfig {
  int horizon = 35;
  RewardMode reward_mode = RewardMode::TerminalOnly;
  double discount = 0.99;
  TokenSequence initial_tokens;
  PropertyOracle oracle = PropertyOracle::qed_oracle();

  //! Throws ContractViolation unless horizon >= 1, |initial_tokens| < horizon
  //! and the initial tokens contain no Stop.
  void validate() const;
};

struct StepResult {
  TokenSequence state;
  double reward = 0.0;  // extrinsic r_t
  bool done = false;
  MolGraph molecule;    // decode(state)
  double property = 0.0;  // oracle(molecule)
};

StepResult reset(const EnvConfig& config);

//! Appends `action` to `state`. A Stop is appended too: it consumes a step
//! and ends the episode but decodes to nothing. done iff Stop or
//! |state'| == horizon. TerminalOnly pays p(mol) at done and 0 before;
//! Dense pays p(mol(t)) - p(mol(t-1)) on every step.
//! Throws ContractViolation when `state` is already finished.
StepResult step(const TokenSequence& state, const Token& action, const EnvConfig& config);

//! Same transition, reusing the molecule property carried by `prev` instead
//! of re-evaluating the oracle on the previous state.
StepResult step(const StepResult& prev, const Token& action, const EnvConfig& config);

//! sum_t discount^t rewards[t].
double episode_return(std::span<const double> rewards, double discount);

}  // namespace curiomol

#endif  // CURIOMOL_ENV_HPP_
