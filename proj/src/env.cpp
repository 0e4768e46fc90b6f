// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include "curiomol/env.hpp"

#include "curiomol/errors.hpp"

namespace curiomol {

void EnvConfig::validate() const {
  if (horizon < 1) throw ContractViolation("EnvConfig: horizon must be >= 1");
  if (static_cast<int>(initial_tokens.size()) >= horizon) {
    throw ContractViolation("EnvConfig: initial tokens must be shorter than the horizon");
  }
  if (initial_tokens.terminated) throw ContractViolation("EnvConfig: initial tokens contain [STOP]");
}

StepResult reset(const EnvConfig& config) {
  config.validate();
  StepResult r;
  r.state = config.initial_tokens;
  r.molecule = decode(r.state);
  r.property = config.oracle.evaluate(r.molecule);
  return r;
}

StepResult step(const StepResult& prev, const Token& action, const EnvConfig& config) {
  if (prev.state.terminated || static_cast<int>(prev.state.size()) >= config.horizon) {
    throw ContractViolation("step: episode already finished");
  }
  StepResult r;
  r.state = prev.state;
  r.state.push_back(action);
  r.done = r.state.terminated || static_cast<int>(r.state.size()) == config.horizon;
  if (action.is_stop()) {
    r.molecule = prev.molecule;
    r.property = prev.property;
  } else {
    r.molecule = decode(r.state);
    r.property = config.oracle.evaluate(r.molecule);
  }
  if (config.reward_mode == RewardMode::Dense) {
    r.reward = r.property - prev.property;
  } else {
    r.reward = r.done ? r.property : 0.0;
  }
  return r;
}

StepResult step(const TokenSequence& state, const Token& action, const EnvConfig& config) {
  StepResult prev;
  prev.state = state;
  prev.molecule = decode(state);
  prev.property = config.oracle.evaluate(prev.molecule);
  return step(prev, action, config);
}

double episode_return(std::span<const double> rewards, double discount) {
  double total = 0.0;
  double scale = 1.0;
  for (double r : rewards) {
    total += scale * r;
    scale *= discount;
  }
  return total;
}

}  // namespace curiomol
