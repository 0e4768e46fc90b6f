// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

// Small PPO instances shared by the unit tests and the acceptance binary.

#ifndef CURIOMOL_TESTS_PPO_FIXTURES_HPP_
#define CURIOMOL_TESTS_PPO_FIXTURES_HPP_

#include <random>

#include "curiomol/chem.hpp"
#include "curiomol/env.hpp"
#include "curiomol/ppo.hpp"
#include "curiomol/selfies.hpp"

namespace curiomol {

//! Two-token alphabet ([C], [STOP]), horizon 3, a tiny policy and one batch
//! with normalized advantages.
struct PpoFixture {
  Alphabet alphabet{{Token::atom(Element::C), Token::stop()}};
  EnvConfig env;
  PpoConfig config;
  PolicyNet policy;
  RolloutBatch batch;

  PpoFixture() {
    env.horizon = 3;
    env.oracle = PropertyOracle::penalized_logp_oracle();
    std::mt19937_64 rng(17);
    policy = PolicyNet::init(2, 3, 4, rng);
    batch = collect_rollouts(policy, env, alphabet, 6, rng);
    for (Episode& e : batch.episodes) {
      for (std::size_t j = 0; j < e.length(); ++j) e.total[j] = e.extrinsic[j] + 0.1 * static_cast<double>(j);
    }
    compute_gae(batch, config.discount, config.gae_lambda);
  }

  //! Moves every other behavior log-prob by +/-delta.
  void shift_old_log_probs(double delta) {
    int k = 0;
    for (Episode& e : batch.episodes) {
      for (double& lp : e.log_probs) lp += (k++ % 2 == 0) ? delta : -delta;
    }
  }
};

struct BanditResult {
  double final_probability = 0.0;
  int batches = 0;
};

//! Single-step environment over the default alphabet paying 1 for a lone
//! [F] and 0 otherwise; PPO defaults, 64 episodes per batch. Stops as soon
//! as P([F]) > 0.9 or after `max_batches`.
inline BanditResult run_bandit(int max_batches, std::uint64_t seed = 0) {
  const Alphabet& alphabet = default_alphabet();
  const int target = *alphabet.index_of(Token::atom(Element::F));
  EnvConfig env;
  env.horizon = 1;
  env.oracle = PropertyOracle::custom([](const MolGraph& m) {
    return m.atom_count() == 1 && m.atoms[0].element == Element::F ? 1.0 : 0.0;
  });
  PpoConfig cfg;
  std::mt19937_64 rng(seed);
  PolicyNet policy = PolicyNet::init(static_cast<int>(alphabet.size()), cfg.embed_dim, cfg.hidden_size, rng);
  AdamState adam = AdamState::init(parameter_count(policy), cfg.learning_rate);
  BanditResult r;
  while (r.batches < max_batches) {
    RolloutBatch batch = collect_rollouts(policy, env, alphabet, cfg.episodes_per_batch, rng);
    for (Episode& e : batch.episodes) e.total = e.extrinsic;
    compute_gae(batch, cfg.discount, cfg.gae_lambda);
    ppo_update(policy, adam, batch, cfg, rng);
    ++r.batches;
    r.final_probability = action_probabilities(policy, {})[target];
    if (r.final_probability > 0.9) break;
  }
  return r;
}

}  // namespace curiomol

#endif  // CURIOMOL_TESTS_PPO_FIXTURES_HPP_
