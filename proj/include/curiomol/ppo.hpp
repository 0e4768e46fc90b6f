// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_PPO_HPP_
#define CURIOMOL_PPO_HPP_

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "curiomol/env.hpp"
#include "curiomol/neural.hpp"
#include "curiomol/selfies.hpp"

namespace curiomol {

//! Token embedding -> LSTM -> {action logits, state value}. The embedding
//! vocabulary is the alphabet plus one begin-of-sequence index (= |A|).
struct PolicyNet {
  using scalar_type = double;
  Encoder<double> encoder;
  Linear<double> action_head;
  Linear<double> value_head;

  static PolicyNet init(int alphabet_size, int embed_dim, int hidden, std::mt19937_64& rng);

  int alphabet_size() const { return static_cast<int>(action_head.w.rows()); }
  int bos() const { return alphabet_size(); }

  template <typename F>
  void visit(F&& f) {
    encoder.visit(f);
    action_head.visit(f);
    value_head.visit(f);
  }
  template <typename F>
  void visit(F&& f) const {
    encoder.visit(f);
    action_head.visit(f);
    value_head.visit(f);
  }
};

//! One trajectory. Per-step vectors all have length() entries.
struct Episode {
  std::vector<int> prefix;   // alphabet indices of the initial tokens
  std::vector<int> actions;  // alphabet indices chosen by the policy
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> extrinsic;
  std::vector<double> intrinsic;
  std::vector<double> total;
  std::vector<double> advantages;
  std::vector<double> returns;
  std::vector<double> properties;  // p(mol) after each step
  TokenSequence final_state;
  MolGraph final_molecule;
  double final_property = 0.0;

  std::size_t length() const { return actions.size(); }
};

struct RolloutBatch {
  std::vector<Episode> episodes;

  std::size_t step_count() const;
};

struct PpoConfig {
  double clip_ratio = 0.1;
  int epochs_per_batch = 3;
  int minibatch_count = 4;
  double value_loss_coeff = 1.0;
  double entropy_coeff = 0.01;
  double gae_lambda = 0.95;
  double discount = 0.99;
  double learning_rate = 2.5e-4;
  int episodes_per_batch = 64;
  int total_episodes = 1000;
  int embed_dim = 32;
  int hidden_size = 64;

  void validate() const;
};

//! Samples `episodes` trajectories in lockstep. Extrinsic rewards follow
//! env.reward_mode; intrinsic and total rewards are left at zero.
RolloutBatch collect_rollouts(const PolicyNet& policy, const EnvConfig& env, const Alphabet& alphabet,
                              int episodes, std::mt19937_64& rng);

//! GAE over the `total` rewards: delta_t = r_t + gamma V_{t+1} - V_t with
//! V = 0 past the end. returns = A + V (before normalization). When
//! `normalize`, advantages are then shifted and scaled to zero mean and unit
//! population variance over every step in the batch.
void compute_gae(RolloutBatch& batch, double gamma, double lambda, bool normalize = true);

struct PpoLoss {
  double total = 0.0;
  double policy = 0.0;   // -mean clipped surrogate
  double value = 0.0;    // mean squared error
  double entropy = 0.0;  // mean policy entropy
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

//! Clipped-surrogate loss over the selected episodes, recomputing the
//! policy from stored tokens. Writes the gradient into `grad` if non-null
//! (grad must have the policy's shapes; it is overwritten).
PpoLoss ppo_loss(const PolicyNet& policy, const RolloutBatch& batch, std::span<const std::size_t> episodes,
                 const PpoConfig& config, PolicyNet* grad);

struct PpoStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  int updates = 0;
};

//! epochs x minibatches Adam steps over a shuffled episode split. Throws
//! NumericalError on a non-finite loss.
PpoStats ppo_update(PolicyNet& policy, AdamState& adam, const RolloutBatch& batch, const PpoConfig& config,
                    std::mt19937_64& rng);

//! Action distribution after the policy has read `tokens` (alphabet indices).
Eigen::VectorXd action_probabilities(const PolicyNet& policy, const std::vector<int>& tokens);

}  // namespace curiomol

#endif  // CURIOMOL_PPO_HPP_
