// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

// Curiosity scenarios shared by the unit tests and the acceptance binary.

#ifndef CURIOMOL_TESTS_CURIOSITY_FIXTURES_HPP_
#define CURIOMOL_TESTS_CURIOSITY_FIXTURES_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "curiomol/chem.hpp"
#include "curiomol/curiosity.hpp"
#include "curiomol/env.hpp"
#include "curiomol/ppo.hpp"
#include "curiomol/selfies.hpp"

namespace curiomol {

//! Rollouts of a fresh policy on the QED task (or a constant oracle).
inline RolloutBatch small_batch(int episodes, RewardMode mode, bool constant_property = false) {
  EnvConfig env;
  env.reward_mode = mode;
  if (constant_property) env.oracle = PropertyOracle::custom([](const MolGraph&) { return 0.5; });
  std::mt19937_64 rng(21);
  const PolicyNet policy = PolicyNet::init(static_cast<int>(default_alphabet().size()), 8, 16, rng);
  return collect_rollouts(policy, env, default_alphabet(), episodes, rng);
}

//! Terminal-target samples for `n` random sequences scored by QED.
inline std::vector<PredictorSample> qed_samples(int n, std::mt19937_64& rng) {
  const Alphabet& alphabet = default_alphabet();
  std::vector<PredictorSample> out;
  while (static_cast<int>(out.size()) < n) {
    const TokenSequence seq = random_sequence(rng, 12);
    if (seq.tokens.empty()) continue;
    PredictorSample s;
    for (const Token& t : seq.tokens) s.tokens.push_back(*alphabet.index_of(t));
    s.targets.emplace_back(s.tokens.size(), qed(decode(seq)));
    out.push_back(std::move(s));
  }
  return out;
}

struct FitResult {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double train_error = 0.0;
  double heldout_error = 0.0;
};

//! 100 fixed (sequence, QED) pairs fitted for 200 passes, plus the mean
//! squared error on those pairs and on 100 unseen ones.
inline FitResult fit_fixed_dataset() {
  CuriosityConfig cfg;
  cfg.embed_dim = 16;
  cfg.hidden_size = 32;
  std::mt19937_64 rng(31);
  const std::vector<PredictorSample> train = qed_samples(100, rng);
  const std::vector<PredictorSample> heldout = qed_samples(100, rng);
  PredictorState pred = PredictorState::init(static_cast<int>(default_alphabet().size()), cfg, 32);
  FitResult r;
  r.initial_loss = predictor_loss(pred.net, train, cfg.dist, nullptr);
  fit_predictor(pred, train, 200, cfg);
  r.final_loss = predictor_loss(pred.net, train, cfg.dist, nullptr);
  r.train_error = r.final_loss;
  r.heldout_error = predictor_loss(pred.net, heldout, cfg.dist, nullptr);
  return r;
}

struct ReinitTrace {
  std::vector<std::int64_t> reinit_counters;  // episode counter after each reinit
  bool unchanged_before_first = true;         // no parameter change before the first point
  bool fresh_at_reinit = true;                // reinit re-draws the net from the predictor rng
};

//! Buffer-mode predictor fed synthetic batches of `batch_size` one-token
//! episodes until `total` episodes. buffer_passes is 0 so a reinit leaves
//! the freshly drawn network in place.
inline ReinitTrace reinit_trace(int batch_size, std::int64_t total) {
  CuriosityConfig cfg;
  cfg.train_mode = TrainMode::Buffer;
  cfg.embed_dim = 4;
  cfg.hidden_size = 4;
  cfg.buffer_passes = 0;
  const int alphabet = static_cast<int>(default_alphabet().size());
  PredictorState pred = PredictorState::init(alphabet, cfg, 41);
  const Eigen::VectorXd initial = flatten(pred.net);
  RolloutBatch batch;
  for (int i = 0; i < batch_size; ++i) {
    Episode e;
    e.actions = {i % 17};
    e.properties = {0.1 * (i % 5)};
    e.final_property = e.properties.back();
    batch.episodes.push_back(e);
  }
  ReinitTrace trace;
  while (pred.episode_counter < total) {
    std::mt19937_64 expected_rng = pred.rng;
    const PredictorTrainStats s = train_predictor(pred, batch, cfg, RewardMode::TerminalOnly);
    if (s.reinitialized) {
      trace.reinit_counters.push_back(pred.episode_counter);
      const PredictorNet expected = PredictorNet::init(alphabet, cfg.embed_dim, cfg.hidden_size, expected_rng);
      if (flatten(pred.net) != flatten(expected)) trace.fresh_at_reinit = false;
    } else if (trace.reinit_counters.empty() && flatten(pred.net) != initial) {
      trace.unchanged_before_first = false;
    }
  }
  return trace;
}

}  // namespace curiomol

#endif  // CURIOMOL_TESTS_CURIOSITY_FIXTURES_HPP_
