// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_CURIOSITY_HPP_
#define CURIOMOL_CURIOSITY_HPP_

#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "curiomol/chem.hpp"
#include "curiomol/env.hpp"
#include "curiomol/neural.hpp"
#include "curiomol/ppo.hpp"

namespace curiomol {

enum class Distance { L1, L2 };
enum class TrainMode { PerEpisode, Buffer };
enum class CuriosityMode { PredictionError, TanimotoMemory, Off };
//! MeanAbsolute divides by an EMA of |r|; RootMeanSquare by an EMA-based
//! running standard deviation.
enum class NormalizerKind { MeanAbsolute, RootMeanSquare };

struct CuriosityConfig {
  double alpha = 1.0;
  Distance dist = Distance::L2;
  bool greedy = false;
  TrainMode train_mode = TrainMode::PerEpisode;
  std::vector<int> reinit_at_episodes{200, 500};
  CuriosityMode mode = CuriosityMode::PredictionError;
  int batches_kept = 2;

  double predictor_learning_rate = 1e-3;
  int passes_per_batch = 4;   // PerEpisode
  int buffer_passes = 50;     // Buffer, at each reinit point
  int minibatch_size = 16;
  int embed_dim = 32;
  int hidden_size = 64;

  NormalizerKind normalizer = NormalizerKind::MeanAbsolute;
  double normalizer_decay = 0.99;
  bool normalize_after_mask = true;

  //! Off, or alpha == 0, means no intrinsic reward at all.
  bool active() const { return mode != CuriosityMode::Off && alpha != 0.0; }
  void validate() const;
};

// ---------------------------------------------------------------------------
// Property predictor
// ---------------------------------------------------------------------------

//! Same encoder architecture as the policy plus a scalar head.
struct PredictorNet {
  using scalar_type = double;
  Encoder<double> encoder;
  Linear<double> head;

  static PredictorNet init(int alphabet_size, int embed_dim, int hidden, std::mt19937_64& rng);
  int bos() const { return static_cast<int>(encoder.embedding.table.cols()) - 1; }

  template <typename F>
  void visit(F&& f) {
    encoder.visit(f);
    head.visit(f);
  }
  template <typename F>
  void visit(F&& f) const {
    encoder.visit(f);
    head.visit(f);
  }
};

//! Token indices plus (prefix length, true property) training targets.
struct PredictorSample {
  std::vector<int> tokens;
  std::vector<std::pair<std::size_t, double>> targets;
};

struct PredictorState {
  PredictorNet net;
  AdamState adam;
  std::vector<PredictorSample> buffer;
  std::int64_t episode_counter = 0;
  std::mt19937_64 rng;  // re-initialization and minibatch shuffling

  static PredictorState init(int alphabet_size, const CuriosityConfig& config, std::uint64_t seed);
};

//! Predictions after each prefix length 1..|tokens|.
std::vector<double> predict_prefixes(const PredictorNet& net, const std::vector<int>& tokens);
//! Prediction after reading all of `tokens`.
double predict(const PredictorNet& net, const std::vector<int>& tokens);

double distance(double predicted, double truth, Distance d);

//! |p_hat - p| or (p_hat - p)^2 for the whole token sequence. Read-only.
double intrinsic_prediction_error(const PredictorState& pred, const std::vector<int>& tokens, double true_property,
                                  Distance d);

//! Mean distance over all targets; writes the gradient when `grad` is
//! non-null (overwritten).
double predictor_loss(const PredictorNet& net, std::span<const PredictorSample> samples, Distance d,
                      PredictorNet* grad);

//! Training samples from a batch: the final molecule only (TerminalOnly) or
//! every prefix molecule (Dense).
std::vector<PredictorSample> predictor_samples(const RolloutBatch& batch, RewardMode reward_mode);

//! `passes` shuffled sweeps of Adam minibatch steps. Returns the mean loss
//! over the last sweep.
double fit_predictor(PredictorState& pred, std::span<const PredictorSample> samples, int passes,
                     const CuriosityConfig& config);

struct PredictorTrainStats {
  bool trained = false;
  bool reinitialized = false;
  double loss = 0.0;
  std::size_t buffer_size = 0;
};

//! PerEpisode: passes_per_batch sweeps over the new samples. Buffer: append
//! to the buffer; when the episode counter crosses a reinit point the
//! network and its optimizer are re-drawn and trained buffer_passes sweeps on
//! the whole buffer. The counter advances by the batch's episode count.
PredictorTrainStats train_predictor(PredictorState& pred, const RolloutBatch& batch, const CuriosityConfig& config,
                                    RewardMode reward_mode);

// ---------------------------------------------------------------------------
// Normalization, masking, combination
// ---------------------------------------------------------------------------

class RunningNormalizer {
 public:
  explicit RunningNormalizer(double decay = 0.99, NormalizerKind kind = NormalizerKind::MeanAbsolute)
      : decay_(decay), kind_(kind) {}

  void update(double raw);
  //! Current divisor, floored at 1e-8; 1 before the first update.
  double scale() const;
  bool initialized() const { return initialized_; }
  double normalize(double raw) const { return raw / scale(); }

 private:
  double decay_;
  NormalizerKind kind_;
  bool initialized_ = false;
  double mean_abs_ = 0.0;
  double mean_ = 0.0;
  double mean_sq_ = 0.0;
};

struct RewardNormalizers {
  RunningNormalizer extrinsic;
  RunningNormalizer intrinsic;
};

//! ext / scale_ext + alpha * intr / scale_intr.
double combine_rewards(double extrinsic, double intrinsic, double alpha, const RewardNormalizers& norm);

//! mask_i = 1 iff properties[i] > mean(properties).
std::vector<int> greedy_mask(std::span<const double> properties);

// ---------------------------------------------------------------------------
// Tanimoto memory
// ---------------------------------------------------------------------------

//! -mean tanimoto(fp(mol), m) over the memory; 0 when empty.
double tanimoto_memory_reward(const Fingerprint& query, std::span<const Fingerprint> memory);
double tanimoto_memory_reward(const MolGraph& mol, std::span<const Fingerprint> memory);

//! Fingerprints of the final molecules of the last `batches_kept` batches.
class TanimotoMemory {
 public:
  explicit TanimotoMemory(int batches_kept = 2);

  void push_batch(std::vector<Fingerprint> batch);
  std::vector<Fingerprint> contents() const;
  std::size_t size() const;
  int batches_kept() const { return batches_kept_; }

 private:
  int batches_kept_;
  std::deque<std::vector<Fingerprint>> batches_;
};

struct IntrinsicStats {
  double mean = 0.0;
  double max = 0.0;
  double mask_pass_rate = 1.0;
};

//! Fills Episode::intrinsic at the reward-bearing steps (the last step in
//! TerminalOnly, every step in Dense), applying the greedy mask when
//! configured. All zeros when curiosity is inactive. `pred` is used in
//! PredictionError mode and `memory` in TanimotoMemory mode. When
//! normalize_after_mask is false, `norm` (if given) is fed the intrinsic
//! values before the mask is applied.
IntrinsicStats assign_intrinsic(RolloutBatch& batch, const PredictorState* pred, const TanimotoMemory* memory,
                                const CuriosityConfig& config, RewardMode reward_mode,
                                RewardNormalizers* norm = nullptr);

//! Updates the normalizers with the batch's reward-bearing raw values in
//! step order (the intrinsic stream only when normalize_after_mask), then
//! writes Episode::total via combine_rewards. Steps that bear no reward get 0.
void assign_total_rewards(RolloutBatch& batch, RewardNormalizers& norm, const CuriosityConfig& config,
                          RewardMode reward_mode);

}  // namespace curiomol

#endif  // CURIOMOL_CURIOSITY_HPP_
