// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include "curiomol/curiosity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curiomol/errors.hpp"
#include "curiomol/random.hpp"

namespace curiomol {

void CuriosityConfig::validate() const {
  if (alpha < 0.0) throw ContractViolation("CuriosityConfig: alpha must be >= 0");
  if (batches_kept < 1) throw ContractViolation("CuriosityConfig: batches_kept must be >= 1");
  if (minibatch_size < 1 || passes_per_batch < 0 || buffer_passes < 0) {
    throw ContractViolation("CuriosityConfig: invalid predictor schedule");
  }
  if (!(normalizer_decay > 0.0 && normalizer_decay < 1.0)) {
    throw ContractViolation("CuriosityConfig: normalizer_decay outside (0, 1)");
  }
}

PredictorNet PredictorNet::init(int alphabet_size, int embed_dim, int hidden, std::mt19937_64& rng) {
  PredictorNet p;
  p.encoder = Encoder<double>::init(alphabet_size + 1, embed_dim, hidden, rng);
  p.head = Linear<double>::init(hidden, 1, rng);
  return p;
}

PredictorState PredictorState::init(int alphabet_size, const CuriosityConfig& config, std::uint64_t seed) {
  PredictorState s;
  s.rng.seed(seed);
  s.net = PredictorNet::init(alphabet_size, config.embed_dim, config.hidden_size, s.rng);
  s.adam = AdamState::init(parameter_count(s.net), config.predictor_learning_rate);
  return s;
}

namespace {

// predictions(t, b): head output after sequence b has read t tokens.
Eigen::MatrixXd prediction_table(const PredictorNet& net, const std::vector<std::vector<int>>& seqs,
                                 std::size_t steps, EncoderTrace<double>* keep = nullptr) {
  EncoderTrace<double> trace = encode(net.encoder, teacher_inputs(seqs, net.bos(), steps));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(seqs.size()));
  for (std::size_t t = 0; t < steps; ++t) out.row(static_cast<Eigen::Index>(t)) = linear(net.head, trace.hidden[t]);
  if (keep != nullptr) *keep = std::move(trace);
  return out;
}

double distance_grad(double predicted, double truth, Distance d) {
  const double diff = predicted - truth;
  if (d == Distance::L2) return 2.0 * diff;
  return diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
}

std::vector<int> full_tokens(const Episode& e) {
  std::vector<int> t = e.prefix;
  t.insert(t.end(), e.actions.begin(), e.actions.end());
  return t;
}

}  // namespace

std::vector<double> predict_prefixes(const PredictorNet& net, const std::vector<int>& tokens) {
  const Eigen::MatrixXd table = prediction_table(net, {tokens}, tokens.size() + 1);
  std::vector<double> out;
  for (std::size_t k = 1; k <= tokens.size(); ++k) out.push_back(table(static_cast<Eigen::Index>(k), 0));
  return out;
}

double predict(const PredictorNet& net, const std::vector<int>& tokens) {
  const Eigen::MatrixXd table = prediction_table(net, {tokens}, tokens.size() + 1);
  return table(static_cast<Eigen::Index>(tokens.size()), 0);
}

double distance(double predicted, double truth, Distance d) {
  const double diff = predicted - truth;
  return d == Distance::L1 ? std::abs(diff) : diff * diff;
}

double intrinsic_prediction_error(const PredictorState& pred, const std::vector<int>& tokens, double true_property,
                                  Distance d) {
  return distance(predict(pred.net, tokens), true_property, d);
}

double predictor_loss(const PredictorNet& net, std::span<const PredictorSample> samples, Distance d,
                      PredictorNet* grad) {
  if (grad != nullptr) *grad = zeros_like(net);
  std::vector<std::vector<int>> seqs;
  std::size_t steps = 0;
  std::size_t count = 0;
  for (const PredictorSample& s : samples) {
    for (const auto& [k, target] : s.targets) {
      if (k > s.tokens.size()) throw ContractViolation("predictor_loss: target beyond sequence end");
      steps = std::max(steps, k + 1);
      ++count;
    }
    seqs.push_back(s.tokens);
  }
  if (count == 0) return 0.0;

  EncoderTrace<double> trace;
  const Eigen::MatrixXd table = prediction_table(net, seqs, steps, &trace);
  const double inv_n = 1.0 / static_cast<double>(count);
  Eigen::MatrixXd dtable = Eigen::MatrixXd::Zero(table.rows(), table.cols());
  double loss = 0.0;
  for (std::size_t b = 0; b < samples.size(); ++b) {
    for (const auto& [k, target] : samples[b].targets) {
      const auto r = static_cast<Eigen::Index>(k);
      const auto c = static_cast<Eigen::Index>(b);
      loss += distance(table(r, c), target, d) * inv_n;
      dtable(r, c) += distance_grad(table(r, c), target, d) * inv_n;
    }
  }
  if (grad == nullptr) return loss;

  std::vector<Eigen::MatrixXd> dhidden(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const Eigen::MatrixXd dy = dtable.row(static_cast<Eigen::Index>(t));
    linear_backward(net.head, trace.hidden[t], dy, grad->head, &dhidden[t]);
  }
  encode_backward(net.encoder, trace, dhidden, grad->encoder);
  return loss;
}

std::vector<PredictorSample> predictor_samples(const RolloutBatch& batch, RewardMode reward_mode) {
  std::vector<PredictorSample> out;
  out.reserve(batch.episodes.size());
  for (const Episode& e : batch.episodes) {
    PredictorSample s;
    s.tokens = full_tokens(e);
    if (reward_mode == RewardMode::Dense) {
      for (std::size_t j = 0; j < e.length(); ++j) s.targets.emplace_back(e.prefix.size() + j + 1, e.properties[j]);
    } else if (e.length() > 0) {
      s.targets.emplace_back(s.tokens.size(), e.final_property);
    }
    out.push_back(std::move(s));
  }
  return out;
}

double fit_predictor(PredictorState& pred, std::span<const PredictorSample> samples, int passes,
                     const CuriosityConfig& config) {
  if (samples.empty() || passes <= 0) return 0.0;
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t mb = static_cast<std::size_t>(config.minibatch_size);
  PredictorNet grad = zeros_like(pred.net);
  Eigen::VectorXd params = flatten(pred.net);
  double last = 0.0;
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(pred.rng, i)]);
    double sum = 0.0;
    int batches = 0;
    for (std::size_t lo = 0; lo < order.size(); lo += mb) {
      std::vector<PredictorSample> chunk;
      for (std::size_t i = lo; i < std::min(order.size(), lo + mb); ++i) chunk.push_back(samples[order[i]]);
      const double loss = predictor_loss(pred.net, chunk, config.dist, &grad);
      if (!std::isfinite(loss)) throw NumericalError("fit_predictor: non-finite loss");
      adam_step(pred.adam, params, flatten(grad));
      unflatten(pred.net, params);
      sum += loss;
      ++batches;
    }
    last = sum / batches;
  }
  return last;
}

PredictorTrainStats train_predictor(PredictorState& pred, const RolloutBatch& batch, const CuriosityConfig& config,
                                    RewardMode reward_mode) {
  PredictorTrainStats stats;
  std::vector<PredictorSample> samples = predictor_samples(batch, reward_mode);
  const std::int64_t before = pred.episode_counter;
  pred.episode_counter += static_cast<std::int64_t>(batch.episodes.size());

  if (config.train_mode == TrainMode::PerEpisode) {
    stats.loss = fit_predictor(pred, samples, config.passes_per_batch, config);
    stats.trained = true;
    return stats;
  }

  for (PredictorSample& s : samples) pred.buffer.push_back(std::move(s));
  stats.buffer_size = pred.buffer.size();
  const bool crossed = std::any_of(config.reinit_at_episodes.begin(), config.reinit_at_episodes.end(),
                                   [&](int e) { return before < e && e <= pred.episode_counter; });
  if (!crossed) return stats;

  const int alphabet = pred.net.bos();
  pred.net = PredictorNet::init(alphabet, config.embed_dim, config.hidden_size, pred.rng);
  pred.adam = AdamState::init(parameter_count(pred.net), config.predictor_learning_rate);
  stats.reinitialized = true;
  stats.loss = fit_predictor(pred, pred.buffer, config.buffer_passes, config);
  stats.trained = true;
  return stats;
}

void RunningNormalizer::update(double raw) {
  if (!initialized_) {
    mean_abs_ = std::abs(raw);
    mean_ = raw;
    mean_sq_ = raw * raw;
    initialized_ = true;
    return;
  }
  mean_abs_ = decay_ * mean_abs_ + (1.0 - decay_) * std::abs(raw);
  mean_ = decay_ * mean_ + (1.0 - decay_) * raw;
  mean_sq_ = decay_ * mean_sq_ + (1.0 - decay_) * raw * raw;
}

double RunningNormalizer::scale() const {
  constexpr double kFloor = 1e-8;
  if (!initialized_) return 1.0;
  if (kind_ == NormalizerKind::MeanAbsolute) return std::max(mean_abs_, kFloor);
  return std::max(std::sqrt(std::max(mean_sq_ - mean_ * mean_, 0.0)), kFloor);
}

double combine_rewards(double extrinsic, double intrinsic, double alpha, const RewardNormalizers& norm) {
  return norm.extrinsic.normalize(extrinsic) + alpha * norm.intrinsic.normalize(intrinsic);
}

std::vector<int> greedy_mask(std::span<const double> properties) {
  std::vector<int> mask(properties.size(), 0);
  if (properties.empty()) return mask;
  // A rounded mean can sit an ulp below a constant batch; no entry of an
  // all-equal batch exceeds its mean.
  const auto [lo, hi] = std::minmax_element(properties.begin(), properties.end());
  if (*lo == *hi) return mask;
  const long double sum = std::accumulate(properties.begin(), properties.end(), 0.0L);
  const long double mean = sum / static_cast<long double>(properties.size());
  for (std::size_t i = 0; i < properties.size(); ++i) mask[i] = properties[i] - mean > 0.0L ? 1 : 0;
  return mask;
}

double tanimoto_memory_reward(const Fingerprint& query, std::span<const Fingerprint> memory) {
  if (memory.empty()) return 0.0;
  double sum = 0.0;
  for (const Fingerprint& m : memory) sum += tanimoto(query, m);
  return -sum / static_cast<double>(memory.size());
}

double tanimoto_memory_reward(const MolGraph& mol, std::span<const Fingerprint> memory) {
  if (memory.empty()) return 0.0;
  return tanimoto_memory_reward(morgan_fingerprint(mol, memory.front().radius(), memory.front().width()), memory);
}

TanimotoMemory::TanimotoMemory(int batches_kept) : batches_kept_(batches_kept) {
  if (batches_kept < 1) throw ContractViolation("TanimotoMemory: batches_kept must be >= 1");
}

void TanimotoMemory::push_batch(std::vector<Fingerprint> batch) {
  batches_.push_back(std::move(batch));
  while (static_cast<int>(batches_.size()) > batches_kept_) batches_.pop_front();
}

std::vector<Fingerprint> TanimotoMemory::contents() const {
  std::vector<Fingerprint> out;
  for (const auto& b : batches_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::size_t TanimotoMemory::size() const {
  std::size_t n = 0;
  for (const auto& b : batches_) n += b.size();
  return n;
}

namespace {

struct Slot {
  std::size_t episode;
  std::size_t step;
  double property;
};

// Reward-bearing (episode, step) pairs in step order.
std::vector<Slot> reward_slots(const RolloutBatch& batch, RewardMode reward_mode) {
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < batch.episodes.size(); ++i) {
    const Episode& e = batch.episodes[i];
    if (e.length() == 0) continue;
    if (reward_mode == RewardMode::Dense) {
      for (std::size_t j = 0; j < e.length(); ++j) slots.push_back({i, j, e.properties[j]});
    } else {
      slots.push_back({i, e.length() - 1, e.final_property});
    }
  }
  return slots;
}

}  // namespace

IntrinsicStats assign_intrinsic(RolloutBatch& batch, const PredictorState* pred, const TanimotoMemory* memory,
                                const CuriosityConfig& config, RewardMode reward_mode, RewardNormalizers* norm) {
  IntrinsicStats stats;
  for (Episode& e : batch.episodes) e.intrinsic.assign(e.length(), 0.0);
  if (!config.active()) return stats;

  const std::vector<Slot> slots = reward_slots(batch, reward_mode);
  std::vector<double> raw(slots.size(), 0.0);

  if (config.mode == CuriosityMode::PredictionError) {
    if (pred == nullptr) throw ContractViolation("assign_intrinsic: prediction mode needs a predictor");
    std::vector<std::vector<int>> seqs;
    std::size_t steps = 0;
    for (const Episode& e : batch.episodes) {
      seqs.push_back(full_tokens(e));
      steps = std::max(steps, seqs.back().size() + 1);
    }
    const Eigen::MatrixXd table = prediction_table(pred->net, seqs, steps);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const Episode& e = batch.episodes[slots[s].episode];
      const auto k = static_cast<Eigen::Index>(e.prefix.size() + slots[s].step + 1);
      raw[s] = distance(table(k, static_cast<Eigen::Index>(slots[s].episode)), slots[s].property, config.dist);
    }
  } else {
    if (memory == nullptr) throw ContractViolation("assign_intrinsic: memory mode needs a memory");
    const std::vector<Fingerprint> mem = memory->contents();
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const Episode& e = batch.episodes[slots[s].episode];
      if (reward_mode == RewardMode::Dense) {
        const std::span<const Token> all(e.final_state.tokens);
        raw[s] = tanimoto_memory_reward(decode(all.first(e.prefix.size() + slots[s].step + 1)), mem);
      } else {
        raw[s] = tanimoto_memory_reward(e.final_molecule, mem);
      }
    }
  }

  if (norm != nullptr && !config.normalize_after_mask) {
    for (double r : raw) norm->intrinsic.update(r);
  }
  if (config.greedy) {
    std::vector<double> props;
    for (const Slot& s : slots) props.push_back(s.property);
    const std::vector<int> mask = greedy_mask(props);
    int pass = 0;
    for (std::size_t s = 0; s < raw.size(); ++s) {
      raw[s] *= mask[s];
      pass += mask[s];
    }
    stats.mask_pass_rate = slots.empty() ? 0.0 : static_cast<double>(pass) / static_cast<double>(slots.size());
  }

  for (std::size_t s = 0; s < slots.size(); ++s) {
    batch.episodes[slots[s].episode].intrinsic[slots[s].step] = raw[s];
    stats.mean += raw[s];
    stats.max = s == 0 ? raw[s] : std::max(stats.max, raw[s]);
  }
  if (!slots.empty()) stats.mean /= static_cast<double>(slots.size());
  return stats;
}

void assign_total_rewards(RolloutBatch& batch, RewardNormalizers& norm, const CuriosityConfig& config,
                          RewardMode reward_mode) {
  const std::vector<Slot> slots = reward_slots(batch, reward_mode);
  const bool curious = config.active();
  for (const Slot& s : slots) {
    const Episode& e = batch.episodes[s.episode];
    norm.extrinsic.update(e.extrinsic[s.step]);
    if (curious && config.normalize_after_mask) norm.intrinsic.update(e.intrinsic[s.step]);
  }
  for (Episode& e : batch.episodes) e.total.assign(e.length(), 0.0);
  const double alpha = curious ? config.alpha : 0.0;
  for (const Slot& s : slots) {
    Episode& e = batch.episodes[s.episode];
    e.total[s.step] = combine_rewards(e.extrinsic[s.step], e.intrinsic[s.step], alpha, norm);
  }
}

}  // namespace curiomol
