// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include "curiomol/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curiomol/errors.hpp"
#include "curiomol/random.hpp"

namespace curiomol {

PolicyNet PolicyNet::init(int alphabet_size, int embed_dim, int hidden, std::mt19937_64& rng) {
  PolicyNet p;
  p.encoder = Encoder<double>::init(alphabet_size + 1, embed_dim, hidden, rng);
  p.action_head = Linear<double>::init(hidden, alphabet_size, rng);
  p.value_head = Linear<double>::init(hidden, 1, rng);
  return p;
}

std::size_t RolloutBatch::step_count() const {
  std::size_t n = 0;
  for (const Episode& e : episodes) n += e.length();
  return n;
}

void PpoConfig::validate() const {
  if (!(clip_ratio > 0.0)) throw ContractViolation("PpoConfig: clip_ratio must be > 0");
  if (gae_lambda < 0.0 || gae_lambda > 1.0) throw ContractViolation("PpoConfig: gae_lambda outside [0, 1]");
  if (epochs_per_batch < 1 || minibatch_count < 1) throw ContractViolation("PpoConfig: epochs and minibatches must be >= 1");
  if (episodes_per_batch < 1 || total_episodes < 1) throw ContractViolation("PpoConfig: episode counts must be >= 1");
}

namespace {

int sample_categorical(const Eigen::VectorXd& log_probs, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  const int n = static_cast<int>(log_probs.size());
  for (int i = 0; i < n; ++i) {
    acc += std::exp(log_probs[i]);
    if (u < acc) return i;
  }
  // Rounding left u above the cumulative sum; take the last positive entry.
  for (int i = n - 1; i >= 0; --i) {
    if (std::exp(log_probs[i]) > 0.0) return i;
  }
  return n - 1;
}

std::vector<int> token_indices(const TokenSequence& seq, const Alphabet& alphabet) {
  std::vector<int> out;
  for (const Token& t : seq.tokens) {
    const auto i = alphabet.index_of(t);
    if (!i) throw ContractViolation("token " + to_string(t) + " is not in the alphabet");
    out.push_back(*i);
  }
  return out;
}

}  // namespace

RolloutBatch collect_rollouts(const PolicyNet& policy, const EnvConfig& env, const Alphabet& alphabet,
                              int episodes, std::mt19937_64& rng) {
  if (policy.alphabet_size() != static_cast<int>(alphabet.size())) {
    throw ContractViolation("collect_rollouts: policy head does not match the alphabet");
  }
  const StepResult start = reset(env);
  const std::vector<int> prefix = token_indices(start.state, alphabet);
  const int H = policy.encoder.hidden_size();
  const Eigen::Index B = episodes;

  RolloutBatch batch;
  batch.episodes.resize(static_cast<std::size_t>(episodes));
  std::vector<StepResult> states(batch.episodes.size(), start);
  std::vector<bool> active(batch.episodes.size(), true);
  for (Episode& e : batch.episodes) e.prefix = prefix;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(H, B);
  Eigen::MatrixXd c = h;
  Eigen::MatrixXd h2, c2;
  auto feed = [&](const std::vector<int>& inputs) {
    lstm_step(policy.encoder.lstm, embed(policy.encoder.embedding, inputs), h, c, h2, c2);
    std::swap(h, h2);
    std::swap(c, c2);
  };
  feed(std::vector<int>(batch.episodes.size(), policy.bos()));
  for (int tok : prefix) feed(std::vector<int>(batch.episodes.size(), tok));

  std::size_t remaining = batch.episodes.size();
  std::vector<int> inputs(batch.episodes.size());
  while (remaining > 0) {
    const Eigen::MatrixXd logp = log_softmax(linear(policy.action_head, h));
    const Eigen::MatrixXd value = linear(policy.value_head, h);
    for (std::size_t b = 0; b < batch.episodes.size(); ++b) {
      inputs[b] = -1;
      if (!active[b]) continue;
      const auto col = static_cast<Eigen::Index>(b);
      const int a = sample_categorical(logp.col(col), rng);
      Episode& e = batch.episodes[b];
      StepResult next = step(states[b], alphabet[static_cast<std::size_t>(a)], env);
      e.actions.push_back(a);
      e.log_probs.push_back(logp(a, col));
      e.values.push_back(value(0, col));
      e.extrinsic.push_back(next.reward);
      e.properties.push_back(next.property);
      inputs[b] = a;
      if (next.done) {
        active[b] = false;
        --remaining;
        e.final_state = next.state;
        e.final_molecule = next.molecule;
        e.final_property = next.property;
      }
      states[b] = std::move(next);
    }
    if (remaining > 0) feed(inputs);
  }

  for (Episode& e : batch.episodes) {
    const std::size_t n = e.length();
    e.intrinsic.assign(n, 0.0);
    e.total.assign(n, 0.0);
    e.advantages.assign(n, 0.0);
    e.returns.assign(n, 0.0);
  }
  return batch;
}

void compute_gae(RolloutBatch& batch, double gamma, double lambda, bool normalize) {
  for (Episode& e : batch.episodes) {
    const std::size_t n = e.length();
    e.advantages.assign(n, 0.0);
    e.returns.assign(n, 0.0);
    double running = 0.0;
    for (std::size_t t = n; t-- > 0;) {
      const double next_value = t + 1 < n ? e.values[t + 1] : 0.0;
      const double delta = e.total[t] + gamma * next_value - e.values[t];
      running = delta + gamma * lambda * running;
      e.advantages[t] = running;
      e.returns[t] = running + e.values[t];
    }
  }
  if (!normalize) return;
  const std::size_t count = batch.step_count();
  if (count < 2) return;
  double mean = 0.0;
  for (const Episode& e : batch.episodes) {
    for (double a : e.advantages) mean += a;
  }
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (const Episode& e : batch.episodes) {
    for (double a : e.advantages) var += (a - mean) * (a - mean);
  }
  var /= static_cast<double>(count);
  const double sd = std::sqrt(var);
  for (Episode& e : batch.episodes) {
    for (double& a : e.advantages) a = sd > 1e-12 ? (a - mean) / sd : 0.0;
  }
}

PpoLoss ppo_loss(const PolicyNet& policy, const RolloutBatch& batch, std::span<const std::size_t> episodes,
                 const PpoConfig& config, PolicyNet* grad) {
  PpoLoss out;
  std::vector<std::vector<int>> seqs;
  std::size_t steps = 0;
  std::size_t count = 0;
  for (std::size_t idx : episodes) {
    const Episode& e = batch.episodes.at(idx);
    std::vector<int> full = e.prefix;
    full.insert(full.end(), e.actions.begin(), e.actions.end());
    steps = std::max(steps, e.prefix.size() + e.length());
    count += e.length();
    seqs.push_back(std::move(full));
  }
  if (grad != nullptr) *grad = zeros_like(policy);
  if (count == 0) return out;

  const EncoderTrace<double> trace = encode(policy.encoder, teacher_inputs(seqs, policy.bos(), steps));
  const double inv_n = 1.0 / static_cast<double>(count);
  const double eps = config.clip_ratio;
  std::vector<Eigen::MatrixXd> dhidden;
  if (grad != nullptr) {
    dhidden.assign(steps, Eigen::MatrixXd::Zero(policy.encoder.hidden_size(), static_cast<Eigen::Index>(seqs.size())));
  }

  for (std::size_t t = 0; t < steps; ++t) {
    const Eigen::MatrixXd& h = trace.hidden[t];
    const Eigen::MatrixXd logp = log_softmax(linear(policy.action_head, h));
    const Eigen::MatrixXd value = linear(policy.value_head, h);
    Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(logp.rows(), logp.cols());
    Eigen::MatrixXd dvalue = Eigen::MatrixXd::Zero(1, logp.cols());
    bool any = false;

    for (std::size_t b = 0; b < seqs.size(); ++b) {
      const Episode& e = batch.episodes[episodes[b]];
      if (t < e.prefix.size()) continue;
      const std::size_t j = t - e.prefix.size();
      if (j >= e.length()) continue;
      any = true;
      const auto col = static_cast<Eigen::Index>(b);
      const int a = e.actions[j];
      const double adv = e.advantages[j];
      const double lp = logp(a, col);
      const double ratio = std::exp(lp - e.log_probs[j]);
      const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
      const double unclipped_term = ratio * adv;
      const double clipped_term = clipped * adv;
      out.policy -= std::min(unclipped_term, clipped_term) * inv_n;
      out.approx_kl += (e.log_probs[j] - lp) * inv_n;
      if (std::abs(ratio - 1.0) > eps) out.clip_fraction += inv_n;

      const double v = value(0, col);
      out.value += (v - e.returns[j]) * (v - e.returns[j]) * inv_n;

      const Eigen::ArrayXd p = logp.col(col).array().exp();
      const double entropy = -(p * logp.col(col).array()).sum();
      out.entropy += entropy * inv_n;

      if (grad == nullptr) continue;
      // d(loss)/d(logp[a]) from the surrogate; zero when the clipped branch
      // is the active minimum.
      const double g_lp = unclipped_term <= clipped_term ? -adv * ratio * inv_n : 0.0;
      Eigen::ArrayXd dl = -g_lp * p;
      dl[a] += g_lp;
      // -c_e * H: dH/dlogit_k = -p_k (log p_k + H).
      dl += config.entropy_coeff * inv_n * p * (logp.col(col).array() + entropy);
      dlogits.col(col) = dl.matrix();
      dvalue(0, col) = 2.0 * config.value_loss_coeff * (v - e.returns[j]) * inv_n;
    }
    if (grad == nullptr || !any) continue;
    Eigen::MatrixXd dh_a, dh_v;
    linear_backward(policy.action_head, h, dlogits, grad->action_head, &dh_a);
    linear_backward(policy.value_head, h, dvalue, grad->value_head, &dh_v);
    dhidden[t] = dh_a + dh_v;
  }

  out.total = out.policy + config.value_loss_coeff * out.value - config.entropy_coeff * out.entropy;
  if (grad != nullptr) encode_backward(policy.encoder, trace, dhidden, grad->encoder);
  return out;
}

PpoStats ppo_update(PolicyNet& policy, AdamState& adam, const RolloutBatch& batch, const PpoConfig& config,
                    std::mt19937_64& rng) {
  config.validate();
  PpoStats stats;
  const std::size_t n = batch.episodes.size();
  if (n == 0) return stats;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(config.minibatch_count), n);
  PolicyNet grad = zeros_like(policy);
  Eigen::VectorXd params = flatten(policy);

  for (int epoch = 0; epoch < config.epochs_per_batch; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    for (std::size_t part = 0; part < parts; ++part) {
      const std::size_t lo = part * n / parts;
      const std::size_t hi = (part + 1) * n / parts;
      const std::span<const std::size_t> mb(order.data() + lo, hi - lo);
      const PpoLoss loss = ppo_loss(policy, batch, mb, config, &grad);
      if (!std::isfinite(loss.total)) throw NumericalError("ppo_update: non-finite loss");
      adam_step(adam, params, flatten(grad));
      unflatten(policy, params);
      stats.policy_loss += loss.policy;
      stats.value_loss += loss.value;
      stats.entropy += loss.entropy;
      stats.approx_kl += loss.approx_kl;
      stats.clip_fraction += loss.clip_fraction;
      ++stats.updates;
    }
  }
  const double k = 1.0 / stats.updates;
  stats.policy_loss *= k;
  stats.value_loss *= k;
  stats.entropy *= k;
  stats.approx_kl *= k;
  stats.clip_fraction *= k;
  return stats;
}

Eigen::VectorXd action_probabilities(const PolicyNet& policy, const std::vector<int>& tokens) {
  const auto trace = encode(policy.encoder, teacher_inputs({tokens}, policy.bos(), tokens.size() + 1));
  return softmax_logits(linear(policy.action_head, trace.hidden.back())).col(0);
}

}  // namespace curiomol
