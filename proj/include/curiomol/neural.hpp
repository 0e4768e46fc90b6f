// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_NEURAL_HPP_
#define CURIOMOL_NEURAL_HPP_

// Small dense network core with hand-written gradients. Activations are
// Eigen column-major matrices with one column per batch element. Every
// parameter struct exposes visit(f), calling f on each of its tensors in a
// fixed order; flatten/unflatten/zeros_like and the optimizer work on that.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curiomol/errors.hpp"
#include "curiomol/random.hpp"

namespace curiomol {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

//! Entries drawn i.i.d. from U(-k, k).
template <typename Scalar>
MatrixX<Scalar> uniform_matrix(Eigen::Index rows, Eigen::Index cols, Scalar k, std::mt19937_64& rng) {
  MatrixX<Scalar> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = static_cast<Scalar>((2.0 * uniform01(rng) - 1.0) * k);
    }
  }
  return m;
}

template <typename Scalar>
void require_shape(const MatrixX<Scalar>& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ContractViolation(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

// ---------------------------------------------------------------------------
// Linear
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Linear {
  using scalar_type = Scalar;
  MatrixX<Scalar> w;  // out x in
  VectorX<Scalar> b;  // out

  static Linear init(Eigen::Index in, Eigen::Index out, std::mt19937_64& rng) {
    const Scalar k = Scalar(1) / std::sqrt(static_cast<Scalar>(in));
    Linear p;
    p.w = uniform_matrix<Scalar>(out, in, k, rng);
    p.b = uniform_matrix<Scalar>(out, 1, k, rng);
    return p;
  }

  template <typename F>
  void visit(F&& f) {
    f(w);
    f(b);
  }
  template <typename F>
  void visit(F&& f) const {
    f(w);
    f(b);
  }
};

//! y = W x + b, column-wise.
template <typename Scalar>
MatrixX<Scalar> linear(const Linear<Scalar>& p, const MatrixX<Scalar>& x) {
  if (x.rows() != p.w.cols()) throw ContractViolation("linear: input size mismatch");
  MatrixX<Scalar> y = p.w * x;
  y.colwise() += p.b;
  return y;
}

//! Accumulates dW, db into `grad`; writes dx when requested.
template <typename Scalar>
void linear_backward(const Linear<Scalar>& p, const MatrixX<Scalar>& x, const MatrixX<Scalar>& dy,
                     Linear<Scalar>& grad, MatrixX<Scalar>* dx) {
  grad.w.noalias() += dy * x.transpose();
  grad.b += dy.rowwise().sum();
  if (dx != nullptr) *dx = p.w.transpose() * dy;
}

// ---------------------------------------------------------------------------
// Embedding
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Embedding {
  using scalar_type = Scalar;
  MatrixX<Scalar> table;  // dim x vocab

  static Embedding init(Eigen::Index vocab, Eigen::Index dim, std::mt19937_64& rng) {
    Embedding e;
    e.table = uniform_matrix<Scalar>(dim, vocab, Scalar(1) / std::sqrt(static_cast<Scalar>(dim)), rng);
    return e;
  }

  template <typename F>
  void visit(F&& f) {
    f(table);
  }
  template <typename F>
  void visit(F&& f) const {
    f(table);
  }
};

//! One column per index; a negative index gives a zero column.
template <typename Scalar>
MatrixX<Scalar> embed(const Embedding<Scalar>& e, const std::vector<int>& indices) {
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(e.table.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 0) continue;
    if (indices[j] >= e.table.cols()) throw ContractViolation("embed: index out of range");
    out.col(static_cast<Eigen::Index>(j)) = e.table.col(indices[j]);
  }
  return out;
}

template <typename Scalar>
void embed_backward(const std::vector<int>& indices, const MatrixX<Scalar>& dx, Embedding<Scalar>& grad) {
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= 0) grad.table.col(indices[j]) += dx.col(static_cast<Eigen::Index>(j));
  }
}

// ---------------------------------------------------------------------------
// Softmax
// ---------------------------------------------------------------------------

//! Column-wise log-softmax with the column max subtracted first.
template <typename Scalar>
MatrixX<Scalar> log_softmax(const MatrixX<Scalar>& logits) {
  MatrixX<Scalar> out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const Scalar m = logits.col(j).maxCoeff();
    const Scalar lse = m + std::log((logits.col(j).array() - m).exp().sum());
    out.col(j) = logits.col(j).array() - lse;
  }
  return out;
}

template <typename Scalar>
MatrixX<Scalar> softmax_logits(const MatrixX<Scalar>& logits) {
  return log_softmax(logits).array().exp().matrix();
}

// ---------------------------------------------------------------------------
// LSTM
// ---------------------------------------------------------------------------

template <typename Scalar>
struct LstmParams {
  using scalar_type = Scalar;
  int input_size = 0;
  int hidden_size = 0;
  MatrixX<Scalar> w;  // 4H x (I + H); gate blocks i, f, g, o
  VectorX<Scalar> b;  // 4H

  static LstmParams init(int input, int hidden, std::mt19937_64& rng) {
    LstmParams p;
    p.input_size = input;
    p.hidden_size = hidden;
    const Scalar k = Scalar(1) / std::sqrt(static_cast<Scalar>(input + hidden));
    p.w = uniform_matrix<Scalar>(4 * hidden, input + hidden, k, rng);
    p.b = uniform_matrix<Scalar>(4 * hidden, 1, k, rng);
    p.b.segment(hidden, hidden).setConstant(Scalar(1));
    return p;
  }

  template <typename F>
  void visit(F&& f) {
    f(w);
    f(b);
  }
  template <typename F>
  void visit(F&& f) const {
    f(w);
    f(b);
  }
};

template <typename Scalar>
struct LstmCache {
  MatrixX<Scalar> z;  // [x; h_prev]
  MatrixX<Scalar> i, f, g, o;
  MatrixX<Scalar> c_prev;
  MatrixX<Scalar> tanh_c;
};

template <typename Scalar>
MatrixX<Scalar> sigmoid(const MatrixX<Scalar>& x) {
  return (Scalar(1) / (Scalar(1) + (-x.array()).exp())).matrix();
}

//! One cell step for a batch of columns. Fills `cache` when non-null.
template <typename Scalar>
void lstm_step(const LstmParams<Scalar>& p, const MatrixX<Scalar>& x, const MatrixX<Scalar>& h,
               const MatrixX<Scalar>& c, MatrixX<Scalar>& h_out, MatrixX<Scalar>& c_out,
               LstmCache<Scalar>* cache = nullptr) {
  const Eigen::Index batch = x.cols();
  const int H = p.hidden_size;
  require_shape(x, p.input_size, batch, "lstm_step x");
  require_shape(h, H, batch, "lstm_step h");
  require_shape(c, H, batch, "lstm_step c");

  MatrixX<Scalar> z(p.input_size + H, batch);
  z.topRows(p.input_size) = x;
  z.bottomRows(H) = h;
  MatrixX<Scalar> a = p.w * z;
  a.colwise() += p.b;

  MatrixX<Scalar> gi = sigmoid<Scalar>(a.middleRows(0, H));
  MatrixX<Scalar> gf = sigmoid<Scalar>(a.middleRows(H, H));
  MatrixX<Scalar> gg = a.middleRows(2 * H, H).array().tanh().matrix();
  MatrixX<Scalar> go = sigmoid<Scalar>(a.middleRows(3 * H, H));

  c_out = (gf.array() * c.array() + gi.array() * gg.array()).matrix();
  MatrixX<Scalar> tc = c_out.array().tanh().matrix();
  h_out = (go.array() * tc.array()).matrix();

  if (cache != nullptr) {
    cache->z = std::move(z);
    cache->i = std::move(gi);
    cache->f = std::move(gf);
    cache->g = std::move(gg);
    cache->o = std::move(go);
    cache->c_prev = c;
    cache->tanh_c = std::move(tc);
  }
}

//! Backward through one step. `dh`, `dc` are gradients w.r.t. the step's
//! outputs; parameter gradients accumulate into `grad`.
template <typename Scalar>
void lstm_step_backward(const LstmParams<Scalar>& p, const LstmCache<Scalar>& k,
                        const MatrixX<Scalar>& dh, const MatrixX<Scalar>& dc_in,
                        LstmParams<Scalar>& grad, MatrixX<Scalar>& dx, MatrixX<Scalar>& dh_prev,
                        MatrixX<Scalar>& dc_prev) {
  const int H = p.hidden_size;
  const auto one = Scalar(1);
  const auto dc = (dc_in.array() + dh.array() * k.o.array() * (one - k.tanh_c.array().square())).eval();

  MatrixX<Scalar> da(4 * H, dh.cols());
  da.middleRows(0, H) = (dc * k.g.array() * k.i.array() * (one - k.i.array())).matrix();
  da.middleRows(H, H) = (dc * k.c_prev.array() * k.f.array() * (one - k.f.array())).matrix();
  da.middleRows(2 * H, H) = (dc * k.i.array() * (one - k.g.array().square())).matrix();
  da.middleRows(3 * H, H) = (dh.array() * k.tanh_c.array() * k.o.array() * (one - k.o.array())).matrix();

  grad.w.noalias() += da * k.z.transpose();
  grad.b += da.rowwise().sum();
  const MatrixX<Scalar> dz = p.w.transpose() * da;
  dx = dz.topRows(p.input_size);
  dh_prev = dz.bottomRows(H);
  dc_prev = (dc * k.f.array()).matrix();
}

// ---------------------------------------------------------------------------
// Token encoder: embedding followed by an LSTM, shared by the policy and the
// property predictor (each with its own parameters).
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Encoder {
  using scalar_type = Scalar;
  Embedding<Scalar> embedding;
  LstmParams<Scalar> lstm;

  static Encoder init(int vocab, int embed_dim, int hidden, std::mt19937_64& rng) {
    Encoder e;
    e.embedding = Embedding<Scalar>::init(vocab, embed_dim, rng);
    e.lstm = LstmParams<Scalar>::init(embed_dim, hidden, rng);
    return e;
  }

  int hidden_size() const { return lstm.hidden_size; }

  template <typename F>
  void visit(F&& f) {
    embedding.visit(f);
    lstm.visit(f);
  }
  template <typename F>
  void visit(F&& f) const {
    embedding.visit(f);
    lstm.visit(f);
  }
};

template <typename Scalar>
struct EncoderTrace {
  std::vector<std::vector<int>> inputs;  // per step, one index per column
  std::vector<LstmCache<Scalar>> caches;
  std::vector<MatrixX<Scalar>> hidden;   // hidden state after each step
};

//! Runs the encoder over `inputs[t]` (t = 0..T-1) from a zero state.
template <typename Scalar>
EncoderTrace<Scalar> encode(const Encoder<Scalar>& enc, std::vector<std::vector<int>> inputs) {
  EncoderTrace<Scalar> tr;
  const Eigen::Index batch = inputs.empty() ? 0 : static_cast<Eigen::Index>(inputs[0].size());
  MatrixX<Scalar> h = MatrixX<Scalar>::Zero(enc.hidden_size(), batch);
  MatrixX<Scalar> c = h;
  tr.caches.resize(inputs.size());
  tr.hidden.reserve(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    MatrixX<Scalar> h2, c2;
    lstm_step(enc.lstm, embed(enc.embedding, inputs[t]), h, c, h2, c2, &tr.caches[t]);
    h = h2;
    c = std::move(c2);
    tr.hidden.push_back(std::move(h2));
  }
  tr.inputs = std::move(inputs);
  return tr;
}

//! Encoder inputs for column-batched sequences: step 0 reads `bos` and step
//! k reads seqs[b][k - 1], or -1 (a zero input) past the end of seqs[b].
inline std::vector<std::vector<int>> teacher_inputs(const std::vector<std::vector<int>>& seqs, int bos,
                                                   std::size_t steps) {
  std::vector<std::vector<int>> in(steps, std::vector<int>(seqs.size(), -1));
  for (std::size_t b = 0; b < seqs.size(); ++b) {
    if (steps > 0) in[0][b] = bos;
    for (std::size_t k = 1; k < steps && k - 1 < seqs[b].size(); ++k) in[k][b] = seqs[b][k - 1];
  }
  return in;
}

//! Backpropagation through time; dhidden[t] is the loss gradient w.r.t.
//! trace.hidden[t].
template <typename Scalar>
void encode_backward(const Encoder<Scalar>& enc, const EncoderTrace<Scalar>& tr,
                     const std::vector<MatrixX<Scalar>>& dhidden, Encoder<Scalar>& grad) {
  if (dhidden.size() != tr.hidden.size()) throw ContractViolation("encode_backward: step count mismatch");
  if (tr.hidden.empty()) return;
  const Eigen::Index batch = tr.hidden[0].cols();
  MatrixX<Scalar> dh_next = MatrixX<Scalar>::Zero(enc.hidden_size(), batch);
  MatrixX<Scalar> dc_next = dh_next;
  MatrixX<Scalar> dx, dh_prev, dc_prev;
  for (std::size_t t = tr.hidden.size(); t-- > 0;) {
    const MatrixX<Scalar> dh = dhidden[t] + dh_next;
    lstm_step_backward(enc.lstm, tr.caches[t], dh, dc_next, grad.lstm, dx, dh_prev, dc_prev);
    embed_backward(tr.inputs[t], dx, grad.embedding);
    dh_next = std::move(dh_prev);
    dc_next = std::move(dc_prev);
  }
}

// ---------------------------------------------------------------------------
// Flat parameter vectors
// ---------------------------------------------------------------------------

template <typename Net>
Eigen::Index parameter_count(const Net& net) {
  Eigen::Index n = 0;
  net.visit([&](const auto& t) { n += t.size(); });
  return n;
}

template <typename Net>
VectorX<typename Net::scalar_type> flatten(const Net& net) {
  VectorX<typename Net::scalar_type> v(parameter_count(net));
  Eigen::Index off = 0;
  net.visit([&](const auto& t) {
    v.segment(off, t.size()) = t.reshaped();
    off += t.size();
  });
  return v;
}

template <typename Net>
void unflatten(Net& net, const VectorX<typename Net::scalar_type>& v) {
  if (v.size() != parameter_count(net)) throw ContractViolation("unflatten: size mismatch");
  Eigen::Index off = 0;
  net.visit([&](auto& t) {
    t.reshaped() = v.segment(off, t.size());
    off += t.size();
  });
}

//! Same shapes as `net`, all zeros; used as a gradient accumulator.
template <typename Net>
Net zeros_like(const Net& net) {
  Net z = net;
  z.visit([](auto& t) { t.setZero(); });
  return z;
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

struct AdamState {
  std::int64_t step = 0;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState init(Eigen::Index size, double learning_rate) {
    AdamState s;
    s.m = Eigen::VectorXd::Zero(size);
    s.v = Eigen::VectorXd::Zero(size);
    s.learning_rate = learning_rate;
    return s;
  }
};

//! Bias-corrected Adam update in place. Throws NumericalError on a
//! non-finite gradient, leaving state and params untouched.
void adam_step(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grads);

// ---------------------------------------------------------------------------
// Finite-difference checking
// ---------------------------------------------------------------------------

struct GradCheckReport {
  double max_relative_error = 0.0;
  Eigen::Index worst_index = -1;
  bool passed = false;
};

//! `fn(x, grad)` returns the loss at x and, when grad is non-null, writes the
//! analytic gradient. Relative error per coordinate is
//! |a - n| / max(|a|, |n|, 1e-3) against central differences with step eps.
GradCheckReport grad_check(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& fn,
                           const Eigen::VectorXd& x, double tolerance, double eps = 1e-5);

// ---------------------------------------------------------------------------
// Binary checkpoint helpers (little-endian host order, length-prefixed)
// ---------------------------------------------------------------------------

void write_vector(std::ostream& out, const Eigen::VectorXd& v);
Eigen::VectorXd read_vector(std::istream& in);
void write_string(std::ostream& out, const std::string& s);
std::string read_string(std::istream& in);
void write_adam(std::ostream& out, const AdamState& s);
AdamState read_adam(std::istream& in);

}  // namespace curiomol

#endif  // CURIOMOL_NEURAL_HPP_
