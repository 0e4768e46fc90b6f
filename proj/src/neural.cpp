// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include "curiomol/neural.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace curiomol {

void adam_step(AdamState& s, Eigen::VectorXd& params, const Eigen::VectorXd& grads) {
  if (params.size() != grads.size() || s.m.size() != params.size()) {
    throw ContractViolation("adam_step: size mismatch");
  }
  if (!grads.allFinite()) throw NumericalError("adam_step: non-finite gradient");
  ++s.step;
  s.m = s.beta1 * s.m + (1.0 - s.beta1) * grads;
  s.v = s.beta2 * s.v + (1.0 - s.beta2) * grads.cwiseAbs2();
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  params.array() -= s.learning_rate * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.epsilon);
}

GradCheckReport grad_check(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& fn,
                           const Eigen::VectorXd& x, double tolerance, double eps) {
  Eigen::VectorXd analytic(x.size());
  fn(x, &analytic);
  GradCheckReport r;
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + eps;
    const double up = fn(probe, nullptr);
    probe[i] = x[i] - eps;
    const double down = fn(probe, nullptr);
    probe[i] = x[i];
    const double numeric = (up - down) / (2.0 * eps);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-3});
    const double rel = std::abs(analytic[i] - numeric) / denom;
    if (rel > r.max_relative_error || r.worst_index < 0) {
      r.max_relative_error = rel;
      r.worst_index = i;
    }
  }
  r.passed = r.max_relative_error <= tolerance;
  return r;
}

namespace {

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated stream");
  return v;
}

}  // namespace

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Eigen::VectorXd read_vector(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (std::uint64_t{1} << 32)) throw std::runtime_error("checkpoint: implausible vector length");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint: truncated stream");
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  put<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (std::uint64_t{1} << 32)) throw std::runtime_error("checkpoint: implausible string length");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("checkpoint: truncated stream");
  return s;
}

void write_adam(std::ostream& out, const AdamState& s) {
  put(out, s.step);
  put(out, s.learning_rate);
  put(out, s.beta1);
  put(out, s.beta2);
  put(out, s.epsilon);
  write_vector(out, s.m);
  write_vector(out, s.v);
}

AdamState read_adam(std::istream& in) {
  AdamState s;
  s.step = get<std::int64_t>(in);
  s.learning_rate = get<double>(in);
  s.beta1 = get<double>(in);
  s.beta2 = get<double>(in);
  s.epsilon = get<double>(in);
  s.m = read_vector(in);
  s.v = read_vector(in);
  return s;
}

}  // namespace curiomol
