// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include "curiomol/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "curiomol/errors.hpp"
#include "curiomol/random.hpp"

namespace curiomol {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

std::string to_string(Task t) {
  switch (t) {
    case Task::QED: return "qed";
    case Task::PlogP: return "plogp";
    case Task::Similarity: return "sim";
  }
  return "?";
}

std::string to_string(CuriosityMode m) {
  switch (m) {
    case CuriosityMode::PredictionError: return "pred";
    case CuriosityMode::TanimotoMemory: return "memory";
    case CuriosityMode::Off: return "off";
  }
  return "?";
}

std::string to_string(Distance d) { return d == Distance::L1 ? "l1" : "l2"; }

std::string to_string(RewardMode m) { return m == RewardMode::Dense ? "dense" : "terminal"; }

Task parse_task(const std::string& s) {
  if (s == "qed") return Task::QED;
  if (s == "plogp") return Task::PlogP;
  if (s == "sim" || s == "similarity") return Task::Similarity;
  throw std::runtime_error("unknown task '" + s + "' (expected qed, plogp or sim)");
}

CuriosityMode parse_mode(const std::string& s) {
  if (s == "pred") return CuriosityMode::PredictionError;
  if (s == "memory") return CuriosityMode::TanimotoMemory;
  if (s == "off") return CuriosityMode::Off;
  throw std::runtime_error("unknown curiosity mode '" + s + "' (expected pred, memory or off)");
}

Distance parse_distance(const std::string& s) {
  if (s == "l1" || s == "L1") return Distance::L1;
  if (s == "l2" || s == "L2") return Distance::L2;
  throw std::runtime_error("unknown distance '" + s + "' (expected l1 or l2)");
}

RewardMode parse_reward_mode(const std::string& s) {
  if (s == "terminal") return RewardMode::TerminalOnly;
  if (s == "dense") return RewardMode::Dense;
  throw std::runtime_error("unknown reward mode '" + s + "' (expected terminal or dense)");
}

PropertyOracle make_oracle(Task task, const std::string& similarity_target) {
  switch (task) {
    case Task::QED:
      return PropertyOracle::qed_oracle();
    case Task::PlogP:
      return PropertyOracle::penalized_logp_oracle();
    case Task::Similarity:
      return PropertyOracle::similarity_oracle(morgan_fingerprint(decode(parse_tokens(similarity_target))));
  }
  throw ContractViolation("make_oracle: unknown task");
}

EnvConfig make_env(const ExperimentConfig& config) {
  EnvConfig env = config.env;
  env.oracle = make_oracle(config.task, config.similarity_target);
  if (config.initial_tokens) {
    env.initial_tokens = *config.initial_tokens;
  } else {
    env.initial_tokens = TokenSequence{};
    if (config.task == Task::PlogP) env.initial_tokens.push_back(Token::atom(Element::S));
  }
  env.discount = config.ppo.discount;
  env.validate();
  return env;
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

namespace {

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::runtime_error("bad boolean '" + s + "'");
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::runtime_error("bad integer '" + s + "'");
  return v;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& s, F&& parse_one) {
  std::vector<T> out;
  std::istringstream in(s);
  std::string item;
  while (in >> item) {
    if (!item.empty() && item.back() == ',') item.pop_back();
    if (!item.empty()) out.push_back(parse_one(item));
  }
  return out;
}

void apply_top(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "task") c.task = parse_task(v);
  else if (key == "alpha") c.curiosity.alpha = parse_double(v);
  else if (key == "dist") c.curiosity.dist = parse_distance(v);
  else if (key == "greedy") c.curiosity.greedy = parse_bool(v);
  else if (key == "buffer") c.curiosity.train_mode = parse_bool(v) ? TrainMode::Buffer : TrainMode::PerEpisode;
  else if (key == "mode") c.curiosity.mode = parse_mode(v);
  else if (key == "reward") c.env.reward_mode = parse_reward_mode(v);
  else if (key == "seed" || key == "seeds") {
    c.seeds = parse_list<std::uint64_t>(v, [](const std::string& s) { return std::stoull(s); });
  } else if (key == "episodes") c.ppo.total_episodes = parse_int(v);
  else if (key == "out") c.output_dir = v;
  else throw std::runtime_error("unknown config key '" + key + "'");
}

void apply_ppo(PpoConfig& p, const std::string& key, const std::string& v) {
  if (key == "clip_ratio") p.clip_ratio = parse_double(v);
  else if (key == "epochs") p.epochs_per_batch = parse_int(v);
  else if (key == "minibatches") p.minibatch_count = parse_int(v);
  else if (key == "value_coeff") p.value_loss_coeff = parse_double(v);
  else if (key == "entropy_coeff") p.entropy_coeff = parse_double(v);
  else if (key == "gae_lambda") p.gae_lambda = parse_double(v);
  else if (key == "discount") p.discount = parse_double(v);
  else if (key == "learning_rate") p.learning_rate = parse_double(v);
  else if (key == "episodes_per_batch") p.episodes_per_batch = parse_int(v);
  else if (key == "total_episodes") p.total_episodes = parse_int(v);
  else if (key == "embed_dim") p.embed_dim = parse_int(v);
  else if (key == "hidden_size") p.hidden_size = parse_int(v);
  else throw std::runtime_error("unknown [ppo] key '" + key + "'");
}

void apply_curiosity(CuriosityConfig& c, const std::string& key, const std::string& v) {
  if (key == "alpha") c.alpha = parse_double(v);
  else if (key == "dist") c.dist = parse_distance(v);
  else if (key == "greedy") c.greedy = parse_bool(v);
  else if (key == "buffer") c.train_mode = parse_bool(v) ? TrainMode::Buffer : TrainMode::PerEpisode;
  else if (key == "mode") c.mode = parse_mode(v);
  else if (key == "batches_kept") c.batches_kept = parse_int(v);
  else if (key == "reinit_at") c.reinit_at_episodes = parse_list<int>(v, parse_int);
  else if (key == "predictor_learning_rate") c.predictor_learning_rate = parse_double(v);
  else if (key == "passes_per_batch") c.passes_per_batch = parse_int(v);
  else if (key == "buffer_passes") c.buffer_passes = parse_int(v);
  else if (key == "minibatch_size") c.minibatch_size = parse_int(v);
  else if (key == "embed_dim") c.embed_dim = parse_int(v);
  else if (key == "hidden_size") c.hidden_size = parse_int(v);
  else if (key == "normalizer") {
    if (v == "mean_abs") c.normalizer = NormalizerKind::MeanAbsolute;
    else if (v == "rms") c.normalizer = NormalizerKind::RootMeanSquare;
    else throw std::runtime_error("unknown normalizer '" + v + "' (expected mean_abs or rms)");
  } else if (key == "normalizer_decay") c.normalizer_decay = parse_double(v);
  else if (key == "normalize_after_mask") c.normalize_after_mask = parse_bool(v);
  else throw std::runtime_error("unknown [curiosity] key '" + key + "'");
}

void apply_env(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "horizon") c.env.horizon = parse_int(v);
  else if (key == "reward") c.env.reward_mode = parse_reward_mode(v);
  else if (key == "initial_tokens") c.initial_tokens = parse_tokens(v);
  else throw std::runtime_error("unknown [env] key '" + key + "'");
}

}  // namespace

void load_config(const fs::path& path, ExperimentConfig& config) {
  boost::property_tree::ptree tree;
  boost::property_tree::ini_parser::read_ini(path.string(), tree);
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      apply_top(config, key, node.data());
      continue;
    }
    for (const auto& [k, leaf] : node) {
      const std::string v = leaf.data();
      if (key == "ppo") apply_ppo(config.ppo, k, v);
      else if (key == "curiosity") apply_curiosity(config.curiosity, k, v);
      else if (key == "env") apply_env(config, k, v);
      else if (key == "similarity" && k == "target") config.similarity_target = v;
      else throw std::runtime_error("unknown config section [" + key + "] key '" + k + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'C', 'M', 'O', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

std::string rng_text(const std::mt19937_64& rng) {
  std::ostringstream s;
  s << rng;
  return s.str();
}

std::mt19937_64 rng_from_text(const std::string& text) {
  std::mt19937_64 rng;
  std::istringstream s(text);
  s >> rng;
  if (!s) throw std::runtime_error("checkpoint: bad rng state");
  return rng;
}

}  // namespace

void save_checkpoint(const fs::path& path, const TrainingState& st) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof kMagic);
  put(out, kVersion);
  put<std::int32_t>(out, st.policy.alphabet_size());
  put<std::int32_t>(out, static_cast<std::int32_t>(st.policy.encoder.embedding.table.rows()));
  put<std::int32_t>(out, st.policy.encoder.hidden_size());
  write_vector(out, flatten(st.policy));
  write_adam(out, st.policy_adam);
  put<std::uint8_t>(out, st.predictor ? 1 : 0);
  if (st.predictor) {
    const PredictorState& p = *st.predictor;
    put<std::int32_t>(out, p.net.bos());
    put<std::int32_t>(out, static_cast<std::int32_t>(p.net.encoder.embedding.table.rows()));
    put<std::int32_t>(out, p.net.encoder.hidden_size());
    write_vector(out, flatten(p.net));
    write_adam(out, p.adam);
    put<std::int64_t>(out, p.episode_counter);
    write_string(out, rng_text(p.rng));
    put<std::uint64_t>(out, p.buffer.size());
    for (const PredictorSample& s : p.buffer) {
      put<std::uint64_t>(out, s.tokens.size());
      for (int t : s.tokens) put<std::int32_t>(out, t);
      put<std::uint64_t>(out, s.targets.size());
      for (const auto& [k, v] : s.targets) {
        put<std::uint64_t>(out, k);
        put<double>(out, v);
      }
    }
  }
  write_string(out, rng_text(st.rollout_rng));
  write_string(out, rng_text(st.update_rng));
  put<std::int64_t>(out, st.episodes_done);
  if (!out) throw std::runtime_error("error writing checkpoint " + path.string());
}

TrainingState load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + sizeof magic, kMagic)) throw std::runtime_error("not a checkpoint file");
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("unsupported checkpoint version");

  TrainingState st;
  std::mt19937_64 scratch;
  {
    const int a = get<std::int32_t>(in);
    const int e = get<std::int32_t>(in);
    const int h = get<std::int32_t>(in);
    st.policy = PolicyNet::init(a, e, h, scratch);
    unflatten(st.policy, read_vector(in));
    st.policy_adam = read_adam(in);
  }
  if (get<std::uint8_t>(in) != 0) {
    PredictorState p;
    const int a = get<std::int32_t>(in);
    const int e = get<std::int32_t>(in);
    const int h = get<std::int32_t>(in);
    p.net = PredictorNet::init(a, e, h, scratch);
    unflatten(p.net, read_vector(in));
    p.adam = read_adam(in);
    p.episode_counter = get<std::int64_t>(in);
    p.rng = rng_from_text(read_string(in));
    const auto n = get<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < n; ++i) {
      PredictorSample s;
      const auto nt = get<std::uint64_t>(in);
      for (std::uint64_t j = 0; j < nt; ++j) s.tokens.push_back(get<std::int32_t>(in));
      const auto ng = get<std::uint64_t>(in);
      for (std::uint64_t j = 0; j < ng; ++j) {
        const auto k = get<std::uint64_t>(in);
        s.targets.emplace_back(k, get<double>(in));
      }
      p.buffer.push_back(std::move(s));
    }
    st.predictor = std::move(p);
  }
  st.rollout_rng = rng_from_text(read_string(in));
  st.update_rng = rng_from_text(read_string(in));
  st.episodes_done = get<std::int64_t>(in);
  return st;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

//! {"atoms": [{"element", "hydrogens"}...], "bonds": [[a, b, order]...]}
json graph_json(const MolGraph& mol) {
  json atoms = json::array();
  for (const Atom& a : mol.atoms) atoms.push_back({{"element", symbol(a.element)}, {"hydrogens", a.implicit_hydrogens}});
  json bonds = json::array();
  for (const Bond& b : mol.bonds) bonds.push_back({b.a, b.b, b.order});
  return {{"atoms", atoms}, {"bonds", bonds}};
}

std::string prefix_string(const TokenSequence& seq, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n && i < seq.size(); ++i) out += to_string(seq.tokens[i]);
  return out;
}

}  // namespace

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed, const fs::path& dir) {
  config.ppo.validate();
  config.curiosity.validate();
  const EnvConfig env = make_env(config);
  const Alphabet& alphabet = default_alphabet();
  const int A = static_cast<int>(alphabet.size());
  const CuriosityConfig& cur = config.curiosity;
  const RewardMode reward_mode = env.reward_mode;

  TrainingState st;
  {
    std::mt19937_64 init_rng(derive_seed(seed, 1));
    st.policy = PolicyNet::init(A, config.ppo.embed_dim, config.ppo.hidden_size, init_rng);
  }
  st.policy_adam = AdamState::init(parameter_count(st.policy), config.ppo.learning_rate);
  if (cur.active() && cur.mode == CuriosityMode::PredictionError) {
    st.predictor = PredictorState::init(A, cur, derive_seed(seed, 2));
  }
  st.rollout_rng.seed(derive_seed(seed, 3));
  st.update_rng.seed(derive_seed(seed, 4));
  TanimotoMemory memory(cur.batches_kept);
  RewardNormalizers norm{RunningNormalizer(cur.normalizer_decay, cur.normalizer),
                         RunningNormalizer(cur.normalizer_decay, cur.normalizer)};

  std::ofstream log;
  if (!dir.empty()) {
    fs::create_directories(dir);
    log.open(dir / "run.jsonl");
  }

  SeedResult result;
  result.seed = seed;
  double best = -std::numeric_limits<double>::infinity();
  int batch_index = 0;
  while (st.episodes_done < config.ppo.total_episodes) {
    const int n = static_cast<int>(std::min<std::int64_t>(config.ppo.episodes_per_batch,
                                                          config.ppo.total_episodes - st.episodes_done));
    RolloutBatch batch = collect_rollouts(st.policy, env, alphabet, n, st.rollout_rng);

    double mean_ext = 0.0;
    double mean_final = 0.0;
    for (const Episode& e : batch.episodes) {
      for (double r : e.extrinsic) mean_ext += r;
      mean_final += e.final_property;
      if (reward_mode == RewardMode::Dense) {
        for (std::size_t j = 0; j < e.length(); ++j) {
          if (e.properties[j] > best) {
            best = e.properties[j];
            result.best_tokens = prefix_string(e.final_state, e.prefix.size() + j + 1);
            result.best_molecule = decode(parse_tokens(result.best_tokens));
            result.best_formula = molecular_formula(result.best_molecule);
          }
        }
      } else if (e.length() > 0 && e.final_property > best) {
        best = e.final_property;
        result.best_tokens = to_string(e.final_state);
        result.best_molecule = e.final_molecule;
        result.best_formula = molecular_formula(e.final_molecule);
      }
    }
    mean_ext /= n;
    mean_final /= n;

    const IntrinsicStats istats = assign_intrinsic(batch, st.predictor ? &*st.predictor : nullptr, &memory, cur,
                                                   reward_mode, &norm);
    assign_total_rewards(batch, norm, cur, reward_mode);
    compute_gae(batch, config.ppo.discount, config.ppo.gae_lambda);
    const PpoStats pstats = ppo_update(st.policy, st.policy_adam, batch, config.ppo, st.update_rng);

    PredictorTrainStats tstats;
    if (st.predictor) tstats = train_predictor(*st.predictor, batch, cur, reward_mode);
    if (cur.active() && cur.mode == CuriosityMode::TanimotoMemory) {
      std::vector<Fingerprint> fps;
      for (const Episode& e : batch.episodes) fps.push_back(morgan_fingerprint(e.final_molecule));
      memory.push_batch(std::move(fps));
    }
    st.episodes_done += n;
    result.best_curve.push_back(best);

    if (log.is_open()) {
      json rec = {
          {"batch", batch_index},
          {"episodes", st.episodes_done},
          {"mean_extrinsic", mean_ext},
          {"mean_final_property", mean_final},
          {"mean_intrinsic", istats.mean},
          {"max_intrinsic", istats.max},
          {"mask_pass_rate", istats.mask_pass_rate},
          {"best_so_far", best},
          {"policy_loss", pstats.policy_loss},
          {"value_loss", pstats.value_loss},
          {"entropy", pstats.entropy},
          {"approx_kl", pstats.approx_kl},
          {"clip_fraction", pstats.clip_fraction},
          {"predictor_loss", tstats.loss},
          {"predictor_reinitialized", tstats.reinitialized},
          {"buffer_size", st.predictor ? st.predictor->buffer.size() : 0},
          {"memory_size", memory.size()},
      };
      log << rec.dump() << '\n';
    }
    ++batch_index;
  }

  result.best_property = best;
  result.ok = true;
  if (!dir.empty()) {
    std::ofstream(dir / "best_molecule.txt") << result.best_tokens << '\n';
    std::ofstream curve(dir / "curve.csv");
    curve << "batch,best_so_far\n";
    for (std::size_t i = 0; i < result.best_curve.size(); ++i) {
      curve << i << ',' << format_double(result.best_curve[i]) << '\n';
    }
    if (config.write_checkpoints) save_checkpoint(dir / "checkpoint.bin", st);
  }
  return result;
}

std::string cell_label(const ExperimentConfig& c) {
  const CuriosityConfig& q = c.curiosity;
  if (!q.active()) return "a0_off";
  std::ostringstream s;
  s << "a" << q.alpha << "_" << to_string(q.mode);
  if (q.mode == CuriosityMode::PredictionError) s << "_" << to_string(q.dist);
  s << "_g" << (q.greedy ? 1 : 0);
  if (q.mode == CuriosityMode::PredictionError) s << "_b" << (q.train_mode == TrainMode::Buffer ? 1 : 0);
  return s.str();
}

GridRow row_for(const ExperimentConfig& c, const RunResult& r) {
  GridRow row;
  row.label = cell_label(c);
  const CuriosityConfig& q = c.curiosity;
  row.alpha = q.active() ? q.alpha : 0.0;
  row.mode = q.active() ? q.mode : CuriosityMode::Off;
  row.dist = q.dist;
  row.greedy = q.active() && q.greedy;
  row.buffer = q.active() && q.mode == CuriosityMode::PredictionError && q.train_mode == TrainMode::Buffer;
  row.mean_best = r.mean_best;
  row.failed = true;
  for (const SeedResult& s : r.seeds) {
    if (s.ok) {
      row.seed_bests.push_back(s.best_property);
      row.failed = false;
    }
  }
  return row;
}

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult result;
  for (std::uint64_t seed : config.seeds) {
    const fs::path dir = config.output_dir.empty() ? fs::path{} : config.output_dir / ("seed_" + std::to_string(seed));
    SeedResult sr;
    try {
      sr = run_seed(config, seed, dir);
    } catch (const std::exception& e) {
      sr = SeedResult{};
      sr.seed = seed;
      sr.ok = false;
      sr.error = e.what();
    }
    result.seeds.push_back(std::move(sr));
  }
  double sum = 0.0;
  int ok = 0;
  for (const SeedResult& s : result.seeds) {
    if (!s.ok) continue;
    sum += s.best_property;
    ++ok;
  }
  result.mean_best = ok > 0 ? sum / ok : std::numeric_limits<double>::quiet_NaN();

  if (!config.output_dir.empty()) {
    fs::create_directories(config.output_dir);
    const GridRow row = row_for(config, result);
    json seeds = json::array();
    for (const SeedResult& s : result.seeds) {
      seeds.push_back({{"seed", s.seed},
                       {"ok", s.ok},
                       {"error", s.error},
                       {"best_property", s.best_property},
                       {"best_tokens", s.best_tokens},
                       {"best_formula", s.best_formula},
                       {"best_graph", graph_json(s.best_molecule)}});
    }
    const json run = {
        {"label", row.label},
        {"task", to_string(config.task)},
        {"alpha", row.alpha},
        {"mode", to_string(row.mode)},
        {"dist", to_string(row.dist)},
        {"greedy", row.greedy},
        {"buffer", row.buffer},
        {"reward", to_string(config.env.reward_mode)},
        {"total_episodes", config.ppo.total_episodes},
        {"episodes_per_batch", config.ppo.episodes_per_batch},
        {"seeds", seeds},
        {"mean_best", result.mean_best},
    };
    std::ofstream(config.output_dir / "run.json") << run.dump(2) << '\n';
    write_results_csv(config.output_dir / "results.csv", {row});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Grid and reporting
// ---------------------------------------------------------------------------

std::vector<ExperimentConfig> grid_cells(const ExperimentConfig& base, const GridSpec& spec) {
  std::vector<ExperimentConfig> cells;
  std::vector<std::string> seen;
  auto add = [&](ExperimentConfig c) {
    const std::string label = cell_label(c);
    if (std::find(seen.begin(), seen.end(), label) != seen.end()) return;
    seen.push_back(label);
    cells.push_back(std::move(c));
  };
  for (double alpha : spec.alphas) {
    for (CuriosityMode mode : spec.modes) {
      for (Distance dist : spec.dists) {
        for (bool greedy : spec.greedy) {
          for (bool buffer : spec.buffer) {
            ExperimentConfig c = base;
            CuriosityConfig& q = c.curiosity;
            q.alpha = alpha;
            q.mode = alpha == 0.0 ? CuriosityMode::Off : mode;
            q.dist = dist;
            q.greedy = greedy;
            q.train_mode = buffer ? TrainMode::Buffer : TrainMode::PerEpisode;
            if (!q.active()) {
              q.greedy = false;
              q.train_mode = TrainMode::PerEpisode;
            } else if (q.mode == CuriosityMode::TanimotoMemory) {
              q.dist = Distance::L2;
              q.train_mode = TrainMode::PerEpisode;
            }
            add(std::move(c));
          }
        }
      }
    }
  }
  return cells;
}

void rank_rows(std::vector<GridRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& a, const GridRow& b) {
    if (a.failed != b.failed) return !a.failed;
    if (a.mean_best != b.mean_best) return a.mean_best > b.mean_best;
    return a.label < b.label;
  });
}

std::vector<GridRow> run_grid(const ExperimentConfig& base, const GridSpec& spec) {
  std::vector<GridRow> rows;
  for (ExperimentConfig cell : grid_cells(base, spec)) {
    if (!base.output_dir.empty()) cell.output_dir = base.output_dir / cell_label(cell);
    rows.push_back(row_for(cell, run_experiment(cell)));
  }
  rank_rows(rows);
  if (!base.output_dir.empty()) {
    fs::create_directories(base.output_dir);
    write_results_csv(base.output_dir / "results.csv", rows);
  }
  return rows;
}

void write_results_csv(const fs::path& path, const std::vector<GridRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "label,alpha,mode,dist,greedy,buffer,mean_best,seed_bests,failed\n";
  for (const GridRow& r : rows) {
    std::string bests;
    for (std::size_t i = 0; i < r.seed_bests.size(); ++i) bests += (i ? ";" : "") + format_double(r.seed_bests[i]);
    out << r.label << ',' << format_double(r.alpha) << ',' << to_string(r.mode) << ','
        << (r.mode == CuriosityMode::PredictionError ? to_string(r.dist) : "-") << ',' << (r.greedy ? 1 : 0) << ','
        << (r.buffer ? 1 : 0) << ',' << format_double(r.mean_best) << ',' << bests << ',' << (r.failed ? 1 : 0)
        << '\n';
  }
}

void print_table(std::ostream& out, const std::vector<GridRow>& rows) {
  out << std::left << std::setw(34) << "configuration" << std::setw(7) << "alpha" << std::setw(8) << "mode"
      << std::setw(6) << "dist" << std::setw(8) << "greedy" << std::setw(8) << "buffer"
      << "mean best\n";
  for (const GridRow& r : rows) {
    out << std::left << std::setw(34) << r.label << std::setw(7) << r.alpha << std::setw(8) << to_string(r.mode)
        << std::setw(6) << (r.mode == CuriosityMode::PredictionError ? to_string(r.dist) : "-") << std::setw(8)
        << (r.greedy ? "yes" : "no") << std::setw(8) << (r.buffer ? "yes" : "no");
    if (r.failed) {
      out << "failed\n";
    } else {
      out << std::fixed << std::setprecision(4) << r.mean_best << std::defaultfloat << '\n';
    }
  }
}

std::vector<GridRow> report(const fs::path& dir) {
  std::vector<fs::path> candidates{dir};
  if (fs::is_directory(dir)) {
    std::vector<fs::path> subs;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory()) subs.push_back(entry.path());
    }
    std::sort(subs.begin(), subs.end());
    candidates.insert(candidates.end(), subs.begin(), subs.end());
  }
  std::vector<GridRow> rows;
  for (const fs::path& p : candidates) {
    const fs::path file = p / "run.json";
    if (!fs::exists(file)) continue;
    std::ifstream in(file);
    const json run = json::parse(in);
    GridRow row;
    row.label = run.at("label").get<std::string>();
    row.alpha = run.at("alpha").get<double>();
    row.mode = parse_mode(run.at("mode").get<std::string>());
    row.dist = parse_distance(run.at("dist").get<std::string>());
    row.greedy = run.at("greedy").get<bool>();
    row.buffer = run.at("buffer").get<bool>();
    row.failed = true;
    double sum = 0.0;
    for (const json& s : run.at("seeds")) {
      if (!s.at("ok").get<bool>()) continue;
      row.seed_bests.push_back(s.at("best_property").get<double>());
      sum += row.seed_bests.back();
      row.failed = false;
    }
    row.mean_best = row.failed ? std::numeric_limits<double>::quiet_NaN()
                               : sum / static_cast<double>(row.seed_bests.size());
    rows.push_back(std::move(row));
  }
  rank_rows(rows);
  if (!rows.empty()) write_results_csv(dir / "results.csv", rows);
  return rows;
}

}  // namespace curiomol
