// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_HARNESS_HPP_
#define CURIOMOL_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "curiomol/curiosity.hpp"
#include "curiomol/env.hpp"
#include "curiomol/ppo.hpp"

namespace curiomol {

enum class Task { QED, PlogP, Similarity };

//! Default similarity target, CC1=CC=C(C=C1)C(=O)NCC(F)(F)F: 15 heavy
//! atoms, one six-ring, an amide and a branched CF3 group.
inline constexpr const char* kDefaultSimilarityTarget =
    "[C][C][=C][C][=C][Branch1][Branch1][C][=C][Ring1][=Branch1][C][=Branch1][C][=O][N][C][C]"
    "[Branch1][C][F][Branch1][C][F][F]";

struct ExperimentConfig {
  Task task = Task::QED;
  std::string similarity_target = kDefaultSimilarityTarget;
  CuriosityConfig curiosity;
  PpoConfig ppo;
  //! Oracle and, unless initial_tokens is set, the start state are derived
  //! from the task by make_env(): [S] for PlogP, empty otherwise.
  EnvConfig env;
  std::optional<TokenSequence> initial_tokens;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::filesystem::path output_dir;
  bool write_checkpoints = true;
};

PropertyOracle make_oracle(Task task, const std::string& similarity_target);
EnvConfig make_env(const ExperimentConfig& config);

std::string to_string(Task t);
std::string to_string(CuriosityMode m);
std::string to_string(Distance d);
std::string to_string(RewardMode m);
Task parse_task(const std::string& s);
CuriosityMode parse_mode(const std::string& s);
Distance parse_distance(const std::string& s);
RewardMode parse_reward_mode(const std::string& s);

//! Reads an INI-style file (key = value, [section] headers) into `config`.
//! Top-level keys mirror the CLI flags (task, alpha, dist, greedy, buffer,
//! mode, reward, seed, episodes, out); [ppo], [curiosity], [env] and
//! [similarity] sections expose the remaining knobs. Throws
//! std::runtime_error on unknown keys or bad values.
void load_config(const std::filesystem::path& path, ExperimentConfig& config);

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double best_property = 0.0;
  std::string best_tokens;
  std::string best_formula;
  MolGraph best_molecule;  // written to run.json as an atom/bond list
  std::vector<double> best_curve;  // best so far after each batch
};

struct RunResult {
  std::vector<SeedResult> seeds;
  //! Mean of the per-seed bests over successful seeds.
  double mean_best = 0.0;
};

//! Everything needed to resume a seed bit-exactly.
struct TrainingState {
  PolicyNet policy;
  AdamState policy_adam;
  std::optional<PredictorState> predictor;
  std::mt19937_64 rollout_rng;
  std::mt19937_64 update_rng;
  std::int64_t episodes_done = 0;
};

void save_checkpoint(const std::filesystem::path& path, const TrainingState& state);
TrainingState load_checkpoint(const std::filesystem::path& path);

//! Trains one seed. When `dir` is non-empty writes run.jsonl,
//! best_molecule.txt, curve.csv and checkpoint.bin there. Module errors
//! propagate to the caller.
SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed, const std::filesystem::path& dir);

//! All seeds; a failing seed is recorded and the others proceed. Writes
//! run.json and a one-row results.csv when output_dir is set.
RunResult run_experiment(const ExperimentConfig& config);

struct GridRow {
  std::string label;
  double alpha = 0.0;
  CuriosityMode mode = CuriosityMode::Off;
  Distance dist = Distance::L2;
  bool greedy = false;
  bool buffer = false;
  double mean_best = 0.0;
  std::vector<double> seed_bests;
  bool failed = false;
};

struct GridSpec {
  std::vector<double> alphas{0.0, 0.01, 0.1, 1.0};
  std::vector<Distance> dists{Distance::L1, Distance::L2};
  std::vector<bool> greedy{false, true};
  std::vector<bool> buffer{false, true};
  std::vector<CuriosityMode> modes{CuriosityMode::PredictionError, CuriosityMode::TanimotoMemory};
};

//! The distinct configurations of the grid. alpha = 0 collapses to one
//! baseline (mode Off); memory-mode cells ignore dist and buffer and collapse
//! over them.
std::vector<ExperimentConfig> grid_cells(const ExperimentConfig& base, const GridSpec& spec = {});
std::string cell_label(const ExperimentConfig& config);
GridRow row_for(const ExperimentConfig& config, const RunResult& result);

//! Runs every cell into output_dir/<label>/, then writes the ranked table
//! to output_dir/results.csv.
std::vector<GridRow> run_grid(const ExperimentConfig& base, const GridSpec& spec = {});

//! Sorted descending by mean_best (failed cells last), label as tie-break.
void rank_rows(std::vector<GridRow>& rows);
void write_results_csv(const std::filesystem::path& path, const std::vector<GridRow>& rows);
void print_table(std::ostream& out, const std::vector<GridRow>& rows);

//! Re-aggregates run.json files found in `dir` and its direct
//! subdirectories; rewrites dir/results.csv.
std::vector<GridRow> report(const std::filesystem::path& dir);

}  // namespace curiomol

#endif  // CURIOMOL_HARNESS_HPP_
