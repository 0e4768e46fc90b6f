// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>

#include <gtest/gtest.h>

#include "curiomol/harness.hpp"
#include "harness_fixtures.hpp"

namespace curiomol {
namespace {

namespace fs = std::filesystem;

TEST(Harness, ParseRoundTrip) {
  for (Task t : {Task::QED, Task::PlogP, Task::Similarity}) EXPECT_EQ(parse_task(to_string(t)), t);
  for (CuriosityMode m : {CuriosityMode::PredictionError, CuriosityMode::TanimotoMemory, CuriosityMode::Off}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  for (Distance d : {Distance::L1, Distance::L2}) EXPECT_EQ(parse_distance(to_string(d)), d);
  for (RewardMode m : {RewardMode::TerminalOnly, RewardMode::Dense}) EXPECT_EQ(parse_reward_mode(to_string(m)), m);
  EXPECT_ANY_THROW(parse_task("logp"));
}

TEST(Harness, MakeEnvFollowsTask) {
  ExperimentConfig cfg;
  cfg.task = Task::PlogP;
  cfg.ppo.discount = 0.9;
  const EnvConfig env = make_env(cfg);
  EXPECT_EQ(env.discount, 0.9);
  ASSERT_EQ(env.initial_tokens.tokens.size(), 1u);
  EXPECT_EQ(to_string(env.initial_tokens), "[S]");
  cfg.task = Task::QED;
  EXPECT_TRUE(make_env(cfg).initial_tokens.tokens.empty());
}

TEST(Harness, LoadConfig) {
  const fs::path dir = scratch_dir("load_config");
  const fs::path ini = dir / "run.ini";
  std::ofstream(ini) << "task = plogp\nalpha = 0.1\ndist = l1\ngreedy = true\nbuffer = true\nseeds = 4, 5\n"
                        "episodes = 128\n[ppo]\nclip_ratio = 0.2\nepisodes_per_batch = 32\n"
                        "[curiosity]\nreinit_at = 100 300\n[env]\nhorizon = 20\nreward = dense\n";
  ExperimentConfig cfg;
  load_config(ini, cfg);
  EXPECT_EQ(cfg.task, Task::PlogP);
  EXPECT_EQ(cfg.curiosity.alpha, 0.1);
  EXPECT_EQ(cfg.curiosity.dist, Distance::L1);
  EXPECT_TRUE(cfg.curiosity.greedy);
  EXPECT_EQ(cfg.curiosity.train_mode, TrainMode::Buffer);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{4, 5}));
  EXPECT_EQ(cfg.ppo.total_episodes, 128);
  EXPECT_EQ(cfg.ppo.clip_ratio, 0.2);
  EXPECT_EQ(cfg.ppo.episodes_per_batch, 32);
  EXPECT_EQ(cfg.curiosity.reinit_at_episodes, (std::vector<int>{100, 300}));
  EXPECT_EQ(cfg.env.horizon, 20);
  EXPECT_EQ(cfg.env.reward_mode, RewardMode::Dense);

  std::ofstream(ini) << "[ppo]\nclip = 0.2\n";
  EXPECT_THROW(load_config(ini, cfg), std::runtime_error);
}

TEST(Harness, GridCells) {
  const std::vector<ExperimentConfig> cells = grid_cells(ExperimentConfig{});
  EXPECT_EQ(cells.size(), 31u);
  std::set<std::string> labels;
  int baselines = 0;
  for (const ExperimentConfig& c : cells) {
    labels.insert(cell_label(c));
    if (c.curiosity.alpha == 0.0) {
      ++baselines;
      EXPECT_EQ(c.curiosity.mode, CuriosityMode::Off);
    }
  }
  EXPECT_EQ(labels.size(), cells.size());
  EXPECT_EQ(baselines, 1);
  EXPECT_TRUE(labels.contains("a0_off"));
  EXPECT_TRUE(labels.contains("a1_pred_l2_g0_b0"));
  EXPECT_TRUE(labels.contains("a0.01_memory_g1"));
}

TEST(Harness, RankRows) {
  auto row = [](std::string label, double mean, bool failed = false) {
    GridRow r;
    r.label = std::move(label);
    r.mean_best = mean;
    r.failed = failed;
    return r;
  };
  std::vector<GridRow> rows{row("b", 0.5), row("a", 0.5), row("c", 0.9, true), row("d", 0.7)};
  rank_rows(rows);
  std::vector<std::string> order;
  for (const GridRow& r : rows) order.push_back(r.label);
  EXPECT_EQ(order, (std::vector<std::string>{"d", "a", "b", "c"}));
}

TEST(Harness, RunIsDeterministicAndCurveMonotone) {
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  const RunResult ra = run_experiment(tiny_config(a));
  const RunResult rb = run_experiment(tiny_config(b));
  ASSERT_EQ(ra.seeds.size(), 2u);
  EXPECT_TRUE(directories_identical(a, b));
  EXPECT_EQ(ra.mean_best, rb.mean_best);
  for (const SeedResult& s : ra.seeds) {
    ASSERT_TRUE(s.ok) << s.error;
    ASSERT_EQ(s.best_curve.size(), 3u);
    EXPECT_TRUE(std::is_sorted(s.best_curve.begin(), s.best_curve.end()));
    EXPECT_EQ(s.best_curve.back(), s.best_property);
    EXPECT_EQ(molecular_formula(s.best_molecule), s.best_formula);
    EXPECT_EQ(decode(parse_tokens(s.best_tokens)), s.best_molecule);
  }
  EXPECT_NE(ra.seeds[0].best_curve, ra.seeds[1].best_curve);
  EXPECT_TRUE(fs::exists(a / "run.json"));
  EXPECT_TRUE(fs::exists(a / "seed_0" / "run.jsonl"));
  EXPECT_TRUE(fs::exists(a / "seed_0" / "curve.csv"));
}

TEST(Harness, CheckpointRoundTrip) {
  const fs::path dir = scratch_dir("ckpt");
  ExperimentConfig cfg = tiny_config(dir);
  cfg.curiosity.train_mode = TrainMode::Buffer;
  run_seed(cfg, 0, dir);
  const TrainingState state = load_checkpoint(dir / "checkpoint.bin");
  EXPECT_EQ(state.episodes_done, cfg.ppo.total_episodes);
  ASSERT_TRUE(state.predictor.has_value());
  EXPECT_EQ(state.predictor->episode_counter, cfg.ppo.total_episodes);
  EXPECT_FALSE(state.predictor->buffer.empty());
  save_checkpoint(dir / "again.bin", state);
  EXPECT_EQ(read_file(dir / "checkpoint.bin"), read_file(dir / "again.bin"));
  std::ofstream(dir / "bad.bin") << "NOTACKPT";
  EXPECT_ANY_THROW(load_checkpoint(dir / "bad.bin"));
}

TEST(Harness, FailingSeedIsRecorded) {
  ExperimentConfig cfg = tiny_config(scratch_dir("fail"));
  cfg.ppo.clip_ratio = 0.0;
  const RunResult r = run_experiment(cfg);
  ASSERT_EQ(r.seeds.size(), 2u);
  for (const SeedResult& s : r.seeds) {
    EXPECT_FALSE(s.ok);
    EXPECT_FALSE(s.error.empty());
  }
  EXPECT_TRUE(std::isnan(r.mean_best));
}

TEST(Harness, ReportReaggregates) {
  const fs::path dir = scratch_dir("report");
  ExperimentConfig base = tiny_config(dir / "a0_off");
  base.curiosity.alpha = 0.0;
  base.curiosity.mode = CuriosityMode::Off;
  const RunResult r0 = run_experiment(base);
  ExperimentConfig pred = tiny_config(dir / "a1_pred_l2_g0_b0");
  const RunResult r1 = run_experiment(pred);
  const std::vector<GridRow> rows = report(dir);
  ASSERT_EQ(rows.size(), 2u);
  for (const GridRow& row : rows) {
    const double expected = row.label == "a0_off" ? r0.mean_best : r1.mean_best;
    EXPECT_EQ(row.mean_best, expected) << row.label;
    EXPECT_EQ(row.seed_bests.size(), 2u);
  }
  EXPECT_GE(rows[0].mean_best, rows[1].mean_best);
  std::ifstream csv(dir / "results.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "label,alpha,mode,dist,greedy,buffer,mean_best,seed_bests,failed");
}

}  // namespace
}  // namespace curiomol
