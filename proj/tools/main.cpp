// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

// curiomol: train, grid, decode and report subcommands.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curiomol/chem.hpp"
#include "curiomol/errors.hpp"
#include "curiomol/harness.hpp"
#include "curiomol/selfies.hpp"

namespace {

using namespace curiomol;

struct CommonOptions {
  std::string config_file;
  std::string task;
  std::string mode;
  std::string dist;
  std::string reward;
  std::string out;
  std::vector<std::uint64_t> seeds;
  int episodes = 0;
  int batch = 0;
  bool no_checkpoint = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_file, "INI config file, applied before the flags");
  cmd->add_option("--task", o.task, "qed, plogp or sim");
  cmd->add_option("--reward", o.reward, "terminal or dense");
  cmd->add_option("--seed", o.seeds, "one or more seeds");
  cmd->add_option("--episodes", o.episodes, "total episodes per seed");
  cmd->add_option("--batch", o.batch, "episodes per PPO batch");
  cmd->add_option("--out", o.out, "output directory")->required();
  cmd->add_flag("--no-checkpoint", o.no_checkpoint, "skip checkpoint.bin");
}

ExperimentConfig build_config(const CommonOptions& o) {
  ExperimentConfig c;
  if (!o.config_file.empty()) load_config(o.config_file, c);
  if (!o.task.empty()) c.task = parse_task(o.task);
  if (!o.reward.empty()) c.env.reward_mode = parse_reward_mode(o.reward);
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (o.episodes > 0) c.ppo.total_episodes = o.episodes;
  if (o.batch > 0) c.ppo.episodes_per_batch = o.batch;
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.no_checkpoint) c.write_checkpoints = false;
  return c;
}

int decode_command(const std::string& text) {
  TokenSequence seq;
  try {
    seq = parse_tokens(text);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n  " << text << "\n  " << std::string(e.position(), ' ') << "^\n";
    return 2;
  }
  const MolGraph mol = decode(seq);
  const DescriptorVector d = descriptors(mol);
  std::printf("formula        %s\n", molecular_formula(mol).c_str());
  std::printf("heavy atoms    %d\n", mol.atom_count());
  std::printf("mol weight     %.4f\n", d.molecular_weight);
  std::printf("logP           %.4f\n", d.logp);
  std::printf("TPSA           %.4f\n", d.polar_surface_area);
  std::printf("HBA / HBD      %d / %d\n", d.hbond_acceptors, d.hbond_donors);
  std::printf("rot. bonds     %d\n", d.rotatable_bonds);
  std::printf("rings          %d (%d aromatic)\n", d.ring_count, d.aromatic_ring_count);
  std::printf("QED            %.6f\n", qed(mol));
  std::printf("penalized logP %.6f\n", penalized_logp(mol));
  std::printf("fingerprint    %d bits set\n", morgan_fingerprint(mol).popcount());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curiosity-driven SELFIES molecule generation with PPO"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  double alpha = 1.0;
  std::string greedy, buffer;
  CLI::App* train = app.add_subcommand("train", "train one configuration over one or more seeds");
  add_common(train, train_opts);
  auto* alpha_opt = train->add_option("--alpha", alpha, "intrinsic reward weight");
  train->add_option("--mode", train_opts.mode, "pred, memory or off");
  train->add_option("--dist", train_opts.dist, "l1 or l2");
  train->add_option("--greedy", greedy, "true or false");
  train->add_option("--buffer", buffer, "true or false");

  CommonOptions grid_opts;
  CLI::App* grid = app.add_subcommand("grid", "run the full ablation grid");
  add_common(grid, grid_opts);

  std::string tokens;
  CLI::App* dec = app.add_subcommand("decode", "decode a SELFIES string and print its properties");
  dec->add_option("tokens", tokens, "bracketed symbols, e.g. [C][=O]")->required();

  std::string report_dir;
  CLI::App* rep = app.add_subcommand("report", "re-aggregate results from an output directory");
  rep->add_option("dir", report_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dec) return decode_command(tokens);

    if (*rep) {
      const auto rows = report(report_dir);
      if (rows.empty()) {
        std::cerr << "no run.json found under " << report_dir << "\n";
        return 1;
      }
      print_table(std::cout, rows);
      return 0;
    }

    if (*train) {
      ExperimentConfig c = build_config(train_opts);
      if (*alpha_opt) c.curiosity.alpha = alpha;
      if (!train_opts.mode.empty()) c.curiosity.mode = parse_mode(train_opts.mode);
      if (!train_opts.dist.empty()) c.curiosity.dist = parse_distance(train_opts.dist);
      auto flag = [](const std::string& s) {
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        throw std::runtime_error("expected true or false, got '" + s + "'");
      };
      if (!greedy.empty()) c.curiosity.greedy = flag(greedy);
      if (!buffer.empty()) c.curiosity.train_mode = flag(buffer) ? TrainMode::Buffer : TrainMode::PerEpisode;
      const RunResult r = run_experiment(c);
      int failures = 0;
      for (const SeedResult& s : r.seeds) {
        if (s.ok) {
          std::printf("seed %llu  best %.6f  %s  %s\n", static_cast<unsigned long long>(s.seed), s.best_property,
                      s.best_formula.c_str(), s.best_tokens.c_str());
        } else {
          ++failures;
          std::printf("seed %llu  FAILED: %s\n", static_cast<unsigned long long>(s.seed), s.error.c_str());
        }
      }
      std::printf("mean best %.6f\n", r.mean_best);
      return failures == static_cast<int>(r.seeds.size()) ? 1 : 0;
    }

    if (*grid) {
      const ExperimentConfig c = build_config(grid_opts);
      print_table(std::cout, run_grid(c));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
