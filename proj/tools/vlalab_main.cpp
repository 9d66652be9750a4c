/*
 * Copyright 2026 The vlalab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vlalab/cli/commands.hpp"
#include "vlalab/cli/config.hpp"
#include "vlalab/errors.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int episodes = 0;
  bool seed_set = false;
  bool out_set = false;
  bool episodes_set = false;
};

vlalab::cli::ExperimentConfig resolve_config(const GlobalArgs& g) {
  vlalab::cli::ExperimentConfig cfg = g.config_path.empty()
                                          ? vlalab::cli::default_config()
                                          : vlalab::cli::load_config(g.config_path);
  if (g.seed_set) cfg.seed = g.seed;
  if (g.out_set) cfg.out_dir = g.out_dir;
  if (g.episodes_set) cfg.episodes = g.episodes;
  cfg.data.seed = cfg.seed;
  vlalab::cli::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vlalab: a desk-scale backdoor laboratory for a toy "
               "vision-language-action policy"};
  app.set_version_flag("--version", std::string(vlalab::kVersion));
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path, "experiment config JSON path")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "override the config seed")
      ->each([&g](const std::string&) { g.seed_set = true; });
  app.add_option("--out", g.out_dir, "override the output directory")
      ->each([&g](const std::string&) { g.out_set = true; });
  app.add_option("--episodes", g.episodes, "override evaluation episodes per condition")
      ->each([&g](const std::string&) { g.episodes_set = true; });

  // Global flags may appear after the subcommand name.
  auto sub = [&app](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  CLI::App* gen = sub("gen-data", "generate the four suite datasets");
  CLI::App* train = sub("train-clean", "train the clean baseline policy");

  std::string method;
  CLI::App* atk = sub("attack", "train a backdoored policy");
  atk->add_option("--method", method, "odo, dp, mp, or joint")->required();

  std::string eval_ckpt;
  CLI::App* ev = sub("eval", "evaluate a checkpoint against the clean baseline");
  ev->add_option("checkpoint", eval_ckpt, "checkpoint path (default: models/odo.ckpt)");

  std::string def_ckpt;
  CLI::App* def = sub("defense", "compression and noise sweeps");
  def->add_option("checkpoint", def_ckpt, "checkpoint path (default: models/odo.ckpt)");

  std::string source, target;
  CLI::App* reft = sub("reft", "attack a source suite, fine-tune on a target suite");
  reft->add_option("--source", source, "source suite name")->required();
  reft->add_option("--target", target, "target suite name")->required();

  CLI::App* rep = sub("report", "print collected reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return vlalab::kExitConfig;
  }

  try {
    const vlalab::cli::ExperimentConfig cfg = resolve_config(g);
    if (gen->parsed()) vlalab::cli::cmd_gen_data(cfg);
    if (train->parsed()) vlalab::cli::cmd_train_clean(cfg);
    if (atk->parsed()) vlalab::cli::cmd_attack(cfg, method);
    if (ev->parsed()) vlalab::cli::cmd_eval(cfg, eval_ckpt);
    if (def->parsed()) vlalab::cli::cmd_defense(cfg, def_ckpt);
    if (reft->parsed()) vlalab::cli::cmd_reft(cfg, source, target);
    if (rep->parsed()) vlalab::cli::cmd_report(cfg);
  } catch (const vlalab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return vlalab::kExitConfig;
  } catch (const vlalab::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return vlalab::kExitNumeric;
  } catch (const vlalab::MissingArtifact& e) {
    std::cerr << "missing artifact: " << e.what() << "\n";
    return vlalab::kExitMissing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return vlalab::kExitOk;
}
