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

#include "vlalab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <utility>

#include <nlohmann/json.hpp>

#include "vlalab/attack/train.hpp"
#include "vlalab/attack/trigger.hpp"
#include "vlalab/defense/experiments.hpp"
#include "vlalab/env/dataset.hpp"
#include "vlalab/env/rollout.hpp"
#include "vlalab/env/sim.hpp"
#include "vlalab/errors.hpp"
#include "vlalab/eval/analysis.hpp"
#include "vlalab/eval/metrics.hpp"
#include "vlalab/io/csv.hpp"
#include "vlalab/io/svg.hpp"
#include "vlalab/model/bundle.hpp"

namespace vlalab::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void require_file(const std::string& path, const std::string& hint) {
  if (!fs::exists(path)) {
    throw MissingArtifact("missing " + path + " (" + hint + ")");
  }
}

// Trainers report per-step losses; a diverged run must fail loudly.
void require_finite(const std::vector<attack::LossRow>& rows, const std::string& what) {
  for (const auto& r : rows) {
    if (!std::isfinite(r.loss)) {
      throw NumericError(what + ": non-finite loss at step " +
                         std::to_string(r.step));
    }
  }
}

void write_history(const std::string& path, const std::vector<std::string>& header,
                   const std::vector<attack::LossRow>& rows) {
  io::CsvWriter csv(header);
  for (const auto& r : rows) {
    csv.row({std::to_string(r.step), io::fmt_fixed(r.loss, 6),
             io::fmt_fixed(r.task, 6), io::fmt_fixed(r.attack, 6)});
  }
  csv.write(path);
}

std::string rate(double v) { return io::fmt_fixed(v, 1); }

// The checkpoint's own trigger when saved next to it, else the configured one.
attack::TriggerSpec trigger_for(const ExperimentConfig& cfg,
                                const std::string& checkpoint) {
  const std::string tpath = trigger_file_for(checkpoint);
  if (fs::exists(tpath)) return load_trigger(tpath);
  return cfg.trigger.build();
}

std::string resolve_checkpoint(const ExperimentConfig& cfg,
                               const std::string& checkpoint) {
  return checkpoint.empty() ? model_file(cfg, "odo") : checkpoint;
}

eval::RunOptions run_options(const ExperimentConfig& cfg) {
  eval::RunOptions opts;
  opts.threads = cfg.threads;
  return opts;
}

json report_json(const eval::MetricsReport& r) {
  json j;
  j["suite"] = env::suite_name(r.suite);
  j["episodes"] = r.episodes;
  j["sr_wo"] = r.sr_wo;
  j["sr_w"] = r.sr_w;
  j["srhat_wo"] = r.srhat_wo;
  j["srhat_w"] = r.srhat_w;
  j["asr"] = r.asr;
  return j;
}

json cosine_json(const eval::CosineStats& s) {
  json j;
  j["mean"] = s.mean;
  j["hist"] = s.hist;
  return j;
}

}  // namespace

std::string data_file(const ExperimentConfig& cfg, env::Suite suite) {
  return cfg.out_dir + "/data/" + env::suite_name(suite) + ".bin";
}

std::string model_file(const ExperimentConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/models/" + name + ".ckpt";
}

std::string log_file(const ExperimentConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/logs/" + name + ".csv";
}

std::string report_file(const ExperimentConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/reports/" + name;
}

std::string trigger_file_for(const std::string& checkpoint_path) {
  std::string stem = checkpoint_path;
  const std::string ext = ".ckpt";
  if (stem.size() >= ext.size() &&
      stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) {
    stem.resize(stem.size() - ext.size());
  }
  return stem + "_trigger.json";
}

env::Dataset load_all_data(const ExperimentConfig& cfg) {
  env::Dataset all;
  for (env::Suite s : env::kAllSuites) {
    const std::string path = data_file(cfg, s);
    require_file(path, "run gen-data first");
    env::Dataset part = env::load_dataset(path);
    all.samples.insert(all.samples.end(),
                       std::make_move_iterator(part.samples.begin()),
                       std::make_move_iterator(part.samples.end()));
  }
  return all;
}

void cmd_gen_data(const ExperimentConfig& cfg) {
  io::ensure_dir(cfg.out_dir + "/data");
  env::DataGenConfig gen = cfg.data;
  gen.seed = cfg.seed;
  for (env::Suite s : env::kAllSuites) {
    const env::Dataset ds = env::generate_suite_dataset(gen, s);
    const std::string path = data_file(cfg, s);
    env::save_dataset(ds, path);
    std::cout << "wrote " << path << " (" << ds.samples.size() << " samples)\n";
  }
}

void cmd_train_clean(const ExperimentConfig& cfg) {
  const env::Dataset data = load_all_data(cfg);
  io::ensure_dir(cfg.out_dir + "/models");
  io::ensure_dir(cfg.out_dir + "/logs");

  model::ModelBundle init = model::init_model(cfg.model, cfg.seed);
  attack::TrainResult r = attack::train_clean(init, data, cfg.train, cfg.seed);
  require_finite(r.history, "train-clean");

  const std::string ckpt = model_file(cfg, "clean");
  model::save_model(r.model, ckpt);
  write_history(log_file(cfg, "clean_train"), {"step", "loss", "task", "attack"},
                r.history);
  std::cout << "wrote " << ckpt << "\n";
}

void cmd_attack(const ExperimentConfig& cfg, const std::string& method) {
  if (method != "odo" && method != "dp" && method != "mp" && method != "joint") {
    throw ConfigError("unknown attack method: " + method +
                      " (expected odo, dp, mp, or joint)");
  }
  const env::Dataset data = load_all_data(cfg);
  io::ensure_dir(cfg.out_dir + "/models");
  io::ensure_dir(cfg.out_dir + "/logs");

  attack::TriggerSpec spec = cfg.trigger.build();
  const std::string ckpt = model_file(cfg, method);

  // Every method starts from the clean-trained victim, mirroring the
  // fine-tuning protocol the success-rate baselines assume.
  const std::string clean_path = model_file(cfg, "clean");
  require_file(clean_path, "run train-clean first");
  const model::ModelBundle clean = model::load_model(clean_path, cfg.model);

  if (method == "odo") {
    attack::PairedData paired;
    if (spec.kind == attack::TriggerKind::kPatch) {
      paired = attack::make_paired_data(data, spec);
    } else {
      env::DataGenConfig gen = cfg.data;
      gen.seed = cfg.seed;
      paired = attack::generate_paired_data(gen, spec);
    }

    attack::Stage1Result s1 =
        attack::stage1_train(clean, clean, paired, cfg.stage1, cfg.seed);
    require_finite(s1.history, "attack odo stage 1");
    attack::TrainResult s2 =
        attack::stage2_train(s1.model, data, cfg.stage2, cfg.seed);
    require_finite(s2.history, "attack odo stage 2");

    model::save_model(s2.model, ckpt);
    save_trigger(s1.trigger, trigger_file_for(ckpt));
    write_history(log_file(cfg, "odo_stage1"),
                  {"step", "loss", "restrict", "separation"}, s1.history);
    write_history(log_file(cfg, "odo_stage2"), {"step", "loss", "task", "attack"},
                  s2.history);
  } else {
    attack::TrainResult r;
    if (method == "dp") {
      const env::Dataset poisoned =
          attack::make_dp_dataset(data, spec, cfg.dp_poison_rate, cfg.seed);
      r = attack::train_clean(clean, poisoned, cfg.train, cfg.seed);
    } else if (method == "mp") {
      r = attack::train_mp(clean, data, spec, cfg.mp, cfg.train, cfg.seed);
    } else {
      r = attack::train_joint(clean, data, spec, cfg.joint, cfg.train, cfg.seed);
    }
    require_finite(r.history, "attack " + method);
    model::save_model(r.model, ckpt);
    save_trigger(spec, trigger_file_for(ckpt));
    write_history(log_file(cfg, method + "_train"),
                  {"step", "loss", "task", "attack"}, r.history);
  }
  std::cout << "wrote " << ckpt << "\n";
}

void cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint) {
  const std::string ckpt = resolve_checkpoint(cfg, checkpoint);
  const std::string clean_path = model_file(cfg, "clean");
  require_file(ckpt, "run attack first");
  require_file(clean_path, "run train-clean first");

  const model::ModelBundle model = model::load_model(ckpt, cfg.model);
  const model::ModelBundle baseline = model::load_model(clean_path, cfg.model);
  const attack::TriggerSpec spec = trigger_for(cfg, ckpt);
  const eval::RunOptions opts = run_options(cfg);

  io::ensure_dir(cfg.out_dir + "/reports/trajectories");

  // Success-rate table over all four suites.
  std::vector<eval::MetricsReport> table;
  io::CsvWriter table_csv({"suite", "trigger", "sr_wo", "sr_w", "asr"});
  for (env::Suite s : env::kAllSuites) {
    eval::MetricsReport r =
        eval::run_eval(model, baseline, s, cfg.episodes, spec, cfg.seed, opts);
    table_csv.row({env::suite_name(s), attack::trigger_kind_name(spec.kind),
                   rate(r.sr_wo), rate(r.sr_w), rate(r.asr)});
    std::cout << "eval " << env::suite_name(s) << ": sr_wo=" << rate(r.sr_wo)
              << " sr_w=" << rate(r.sr_w) << " asr=" << rate(r.asr) << "\n";
    table.push_back(r);
  }
  table_csv.write(report_file(cfg, "table1.csv"));

  // Size x anchor grid on the spatial suite (patch triggers only). Cells at
  // the checkpoint's own size reuse its pattern with the anchor moved;
  // other sizes get a fresh fixed-pattern trigger.
  struct GridCell {
    float size;
    std::string anchor;
    eval::MetricsReport r;
  };
  std::vector<GridCell> grid;
  io::CsvWriter grid_csv({"size_fraction", "anchor", "sr_wo", "sr_w", "asr"});
  if (spec.kind == attack::TriggerKind::kPatch) {
    const float sizes[] = {0.01f, 0.05f, 0.10f};
    const attack::Anchor anchors[] = {attack::Anchor::kCenter,
                                      attack::Anchor::kTopLeft,
                                      attack::Anchor::kBottomRight};
    for (float size : sizes) {
      for (attack::Anchor a : anchors) {
        attack::TriggerSpec cell;
        if (std::fabs(size - spec.size_fraction) < 1e-6f) {
          cell = spec;
          cell.anchor = a;
        } else {
          TriggerConfig tc = cfg.trigger;
          tc.size_fraction = size;
          tc.anchor = attack::anchor_name(a);
          tc.learnable = false;
          cell = tc.build();
        }
        eval::MetricsReport r = eval::run_eval(model, baseline, env::Suite::kSpatial,
                                               cfg.episodes, cell, cfg.seed, opts);
        grid_csv.row({io::fmt_fixed(size, 2), attack::anchor_name(a), rate(r.sr_wo),
                      rate(r.sr_w), rate(r.asr)});
        grid.push_back({size, attack::anchor_name(a), r});
      }
    }
  }
  grid_csv.write(report_file(cfg, "grid.csv"));

  // Feature-space shift against the clean reference.
  eval::FeatureShiftReport shift;
  if (spec.kind == attack::TriggerKind::kPatch) {
    const env::Dataset data = load_all_data(cfg);
    shift = eval::feature_shift(model, baseline, data, spec);
  } else {
    env::DataGenConfig gen = cfg.data;
    gen.seed = cfg.seed;
    shift = eval::feature_shift(model, baseline, attack::generate_paired_data(gen, spec));
  }
  {
    io::CsvWriter csv({"metric", "mean_cosine"});
    csv.row({"pre_clean_vs_triggered", io::fmt_fixed(shift.pre.mean, 4)});
    csv.row({"post_clean_vs_triggered", io::fmt_fixed(shift.post.mean, 4)});
    csv.row({"clean_alignment", io::fmt_fixed(shift.alignment.mean, 4)});
    csv.write(report_file(cfg, "feature_shift.csv"));

    io::CsvWriter hist({"bin_lo", "bin_hi", "pre", "post", "alignment"});
    for (int b = 0; b < eval::kCosineHistBins; ++b) {
      const double lo = -1.0 + 2.0 * b / eval::kCosineHistBins;
      const double hi = -1.0 + 2.0 * (b + 1) / eval::kCosineHistBins;
      hist.row({io::fmt_fixed(lo, 2), io::fmt_fixed(hi, 2),
                std::to_string(shift.pre.hist[b]), std::to_string(shift.post.hist[b]),
                std::to_string(shift.alignment.hist[b])});
    }
    hist.write(report_file(cfg, "feature_hist.csv"));

    io::write_text(report_file(cfg, "feature_shift.svg"),
                   io::histogram_svg({"pre", "post", "alignment"},
                                     {shift.pre.hist, shift.post.hist,
                                      shift.alignment.hist},
                                     "feature cosine distribution"));
  }

  // One clean/triggered rollout pair per suite for the trajectory overlays.
  for (env::Suite s : env::kAllSuites) {
    const std::uint64_t seed0 = eval::eval_episode_seeds(cfg.seed, s, 1)[0];
    eval::RunOptions clean_opts = opts;
    eval::RunOptions trig_opts = opts;
    trig_opts.trigger = &spec;
    const auto clean_rec = eval::run_episodes(model, s, {seed0}, clean_opts)[0];
    const auto trig_rec = eval::run_episodes(model, s, {seed0}, trig_opts)[0];
    const eval::DivergenceReport div = eval::trajectory_divergence(clean_rec, trig_rec);

    io::CsvWriter csv({"step", "clean_x", "clean_y", "trig_x", "trig_y", "dist"});
    const auto& ct = clean_rec.trajectory;
    const auto& tt = trig_rec.trajectory;
    for (std::size_t i = 0; i < div.dist.size(); ++i) {
      const env::Vec2 c = ct[std::min(i, ct.size() - 1)];
      const env::Vec2 t = tt[std::min(i, tt.size() - 1)];
      csv.row({std::to_string(i), io::fmt_fixed(c.x, 4), io::fmt_fixed(c.y, 4),
               io::fmt_fixed(t.x, 4), io::fmt_fixed(t.y, 4),
               io::fmt_fixed(div.dist[i], 4)});
    }
    const std::string stem =
        std::string("trajectories/") + env::suite_name(s);
    csv.write(report_file(cfg, stem + ".csv"));

    const env::TaskSpec task = env::sample_task(s, seed0);
    const env::EnvState start = env::reset(task, seed0);
    const env::Vec2 goal = start.object_pos[static_cast<std::size_t>(task.target_index)];
    io::write_text(report_file(cfg, stem + ".svg"),
                   io::trajectory_svg(ct, tt, goal, env::suite_name(s)));
  }

  // Machine-readable bundle summary; byte-stable across reruns.
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["seed"] = cfg.seed;
  summary["episodes"] = cfg.episodes;
  summary["checkpoint"] = fs::path(ckpt).stem().string();
  {
    json t;
    t["kind"] = attack::trigger_kind_name(spec.kind);
    t["anchor"] = attack::anchor_name(spec.anchor);
    t["size_fraction"] = io::fmt_fixed(spec.size_fraction, 2);
    summary["trigger"] = t;
  }
  summary["table1"] = json::array();
  for (const auto& r : table) summary["table1"].push_back(report_json(r));
  summary["grid"] = json::array();
  for (const auto& cell : grid) {
    json c;
    c["size_fraction"] = io::fmt_fixed(cell.size, 2);
    c["anchor"] = cell.anchor;
    json r = report_json(cell.r);
    r.erase("suite");
    c.update(r);
    summary["grid"].push_back(c);
  }
  {
    json fs_json;
    fs_json["pre"] = cosine_json(shift.pre);
    fs_json["post"] = cosine_json(shift.post);
    fs_json["alignment"] = cosine_json(shift.alignment);
    fs_json["samples"] = shift.samples;
    summary["feature_shift"] = fs_json;
  }
  io::write_text(report_file(cfg, "summary.json"), summary.dump(2) + "\n");
  std::cout << "wrote " << report_file(cfg, "summary.json") << "\n";
}

void cmd_defense(const ExperimentConfig& cfg, const std::string& checkpoint) {
  const std::string ckpt = resolve_checkpoint(cfg, checkpoint);
  const std::string clean_path = model_file(cfg, "clean");
  require_file(ckpt, "run attack first");
  require_file(clean_path, "run train-clean first");

  const model::ModelBundle model = model::load_model(ckpt, cfg.model);
  const model::ModelBundle baseline = model::load_model(clean_path, cfg.model);
  const attack::TriggerSpec spec = trigger_for(cfg, ckpt);
  const eval::RunOptions opts = run_options(cfg);
  const env::Suite suite = env::Suite::kSpatial;

  io::ensure_dir(cfg.out_dir + "/reports");
  io::CsvWriter csv({"defense", "level", "sr_wo", "sr_w", "asr"});

  const std::pair<defense::DefenseKind, const std::vector<double>*> sweeps[] = {
      {defense::DefenseKind::kCompression, &cfg.compression_levels},
      {defense::DefenseKind::kNoise, &cfg.noise_levels},
  };
  for (const auto& [kind, levels] : sweeps) {
    const std::vector<defense::DefenseRow> rows = defense::evaluate_under_defense(
        model, baseline, suite, kind, *levels, spec, cfg.episodes, cfg.seed, opts);
    std::vector<std::string> col_labels;
    std::vector<double> asr_row, sr_row;
    for (const auto& row : rows) {
      csv.row({defense::defense_name(row.kind), io::fmt_fixed(row.level, 2),
               rate(row.report.sr_wo), rate(row.report.sr_w), rate(row.report.asr)});
      std::cout << "defense " << defense::defense_name(row.kind) << " "
                << io::fmt_fixed(row.level, 2) << ": sr_wo=" << rate(row.report.sr_wo)
                << " sr_w=" << rate(row.report.sr_w)
                << " asr=" << rate(row.report.asr) << "\n";
      col_labels.push_back(io::fmt_fixed(row.level, 2));
      asr_row.push_back(row.report.asr);
      sr_row.push_back(row.report.sr_wo);
    }
    io::write_text(
        report_file(cfg, std::string("defense_") + defense::defense_name(kind) + ".svg"),
        io::grid_svg({"asr", "sr_wo"}, col_labels, {asr_row, sr_row},
                     std::string("defense sweep: ") + defense::defense_name(kind)));
  }
  csv.write(report_file(cfg, "defense.csv"));
  std::cout << "wrote " << report_file(cfg, "defense.csv") << "\n";
}

void cmd_reft(const ExperimentConfig& cfg, const std::string& source,
              const std::string& target) {
  const env::Suite src = env::suite_from_name(source);
  const env::Suite tgt = env::suite_from_name(target);
  if (src == tgt) {
    std::cerr << "note: source and target suite are the same (" << source << ")\n";
  }
  const std::string clean_path = model_file(cfg, "clean");
  require_file(clean_path, "run train-clean first");
  require_file(data_file(cfg, src), "run gen-data first");
  require_file(data_file(cfg, tgt), "run gen-data first");

  const model::ModelBundle clean = model::load_model(clean_path, cfg.model);
  const env::Dataset src_data = env::load_dataset(data_file(cfg, src));
  const env::Dataset tgt_data = env::load_dataset(data_file(cfg, tgt));
  const attack::TriggerSpec spec = cfg.trigger.build();

  io::ensure_dir(cfg.out_dir + "/models");
  io::ensure_dir(cfg.out_dir + "/logs");
  io::ensure_dir(cfg.out_dir + "/reports");

  // Backdoor the source suite only, then hand the model to a benign tuner.
  attack::PairedData paired;
  if (spec.kind == attack::TriggerKind::kPatch) {
    paired = attack::make_paired_data(src_data, spec);
  } else {
    env::DataGenConfig gen = cfg.data;
    gen.seed = cfg.seed;
    paired = attack::generate_suite_paired_data(gen, spec, src);
  }
  attack::Stage1Result s1 = attack::stage1_train(clean, clean, paired, cfg.stage1, cfg.seed);
  require_finite(s1.history, "reft stage 1");
  attack::TrainResult s2 = attack::stage2_train(s1.model, src_data, cfg.stage2, cfg.seed);
  require_finite(s2.history, "reft stage 2");
  attack::TrainResult tuned = defense::refinetune(s2.model, tgt_data, cfg.reft, cfg.seed);
  require_finite(tuned.history, "reft fine-tune");

  const std::string name = std::string("reft_") + source + "_" + target;
  const std::string ckpt = model_file(cfg, name);
  model::save_model(tuned.model, ckpt);
  save_trigger(s1.trigger, trigger_file_for(ckpt));
  write_history(log_file(cfg, name + "_train"), {"step", "loss", "task", "attack"},
                tuned.history);

  const eval::MetricsReport r = eval::run_eval(tuned.model, clean, tgt, cfg.episodes,
                                               s1.trigger, cfg.seed, run_options(cfg));
  io::CsvWriter csv({"source", "target", "sr_wo", "sr_w", "asr"});
  csv.row({source, target, rate(r.sr_wo), rate(r.sr_w), rate(r.asr)});
  csv.write(report_file(cfg, name + ".csv"));
  std::cout << "reft " << source << " -> " << target << ": sr_wo=" << rate(r.sr_wo)
            << " sr_w=" << rate(r.sr_w) << " asr=" << rate(r.asr) << "\n";
}

void cmd_report(const ExperimentConfig& cfg) {
  const std::string spath = report_file(cfg, "summary.json");
  require_file(spath, "run eval first");
  json summary;
  try {
    summary = json::parse(io::read_text(spath));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad summary.json: ") + e.what());
  }

  std::cout << "checkpoint: " << summary.value("checkpoint", std::string("?"))
            << "  seed: " << summary.value("seed", std::uint64_t{0})
            << "  episodes: " << summary.value("episodes", 0) << "\n\n";

  std::cout << "success rates (model vs clean baseline)\n";
  std::cout << "  suite      sr_wo   sr_w    srhat_wo srhat_w  asr\n";
  for (const auto& row : summary.value("table1", json::array())) {
    std::printf("  %-10s %-7s %-7s %-8s %-8s %s\n",
                row.value("suite", std::string("?")).c_str(),
                rate(row.value("sr_wo", 0.0)).c_str(),
                rate(row.value("sr_w", 0.0)).c_str(),
                rate(row.value("srhat_wo", 0.0)).c_str(),
                rate(row.value("srhat_w", 0.0)).c_str(),
                rate(row.value("asr", 0.0)).c_str());
  }

  const auto grid = summary.value("grid", json::array());
  if (!grid.empty()) {
    std::cout << "\ntrigger size x anchor grid (spatial suite, asr)\n";
    std::cout << "  size   anchor         asr\n";
    for (const auto& row : grid) {
      std::printf("  %-6s %-14s %s\n",
                  row.value("size_fraction", std::string("?")).c_str(),
                  row.value("anchor", std::string("?")).c_str(),
                  rate(row.value("asr", 0.0)).c_str());
    }
  }

  if (summary.contains("feature_shift")) {
    const auto& fsj = summary["feature_shift"];
    std::cout << "\nfeature cosine means: pre="
              << io::fmt_fixed(fsj["pre"].value("mean", 0.0), 4)
              << " post=" << io::fmt_fixed(fsj["post"].value("mean", 0.0), 4)
              << " alignment=" << io::fmt_fixed(fsj["alignment"].value("mean", 0.0), 4)
              << "\n";
  }

  const std::string dpath = report_file(cfg, "defense.csv");
  if (fs::exists(dpath)) {
    std::cout << "\ndefense sweeps\n";
    std::cout << io::read_text(dpath);
  }

  std::vector<std::string> reft_files;
  const std::string rdir = cfg.out_dir + "/reports";
  for (const auto& entry : fs::directory_iterator(rdir)) {
    const std::string base = entry.path().filename().string();
    if (base.rfind("reft_", 0) == 0 && entry.path().extension() == ".csv") {
      reft_files.push_back(entry.path().string());
    }
  }
  std::sort(reft_files.begin(), reft_files.end());
  if (!reft_files.empty()) {
    std::cout << "\nre-finetuning persistence\n";
    std::cout << "source,target,sr_wo,sr_w,asr\n";
    for (const auto& f : reft_files) {
      const std::string text = io::read_text(f);
      const std::size_t nl = text.find('\n');
      if (nl != std::string::npos) std::cout << text.substr(nl + 1);
    }
  }
}

}  // namespace vlalab::cli
