/**
 * Copyright 2026 The leafsiam Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// leafsiam: prepare, synthesize, augment, train, evaluate and grid-run
// Siamese leaf-disease models.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leafsiam/error.hpp"
#include "leafsiam/experiment.hpp"

namespace {

using namespace leafsiam;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  bool out_given = false;
};

ExperimentConfig resolve_config(const GlobalFlags& g) {
  if (g.config.empty()) throw Error(ErrorKind::kValidation, "--config is required");
  auto cfg = load_config(g.config);
  if (g.seed) cfg.train.seed = *g.seed;
  if (g.out_given) cfg.output_dir = g.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Siamese contrastive training and majority-vote evaluation for leaf images"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--seed", g.seed, "Seed override");
  auto* out_opt = app.add_option("--out", g.out, "Output directory")->capture_default_str();

  std::string prepare_root, prepare_manifest;
  auto* prepare = app.add_subcommand("prepare", "Scan an image folder into a manifest");
  prepare->add_option("root", prepare_root, "Folder with one subdirectory per class")->required();
  prepare->add_option("--manifest", prepare_manifest, "Output manifest (default <out>/manifest.json)");

  int synth_classes = 3, synth_per_class = 60;
  std::vector<int> synth_counts;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic image dataset");
  synth->add_option("--classes", synth_classes, "Number of classes")->capture_default_str();
  synth->add_option("--per-class", synth_per_class, "Images per class")->capture_default_str();
  synth->add_option("--counts", synth_counts, "Explicit per-class counts (overrides the others)")
      ->delimiter(',');

  std::string augment_manifest_path;
  auto* augment_cmd = app.add_subcommand("augment", "Materialize the seven augmentations");
  augment_cmd->add_option("manifest", augment_manifest_path, "Manifest of original images")->required();

  bool init = false;
  auto* train_cmd = app.add_subcommand("train", "Contrastive training");
  train_cmd->add_flag("--init", init, "Write a default config to --config (or stdout) and exit");

  EvalRequest eval_req;
  std::optional<double> eval_fraction;
  std::optional<int> eval_k;
  std::optional<std::string> eval_test;
  std::optional<std::uint64_t> split_seed;
  auto* eval_cmd = app.add_subcommand("eval", "Majority-vote evaluation of a checkpoint");
  eval_cmd->add_option("--checkpoint", eval_req.checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--manifest", eval_req.dataset, "Dataset manifest or folder");
  eval_cmd->add_option("--fraction", eval_fraction, "Stratified train fraction for the gallery side");
  eval_cmd->add_option("--kfold", eval_k, "Number of folds");
  eval_cmd->add_option("--test-manifest", eval_test, "Dedicated test manifest");
  eval_cmd->add_option("--split-seed", split_seed, "Split seed");
  eval_cmd->add_option("--gallery-seed", eval_req.gallery_seed, "Support selection seed");
  eval_cmd->add_flag("--resample-gallery", eval_req.resample_gallery, "Fresh gallery per query");

  auto* grid_cmd = app.add_subcommand("grid", "Train and evaluate at 100/75/50% training data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  g.out_given = out_opt->count() > 0;
  const std::filesystem::path out(g.out);

  try {
    if (*prepare) {
      const auto manifest = prepare_manifest.empty() ? out / "manifest.json" : std::filesystem::path(prepare_manifest);
      cmd_prepare(prepare_root, manifest, std::cout);
    } else if (*synth) {
      std::vector<int> counts = synth_counts;
      if (counts.empty()) counts.assign(static_cast<std::size_t>(std::max(synth_classes, 0)), synth_per_class);
      cmd_synth(counts, g.seed.value_or(0), out, std::cout);
    } else if (*augment_cmd) {
      cmd_augment(augment_manifest_path, out, std::cout);
    } else if (*train_cmd) {
      if (init) {
        ExperimentConfig defaults;
        defaults.dataset = "data/manifest.json";
        defaults.output_dir = g.out;
        if (g.seed) defaults.train.seed = *g.seed;
        if (g.config.empty()) {
          std::cout << config_to_json(defaults);
        } else {
          std::ofstream f(g.config, std::ios::binary);
          f << config_to_json(defaults);
          if (!f) throw Error(ErrorKind::kIo, "cannot write " + g.config);
          std::cout << "wrote " << g.config << '\n';
        }
        return kExitOk;
      }
      const auto cfg = resolve_config(g);
      const auto run = cmd_train(cfg, std::cout);
      std::cout << "checkpoint " << run.checkpoint.string() << "\nloss curve " << run.loss_csv.string() << '\n';
    } else if (*eval_cmd) {
      std::optional<ExperimentConfig> cfg;
      if (!g.config.empty()) cfg = load_config(g.config);
      if (cfg) {
        if (eval_req.dataset.empty()) eval_req.dataset = cfg->dataset;
        eval_req.split = cfg->split;
        if (eval_cmd->get_option("--gallery-seed")->count() == 0) eval_req.gallery_seed = cfg->gallery_seed;
        eval_req.resample_gallery = eval_req.resample_gallery || cfg->resample_gallery;
      }
      if (eval_fraction) eval_req.split = SplitSpec{SplitMode::kFraction, *eval_fraction, 10, "", eval_req.split.seed};
      if (eval_k) eval_req.split = SplitSpec{SplitMode::kKFold, 1.0, *eval_k, "", eval_req.split.seed};
      if (eval_test) eval_req.split = SplitSpec{SplitMode::kDedicatedTest, 1.0, 10, *eval_test, eval_req.split.seed};
      if (split_seed) eval_req.split.seed = *split_seed;
      if (g.seed) eval_req.gallery_seed = *g.seed;
      if (eval_req.dataset.empty()) throw Error(ErrorKind::kValidation, "--manifest is required");
      eval_req.output_dir = (g.out_given || !cfg) ? g.out : cfg->output_dir;
      cmd_eval(eval_req, std::cout);
    } else if (*grid_cmd) {
      cmd_grid(resolve_config(g), std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "leafsiam: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "leafsiam: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
