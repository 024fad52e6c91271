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

#include "leafsiam/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "leafsiam/augment.hpp"
#include "leafsiam/checkpoint.hpp"
#include "leafsiam/error.hpp"
#include "leafsiam/gallery.hpp"
#include "leafsiam/hash.hpp"
#include "leafsiam/synthetic.hpp"

namespace leafsiam {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json split_to_json(const SplitSpec& s) {
  ordered_json j;
  j["mode"] = std::string(to_string(s.mode));
  j["train_fraction"] = s.train_fraction;
  j["k"] = s.k;
  j["test_manifest"] = s.test_manifest;
  j["seed"] = s.seed;
  return j;
}

ordered_json train_to_json(const TrainConfig& t) {
  ordered_json j;
  j["epochs"] = t.epochs;
  j["batch_size"] = t.batch_size;
  j["learning_rate"] = t.learning_rate;
  j["weight_decay"] = t.weight_decay;
  j["margin"] = t.margin;
  j["seed"] = t.seed;
  j["train_fraction"] = t.train_fraction;
  j["similar_ratio"] = t.similar_ratio;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

std::string dataset_name(const std::string& dataset) {
  const fs::path p(dataset);
  if (fs::is_directory(p)) return p.lexically_normal().filename().string();
  if (p.stem() == "manifest" && p.has_parent_path()) {
    return fs::absolute(p).parent_path().filename().string();
  }
  return p.stem().string();
}

std::string sidecar_json(const ExperimentConfig& config, const DatasetManifest& train_manifest,
                         const NetworkParams<float>& params, const fs::path& checkpoint, int epoch,
                         bool partial) {
  ordered_json j;
  j["format_version"] = kCheckpointVersion;
  j["checkpoint"] = checkpoint.filename().string();
  j["partial"] = partial;
  j["epoch"] = epoch;
  j["backbone"] = "reference";
  j["image_size"] = kImageSide;
  j["normalization"] = "rgb_scale_0_1";
  j["params_fingerprint"] = to_hex(params_fingerprint(params));
  j["dataset_fingerprint"] = to_hex(train_manifest.fingerprint());
  j["dataset_samples"] = train_manifest.size();
  j["train_config"] = train_to_json(config.train);
  return j.dump(2) + "\n";
}

std::string eval_echo(const EvalRequest& r) {
  ordered_json j;
  j["checkpoint"] = r.checkpoint;
  j["dataset"] = r.dataset;
  j["split"] = split_to_json(r.split);
  j["gallery_seed"] = r.gallery_seed;
  j["resample_gallery"] = r.resample_gallery;
  return j.dump();
}

EvalReport run_eval(const EmbeddingModel& model, const DatasetManifest& train,
                    const DatasetManifest& eval, std::uint64_t gallery_seed, bool resample) {
  if (eval.empty()) throw Error(ErrorKind::kValidation, "evaluation set is empty");
  if (resample) return evaluate_resampled(model, train, eval, gallery_seed);
  return evaluate(build_gallery(model, train, gallery_seed), model, eval);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["dataset"] = c.dataset;
  j["split"] = split_to_json(c.split);
  j["augment"] = c.augment;
  j["train"] = train_to_json(c.train);
  j["gallery_seed"] = c.gallery_seed;
  j["resample_gallery"] = c.resample_gallery;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::kValidation, "config must be a JSON object");

  std::vector<std::string> missing;
  auto need = [&](const ordered_json& obj, const std::string& prefix, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) missing.push_back(prefix + key);
  };
  for (const char* key : {"dataset", "split", "augment", "train", "gallery_seed", "output_dir"}) {
    need(doc, "", key);
  }
  if (doc.contains("split")) {
    const auto& s = doc["split"];
    need(s, "split.", "mode");
    need(s, "split.", "seed");
    if (s.is_object() && s.contains("mode") && s["mode"].is_string()) {
      const auto mode = s["mode"].get<std::string>();
      if (mode == "fraction") need(s, "split.", "train_fraction");
      if (mode == "kfold" || mode == "k-fold") need(s, "split.", "k");
      if (mode == "dedicated" || mode == "dedicated-test") need(s, "split.", "test_manifest");
    }
  }
  if (doc.contains("train")) {
    for (const char* key : {"epochs", "batch_size", "learning_rate", "weight_decay", "margin",
                            "seed", "train_fraction"}) {
      need(doc["train"], "train.", key);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorKind::kValidation, "config is missing field(s): " + list);
  }

  try {
    ExperimentConfig c;
    c.dataset = doc["dataset"].get<std::string>();
    const auto& s = doc["split"];
    c.split.mode = split_mode_from_string(s["mode"].get<std::string>());
    c.split.seed = s["seed"].get<std::uint64_t>();
    if (s.contains("train_fraction")) c.split.train_fraction = s["train_fraction"].get<double>();
    if (s.contains("k")) c.split.k = s["k"].get<int>();
    if (s.contains("test_manifest")) c.split.test_manifest = s["test_manifest"].get<std::string>();
    c.augment = doc["augment"].get<bool>();
    const auto& t = doc["train"];
    c.train.epochs = t["epochs"].get<int>();
    c.train.batch_size = t["batch_size"].get<int>();
    c.train.learning_rate = t["learning_rate"].get<double>();
    c.train.weight_decay = t["weight_decay"].get<double>();
    c.train.margin = t["margin"].get<double>();
    c.train.seed = t["seed"].get<std::uint64_t>();
    c.train.train_fraction = t["train_fraction"].get<double>();
    if (t.contains("similar_ratio")) c.train.similar_ratio = t["similar_ratio"].get<double>();
    c.gallery_seed = doc["gallery_seed"].get<std::uint64_t>();
    if (doc.contains("resample_gallery")) c.resample_gallery = doc["resample_gallery"].get<bool>();
    c.output_dir = doc["output_dir"].get<std::string>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("config field has the wrong type: ") + e.what());
  }
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

void validate(const ExperimentConfig& c) {
  if (c.dataset.empty()) throw Error(ErrorKind::kValidation, "dataset path is empty");
  if (!fs::exists(c.dataset)) throw Error(ErrorKind::kValidation, "dataset " + c.dataset + " does not exist");
  validate(c.split);
  if (c.split.mode == SplitMode::kDedicatedTest && !fs::exists(c.split.test_manifest)) {
    throw Error(ErrorKind::kValidation, "test manifest " + c.split.test_manifest + " does not exist");
  }
  validate(c.train);
  if (c.output_dir.empty()) throw Error(ErrorKind::kValidation, "output_dir is empty");
}

DatasetManifest load_dataset(const fs::path& path) {
  if (fs::is_directory(path)) return scan_folder(path).manifest;
  return load_manifest(path);
}

ScanResult cmd_prepare(const fs::path& root, const fs::path& out_manifest, std::ostream& log) {
  auto scan = scan_folder(root);
  save_manifest(scan.manifest, out_manifest);
  const auto& m = scan.manifest;
  std::size_t width = 5;
  for (const auto& name : m.classes()) width = std::max(width, name.size());
  log << std::left << std::setw(static_cast<int>(width)) << "class" << "  count\n";
  for (std::size_t c = 0; c < m.class_count(); ++c) {
    log << std::left << std::setw(static_cast<int>(width)) << m.classes()[c] << "  " << m.counts()[c] << '\n';
  }
  log << std::left << std::setw(static_cast<int>(width)) << "total" << "  " << m.size() << '\n';
  if (!scan.skipped.empty()) {
    log << "warning: skipped " << scan.skipped.size() << " undecodable file(s)\n";
    for (const auto& s : scan.skipped) log << "  " << s << '\n';
  }
  return scan;
}

DatasetManifest cmd_synth(const std::vector<int>& per_class_counts, std::uint64_t seed,
                          const fs::path& out_dir, std::ostream& log) {
  auto m = generate_synthetic(per_class_counts, seed, out_dir);
  log << "wrote " << m.size() << " images in " << m.class_count() << " classes to "
      << out_dir.string() << '\n';
  return m;
}

DatasetManifest augment_manifest(const DatasetManifest& manifest, const fs::path& out_dir,
                                 const ImageLoader& loader) {
  if (manifest.empty()) throw Error(ErrorKind::kValidation, "cannot augment an empty manifest");
  if (manifest.has_augmented()) {
    throw Error(ErrorKind::kValidation,
                "manifest already contains augmented samples; augment the originals instead");
  }
  const auto root = fs::absolute(out_dir).lexically_normal() / "images";
  std::vector<Sample> samples;
  samples.reserve(manifest.size() * (kAugmentations.size() + 1));
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& s = manifest.samples()[i];
    samples.push_back(s);
    const auto variants = augment(loader(s));
    char prefix[32];
    std::snprintf(prefix, sizeof(prefix), "%06zu_", i);
    const auto stem = fs::path(s.path).stem().string();
    for (std::size_t a = 0; a < variants.size(); ++a) {
      const auto path = root / manifest.classes()[s.class_index] /
                        (prefix + stem + "_" + std::string(augmentation_tag(kAugmentations[a])) + ".png");
      write_png(variants[a], path);
      samples.push_back({path.generic_string(), s.class_index, Origin::kAugmented});
    }
  }
  DatasetManifest out(manifest.classes(), std::move(samples), manifest.seed());
  save_manifest(out, fs::path(out_dir) / "manifest.json");
  return out;
}

DatasetManifest cmd_augment(const fs::path& manifest_path, const fs::path& out_dir, std::ostream& log) {
  const auto in = load_manifest(manifest_path);
  auto out = augment_manifest(in, out_dir);
  log << "augmented " << in.size() << " samples to " << out.size() << '\n';
  return out;
}

TrainRun cmd_train(const ExperimentConfig& config, std::ostream& log, const TrainOptions& options) {
  validate(config);
  const fs::path out(config.output_dir);
  fs::create_directories(out);
  write_text(out / "config.json", config_to_json(config));

  const auto dataset = load_dataset(config.dataset);
  auto split = make_split(dataset, config.split);
  DatasetManifest train_split = split.train;
  if (config.augment) train_split = augment_manifest(train_split, out / "augmented", options.loader);

  TrainOptions opts = options;
  std::vector<LossRecord> so_far;
  TrainRun run;
  run.loss_csv = out / "loss.csv";
  opts.hooks.on_batch = [&](const LossRecord& r) {
    so_far.push_back(r);
    if (options.hooks.on_batch) options.hooks.on_batch(r);
  };
  // Subsampling happens inside train(); the sidecar fingerprints the split
  // that was handed to it.
  opts.hooks.on_epoch_end = [&](int epoch, const NetworkParams<float>& params) {
    char name[32];
    std::snprintf(name, sizeof(name), "epoch_%02d.ckpt", epoch);
    const auto path = out / "checkpoints" / name;
    save_checkpoint(params, path);
    write_text(path.string() + ".json", sidecar_json(config, train_split, params, path, epoch, true));
    write_loss_csv(so_far, run.loss_csv);
    log << "epoch " << epoch << " done\n";
    if (options.hooks.on_epoch_end) options.hooks.on_epoch_end(epoch, params);
  };

  run.result = train(config.train, train_split, opts);
  save_manifest(run.result.train_manifest, out / "train_manifest.json");
  run.checkpoint = out / "final.ckpt";
  save_checkpoint(run.result.params, run.checkpoint);
  write_text(run.checkpoint.string() + ".json",
             sidecar_json(config, train_split, run.result.params, run.checkpoint,
                          config.train.epochs, false));
  write_loss_csv(run.result.losses, run.loss_csv);
  return run;
}

EvalRun cmd_eval(const EvalRequest& request, std::ostream& log) {
  validate(request.split);
  if (!fs::exists(request.checkpoint)) {
    throw Error(ErrorKind::kValidation, "checkpoint " + request.checkpoint + " does not exist");
  }
  if (!fs::exists(request.dataset)) {
    throw Error(ErrorKind::kValidation, "dataset " + request.dataset + " does not exist");
  }
  const EmbeddingModel model(BackboneConfig::reference(), load_checkpoint(request.checkpoint));
  const auto dataset = load_dataset(request.dataset);
  const auto split = make_split(dataset, request.split);
  const fs::path out(request.output_dir);
  const auto echo = eval_echo(request);

  EvalRun run;
  if (request.split.mode == SplitMode::kKFold) {
    for (std::size_t f = 0; f < split.folds.size(); ++f) {
      const auto [train, eval] = fold_train_eval(split.folds, f);
      auto report = run_eval(model, train, eval, request.gallery_seed, request.resample_gallery);
      char dir[32];
      std::snprintf(dir, sizeof(dir), "fold_%02zu", f + 1);
      write_report(report, out / dir / "report.json", out / dir / "report.csv", echo);
      log << dir << ": accuracy " << report.overall_accuracy << " on " << report.sample_count << " samples\n";
      run.reports.push_back(std::move(report));
    }
    run.summary = summarize_folds(run.reports);
    write_text(out / "summary.json", summary_to_json(run.summary));
    log << "mean accuracy " << run.summary.mean << " +/- " << run.summary.stddev << '\n';
  } else {
    auto report = run_eval(model, split.train, split.eval, request.gallery_seed, request.resample_gallery);
    write_report(report, out / "report.json", out / "report.csv", echo);
    log << "accuracy " << report.overall_accuracy << " on " << report.sample_count << " samples\n";
    run.reports.push_back(std::move(report));
    run.summary = summarize_folds(run.reports);
  }
  return run;
}

std::string grid_csv_header() { return "dataset,fraction,overall_acc,per_class_json\n"; }

std::string grid_csv_row(const GridRow& row) {
  ordered_json per_class = ordered_json::object();
  for (std::size_t i = 0; i < row.classes.size(); ++i) {
    if (std::isnan(row.per_class_accuracy[i])) {
      per_class[row.classes[i]] = nullptr;
    } else {
      per_class[row.classes[i]] = row.per_class_accuracy[i];
    }
  }
  std::string quoted = "\"";
  for (char ch : per_class.dump()) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  char num[96];
  std::snprintf(num, sizeof(num), "%.17g,%.17g", row.fraction, row.overall_accuracy);
  return row.dataset + "," + num + "," + quoted + "\n";
}

std::vector<GridRow> cmd_grid(const ExperimentConfig& config, std::ostream& log,
                              const TrainOptions& options) {
  validate(config);
  const fs::path out(config.output_dir);
  fs::create_directories(out);
  write_text(out / "config.json", config_to_json(config));
  const auto dataset = load_dataset(config.dataset);
  const auto split = make_split(dataset, config.split);
  const auto name = dataset_name(config.dataset);

  // Each (train, eval) condition; the eval side never changes across legs.
  std::vector<std::pair<DatasetManifest, DatasetManifest>> conditions;
  if (config.split.mode == SplitMode::kKFold) {
    for (std::size_t f = 0; f < split.folds.size(); ++f) conditions.push_back(fold_train_eval(split.folds, f));
  } else {
    conditions.emplace_back(split.train, split.eval);
  }

  const auto csv_path = out / "grid.csv";
  write_text(csv_path, grid_csv_header());
  std::vector<GridRow> rows;
  for (double fraction : kGridFractions) {
    GridRow row;
    row.dataset = name;
    row.fraction = fraction;
    row.classes = dataset.classes();
    row.per_class_accuracy.assign(dataset.class_count(), 0.0);
    std::vector<EvalReport> reports;
    for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
      ExperimentConfig leg = config;
      leg.train.train_fraction = fraction;
      const auto& [train_split, eval_split] = conditions[ci];
      DatasetManifest train_set =
          config.augment ? augment_manifest(train_split, out / "augmented" / std::to_string(ci), options.loader)
                         : train_split;
      log << "grid leg fraction=" << fraction << " condition " << ci + 1 << "/" << conditions.size() << '\n';
      auto result = train(leg.train, train_set, options);
      row.train_samples += result.train_manifest.size();
      const EmbeddingModel model(options.backbone, result.params);
      auto report = config.resample_gallery
                        ? evaluate_resampled(model, result.train_manifest, eval_split, config.gallery_seed,
                                             options.loader)
                        : evaluate(build_gallery(model, result.train_manifest, config.gallery_seed,
                                                 options.loader),
                                   model, eval_split, options.loader);
      char leg_dir[48];
      std::snprintf(leg_dir, sizeof(leg_dir), "grid/frac_%03d/cond_%02zu",
                    static_cast<int>(std::lround(fraction * 100)), ci + 1);
      save_checkpoint(result.params, out / leg_dir / "final.ckpt");
      write_loss_csv(result.losses, out / leg_dir / "loss.csv");
      write_report(report, out / leg_dir / "report.json", out / leg_dir / "report.csv", config_to_json(leg));
      reports.push_back(std::move(report));
    }
    const auto summary = summarize_folds(reports);
    row.overall_accuracy = summary.mean;
    for (std::size_t c = 0; c < row.classes.size(); ++c) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& r : reports) {
        if (!std::isnan(r.per_class_accuracy[c])) {
          sum += r.per_class_accuracy[c];
          ++n;
        }
      }
      row.per_class_accuracy[c] = n > 0 ? sum / static_cast<double>(n) : std::nan("");
    }
    std::ofstream csv(csv_path, std::ios::app | std::ios::binary);
    csv << grid_csv_row(row);
    log << "fraction " << fraction << ": accuracy " << row.overall_accuracy << '\n';
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace leafsiam
