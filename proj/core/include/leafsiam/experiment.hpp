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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "leafsiam/evaluation.hpp"
#include "leafsiam/manifest.hpp"
#include "leafsiam/split.hpp"
#include "leafsiam/trainer.hpp"

namespace leafsiam {

// Everything needed to reproduce a train/eval run.
struct ExperimentConfig {
  std::string dataset;  // manifest JSON or image folder
  SplitSpec split{SplitMode::kFraction, 0.8, 10, "", 0};
  bool augment = false;  // materialize the 7 augmentations of the training split
  TrainConfig train;
  std::uint64_t gallery_seed = 0;
  bool resample_gallery = false;
  std::string output_dir = "out";
};

inline constexpr std::array<double, 3> kGridFractions = {1.0, 0.75, 0.5};

std::string config_to_json(const ExperimentConfig& config);

// Every missing field is listed in the validation error. `resample_gallery`
// and `train.similar_ratio` are optional.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Checks field ranges and that referenced paths exist.
void validate(const ExperimentConfig& config);

// Image folder -> scan; anything else is read as a manifest file.
DatasetManifest load_dataset(const std::filesystem::path& path);

ScanResult cmd_prepare(const std::filesystem::path& root, const std::filesystem::path& out_manifest,
                       std::ostream& log);

DatasetManifest cmd_synth(const std::vector<int>& per_class_counts, std::uint64_t seed,
                          const std::filesystem::path& out_dir, std::ostream& log);

// Originals keep their paths; each is followed by its seven variants written
// to out_dir/images/<class>/. Refuses empty or already augmented manifests.
DatasetManifest augment_manifest(const DatasetManifest& manifest,
                                 const std::filesystem::path& out_dir,
                                 const ImageLoader& loader = file_image_loader());

DatasetManifest cmd_augment(const std::filesystem::path& manifest_path,
                            const std::filesystem::path& out_dir, std::ostream& log);

struct TrainRun {
  std::filesystem::path checkpoint;  // final checkpoint
  std::filesystem::path loss_csv;
  TrainResult result;
};

// Writes <out>/config.json, train_manifest.json, checkpoints/epoch_NN.ckpt
// (+ .json sidecars flagged partial), final.ckpt (+ sidecar) and loss.csv.
TrainRun cmd_train(const ExperimentConfig& config, std::ostream& log,
                   const TrainOptions& options = {});

struct EvalRequest {
  std::string checkpoint;
  std::string dataset;
  SplitSpec split;
  std::uint64_t gallery_seed = 0;
  bool resample_gallery = false;
  std::string output_dir = "out";
};

struct EvalRun {
  std::vector<EvalReport> reports;  // one, or one per fold
  FoldSummary summary;
};

// Fraction/dedicated: <out>/report.json + report.csv. K-fold: one report per
// fold under <out>/fold_NN/ and <out>/summary.json.
EvalRun cmd_eval(const EvalRequest& request, std::ostream& log);

struct GridRow {
  std::string dataset;
  double fraction = 1.0;
  double overall_accuracy = 0.0;
  std::vector<std::string> classes;
  std::vector<double> per_class_accuracy;
  std::size_t train_samples = 0;
};

// Trains and evaluates once per fraction in kGridFractions against a fixed
// evaluation set; <out>/grid.csv gains one row after each finished leg.
std::vector<GridRow> cmd_grid(const ExperimentConfig& config, std::ostream& log,
                              const TrainOptions& options = {});

std::string grid_csv_header();
std::string grid_csv_row(const GridRow& row);

}  // namespace leafsiam
