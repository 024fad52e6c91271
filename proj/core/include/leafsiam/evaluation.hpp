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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "leafsiam/gallery.hpp"
#include "leafsiam/manifest.hpp"

namespace leafsiam {

struct EvalReport {
  std::vector<std::string> classes;
  double overall_accuracy = 0.0;
  // Per-class recall; NaN for a class with no evaluation samples.
  std::vector<double> per_class_accuracy;
  // confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t sample_count = 0;
  std::size_t tie_breaks = 0;
  std::size_t exact_ties = 0;
  std::uint64_t gallery_seed = 0;
  std::uint64_t params_fingerprint = 0;
  bool gallery_resampled = false;
  std::vector<std::array<std::string, kSupportPerClass>> support_paths;
};

// Fills the accuracy fields from a confusion matrix.
EvalReport report_from_confusion(std::vector<std::string> classes,
                                 std::vector<std::vector<std::size_t>> confusion);

// Classifies every sample of `eval_manifest` against a fixed gallery. Fails
// with a contamination error if an evaluation path is a support image.
EvalReport evaluate(const SupportGallery& gallery, const EmbeddingModel& model,
                    const DatasetManifest& eval_manifest,
                    const ImageLoader& loader = file_image_loader());

// Same, but draws a fresh gallery from `train_manifest` for every query (seed
// derived from `seed` and the query position). Training embeddings are
// computed once and reused.
EvalReport evaluate_resampled(const EmbeddingModel& model, const DatasetManifest& train_manifest,
                              const DatasetManifest& eval_manifest, std::uint64_t seed,
                              const ImageLoader& loader = file_image_loader());

struct FoldSummary {
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single fold
};

FoldSummary summarize_folds(const std::vector<EvalReport>& reports);

// JSON report: accuracy, per-class table, confusion matrix, gallery
// provenance and `config_echo_json` (any JSON text) under "config".
std::string report_to_json(const EvalReport& report, const std::string& config_echo_json = "{}");

// Flat per-class form: class,accuracy,correct,total.
std::string report_to_csv(const EvalReport& report);

void write_report(const EvalReport& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path,
                  const std::string& config_echo_json = "{}");

std::string summary_to_json(const FoldSummary& summary);

}  // namespace leafsiam
