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

#include "leafsiam/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "json.hpp"
#include "leafsiam/error.hpp"
#include "leafsiam/hash.hpp"
#include "leafsiam/loss.hpp"
#include "leafsiam/random.hpp"

namespace leafsiam {

using ordered_json = nlohmann::ordered_json;

EvalReport report_from_confusion(std::vector<std::string> classes,
                                 std::vector<std::vector<std::size_t>> confusion) {
  EvalReport r;
  r.classes = std::move(classes);
  r.confusion = std::move(confusion);
  const std::size_t n = r.classes.size();
  if (r.confusion.size() != n) throw Error(ErrorKind::kDimension, "confusion matrix is not n x n");
  std::size_t correct = 0, total = 0;
  r.per_class_accuracy.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    if (r.confusion[i].size() != n) throw Error(ErrorKind::kDimension, "confusion matrix is not n x n");
    const std::size_t row = std::accumulate(r.confusion[i].begin(), r.confusion[i].end(), std::size_t{0});
    correct += r.confusion[i][i];
    total += row;
    if (row > 0) r.per_class_accuracy[i] = static_cast<double>(r.confusion[i][i]) / static_cast<double>(row);
  }
  r.sample_count = total;
  r.overall_accuracy = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  return r;
}

namespace {

void check_classes(const std::vector<std::string>& gallery, const DatasetManifest& eval) {
  if (gallery != eval.classes()) {
    throw Error(ErrorKind::kConfiguration,
                "evaluation manifest classes differ from the gallery classes");
  }
}

}  // namespace

EvalReport evaluate(const SupportGallery& gallery, const EmbeddingModel& model,
                    const DatasetManifest& eval_manifest, const ImageLoader& loader) {
  check_classes(gallery.classes, eval_manifest);
  std::unordered_set<std::string> supports;
  for (const auto& row : gallery.support_paths) supports.insert(row.begin(), row.end());
  for (const auto& s : eval_manifest.samples()) {
    if (supports.contains(s.path)) {
      throw Error(ErrorKind::kContamination, "evaluation sample " + s.path + " is a support image");
    }
  }
  const std::size_t n = gallery.classes.size();
  std::vector<std::vector<std::size_t>> confusion(n, std::vector<std::size_t>(n, 0));
  std::size_t ties = 0, exact = 0;
  for (const auto& s : eval_manifest.samples()) {
    const auto p = classify(gallery, model, loader(s));
    ++confusion[s.class_index][p.predicted_class];
    ties += p.tie_break_used;
    exact += p.exact_tie;
  }
  auto r = report_from_confusion(gallery.classes, std::move(confusion));
  r.tie_breaks = ties;
  r.exact_ties = exact;
  r.gallery_seed = gallery.seed;
  r.params_fingerprint = gallery.params_fingerprint;
  r.support_paths = gallery.support_paths;
  return r;
}

EvalReport evaluate_resampled(const EmbeddingModel& model, const DatasetManifest& train_manifest,
                              const DatasetManifest& eval_manifest, std::uint64_t seed,
                              const ImageLoader& loader) {
  check_classes(train_manifest.classes(), eval_manifest);
  std::unordered_set<std::string> pool;
  for (const auto& s : train_manifest.samples()) pool.insert(s.path);
  for (const auto& s : eval_manifest.samples()) {
    if (pool.contains(s.path)) {
      throw Error(ErrorKind::kContamination, "evaluation sample " + s.path + " is in the support pool");
    }
  }
  const std::size_t n = train_manifest.class_count();
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t c = 0; c < n; ++c) {
    members[c] = train_manifest.indices_of_class(static_cast<int>(c));
    if (members[c].size() < static_cast<std::size_t>(kSupportPerClass)) {
      throw Error(ErrorKind::kGallery, "class '" + train_manifest.classes()[c] +
                                           "' has fewer than five training samples");
    }
  }
  std::vector<std::optional<Embedding>> cache(train_manifest.size());
  auto embedding_of = [&](std::size_t idx) -> const Embedding& {
    if (!cache[idx]) cache[idx] = model.embed(loader(train_manifest.samples()[idx]));
    return *cache[idx];
  };

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> confusion(n, std::vector<std::size_t>(n, 0));
  std::size_t ties = 0, exact = 0;
  for (const auto& s : eval_manifest.samples()) {
    const auto query = model.embed(loader(s));
    DistanceMatrix d(n);
    for (std::size_t c = 0; c < n; ++c) {
      auto m = members[c];
      rng.shuffle(std::span(m));
      for (int j = 0; j < kSupportPerClass; ++j) d[c][j] = euclidean_distance(query, embedding_of(m[j]));
    }
    const auto p = majority_vote(d);
    ++confusion[s.class_index][p.predicted_class];
    ties += p.tie_break_used;
    exact += p.exact_tie;
  }
  auto r = report_from_confusion(train_manifest.classes(), std::move(confusion));
  r.tie_breaks = ties;
  r.exact_ties = exact;
  r.gallery_seed = seed;
  r.params_fingerprint = model.fingerprint();
  r.gallery_resampled = true;
  return r;
}

FoldSummary summarize_folds(const std::vector<EvalReport>& reports) {
  FoldSummary s;
  for (const auto& r : reports) s.accuracies.push_back(r.overall_accuracy);
  if (s.accuracies.empty()) return s;
  s.mean = std::accumulate(s.accuracies.begin(), s.accuracies.end(), 0.0) /
           static_cast<double>(s.accuracies.size());
  if (s.accuracies.size() > 1) {
    double ss = 0.0;
    for (double a : s.accuracies) ss += (a - s.mean) * (a - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.accuracies.size() - 1));
  }
  return s;
}

std::string report_to_json(const EvalReport& r, const std::string& config_echo_json) {
  ordered_json doc;
  doc["overall_accuracy"] = r.overall_accuracy;
  doc["sample_count"] = r.sample_count;
  ordered_json per_class = ordered_json::array();
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const std::size_t total =
        std::accumulate(r.confusion[i].begin(), r.confusion[i].end(), std::size_t{0});
    ordered_json row;
    row["class"] = r.classes[i];
    if (std::isnan(r.per_class_accuracy[i])) {
      row["accuracy"] = nullptr;
    } else {
      row["accuracy"] = r.per_class_accuracy[i];
    }
    row["correct"] = r.confusion[i][i];
    row["total"] = total;
    per_class.push_back(std::move(row));
  }
  doc["per_class"] = std::move(per_class);
  doc["classes"] = r.classes;
  doc["confusion"] = r.confusion;
  doc["tie_breaks"] = r.tie_breaks;
  doc["exact_ties"] = r.exact_ties;
  ordered_json gallery;
  gallery["seed"] = r.gallery_seed;
  gallery["params_fingerprint"] = to_hex(r.params_fingerprint);
  gallery["resampled_per_query"] = r.gallery_resampled;
  ordered_json supports = ordered_json::array();
  for (const auto& row : r.support_paths) supports.push_back(row);
  gallery["support_paths"] = std::move(supports);
  doc["gallery"] = std::move(gallery);
  doc["config"] = ordered_json::parse(config_echo_json);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& r) {
  std::string out = "class,accuracy,correct,total\n";
  char buf[64];
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const std::size_t total =
        std::accumulate(r.confusion[i].begin(), r.confusion[i].end(), std::size_t{0});
    if (std::isnan(r.per_class_accuracy[i])) {
      buf[0] = '\0';
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", r.per_class_accuracy[i]);
    }
    out += r.classes[i] + "," + buf + "," + std::to_string(r.confusion[i][i]) + "," +
           std::to_string(total) + "\n";
  }
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path, const std::string& config_echo_json) {
  for (const auto& [path, text] : {std::pair{json_path, report_to_json(report, config_echo_json)},
                                   std::pair{csv_path, report_to_csv(report)}}) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  }
}

std::string summary_to_json(const FoldSummary& s) {
  ordered_json doc;
  doc["folds"] = s.accuracies.size();
  doc["accuracies"] = s.accuracies;
  doc["mean"] = s.mean;
  doc["stddev"] = s.stddev;
  return doc.dump(2) + "\n";
}

}  // namespace leafsiam
