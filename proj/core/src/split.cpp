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

#include "leafsiam/split.hpp"

#include <algorithm>
#include <cmath>

#include "leafsiam/error.hpp"
#include "leafsiam/random.hpp"

namespace leafsiam {

std::string_view to_string(SplitMode mode) {
  switch (mode) {
    case SplitMode::kFraction: return "fraction";
    case SplitMode::kKFold: return "kfold";
    case SplitMode::kDedicatedTest: return "dedicated";
  }
  return "fraction";
}

SplitMode split_mode_from_string(std::string_view text) {
  if (text == "fraction") return SplitMode::kFraction;
  if (text == "kfold" || text == "k-fold") return SplitMode::kKFold;
  if (text == "dedicated" || text == "dedicated-test") return SplitMode::kDedicatedTest;
  throw Error(ErrorKind::kValidation, "unknown split mode '" + std::string(text) + "'");
}

void validate(const SplitSpec& spec) {
  switch (spec.mode) {
    case SplitMode::kFraction:
      if (!(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0)) {
        throw Error(ErrorKind::kValidation, "train fraction must lie in (0, 1]");
      }
      break;
    case SplitMode::kKFold:
      if (spec.k < 2) throw Error(ErrorKind::kValidation, "k-fold split needs k >= 2");
      break;
    case SplitMode::kDedicatedTest:
      if (spec.test_manifest.empty()) {
        throw Error(ErrorKind::kValidation, "dedicated-test split needs a test manifest path");
      }
      break;
  }
}

std::pair<DatasetManifest, DatasetManifest> stratified_fraction(const DatasetManifest& manifest,
                                                                double fraction,
                                                                std::uint64_t seed) {
  if (manifest.empty()) throw Error(ErrorKind::kSplit, "cannot split an empty manifest");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::kSplit, "train fraction must lie in (0, 1]");
  }
  Rng rng(seed);
  std::vector<std::size_t> train, eval;
  for (std::size_t c = 0; c < manifest.class_count(); ++c) {
    auto members = manifest.indices_of_class(static_cast<int>(c));
    if (members.empty()) continue;
    const auto n_train = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    if (n_train == 0) {
      throw Error(ErrorKind::kSplit, "train fraction leaves class '" + manifest.classes()[c] +
                                         "' without training samples");
    }
    rng.shuffle(std::span(members));
    train.insert(train.end(), members.begin(), members.begin() + n_train);
    eval.insert(eval.end(), members.begin() + n_train, members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(eval.begin(), eval.end());
  return {manifest.subset(train), manifest.subset(eval)};
}

std::vector<DatasetManifest> stratified_kfold(const DatasetManifest& manifest, int k,
                                              std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::kSplit, "k-fold split needs k >= 2");
  if (manifest.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::kSplit, "fewer samples than folds");
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> members_of_fold(static_cast<std::size_t>(k));
  std::size_t offset = 0;
  for (std::size_t c = 0; c < manifest.class_count(); ++c) {
    auto members = manifest.indices_of_class(static_cast<int>(c));
    rng.shuffle(std::span(members));
    for (std::size_t i = 0; i < members.size(); ++i) {
      members_of_fold[(offset + i) % static_cast<std::size_t>(k)].push_back(members[i]);
    }
    offset = (offset + members.size()) % static_cast<std::size_t>(k);
  }
  std::vector<DatasetManifest> folds;
  for (auto& m : members_of_fold) {
    std::sort(m.begin(), m.end());
    folds.push_back(manifest.subset(m));
  }
  return folds;
}

std::pair<DatasetManifest, DatasetManifest> fold_train_eval(
    const std::vector<DatasetManifest>& folds, std::size_t held_out) {
  if (held_out >= folds.size()) throw Error(ErrorKind::kSplit, "fold index out of range");
  std::vector<Sample> train;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f == held_out) continue;
    train.insert(train.end(), folds[f].samples().begin(), folds[f].samples().end());
  }
  const auto& ref = folds[held_out];
  return {DatasetManifest(ref.classes(), std::move(train), ref.seed()), ref};
}

SplitResult make_split(const DatasetManifest& manifest, const SplitSpec& spec) {
  if (manifest.empty()) throw Error(ErrorKind::kSplit, "cannot split an empty manifest");
  validate(spec);
  SplitResult result;
  switch (spec.mode) {
    case SplitMode::kFraction: {
      auto [train, eval] = stratified_fraction(manifest, spec.train_fraction, spec.seed);
      result.train = std::move(train);
      result.eval = std::move(eval);
      break;
    }
    case SplitMode::kKFold:
      result.folds = stratified_kfold(manifest, spec.k, spec.seed);
      result.train = manifest;
      result.eval = manifest.subset({});
      break;
    case SplitMode::kDedicatedTest: {
      auto test = load_manifest(spec.test_manifest);
      if (test.classes() != manifest.classes()) {
        throw Error(ErrorKind::kSplit, "test manifest " + spec.test_manifest +
                                           " has a different class list than the training data");
      }
      result.train = manifest;
      result.eval = std::move(test);
      break;
    }
  }
  return result;
}

}  // namespace leafsiam
