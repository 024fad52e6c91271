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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "leafsiam/manifest.hpp"

namespace leafsiam {

enum class SplitMode { kFraction, kKFold, kDedicatedTest };

std::string_view to_string(SplitMode mode);
SplitMode split_mode_from_string(std::string_view text);

struct SplitSpec {
  SplitMode mode = SplitMode::kFraction;
  double train_fraction = 1.0;  // kFraction
  int k = 10;                   // kKFold
  std::string test_manifest;    // kDedicatedTest
  std::uint64_t seed = 0;
};

// Throws a validation error for an out-of-range fraction, k < 2, or an empty
// test manifest path.
void validate(const SplitSpec& spec);

struct SplitResult {
  DatasetManifest train;
  DatasetManifest eval;                // empty in k-fold mode
  std::vector<DatasetManifest> folds;  // only in k-fold mode
};

// Per class, round(fraction * count) samples go to train; the rest to eval.
// Members keep manifest order. Fails if a class would get no training sample.
std::pair<DatasetManifest, DatasetManifest> stratified_fraction(const DatasetManifest& manifest,
                                                                double fraction,
                                                                std::uint64_t seed);

// Per class, shuffled samples are dealt round-robin into k folds with a
// rotating start so both per-class and overall fold sizes differ by <= 1.
std::vector<DatasetManifest> stratified_kfold(const DatasetManifest& manifest, int k,
                                              std::uint64_t seed);

// Train = every fold except `held_out`; eval = folds[held_out].
std::pair<DatasetManifest, DatasetManifest> fold_train_eval(
    const std::vector<DatasetManifest>& folds, std::size_t held_out);

SplitResult make_split(const DatasetManifest& manifest, const SplitSpec& spec);

}  // namespace leafsiam
