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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "leafsiam/manifest.hpp"

namespace leafsiam {

inline constexpr int kSimilar = 0;
inline constexpr int kDissimilar = 1;

// Indices into the manifest the pair was drawn from. label is 0 when both
// samples share a class, 1 otherwise.
struct LabeledPair {
  std::size_t first = 0;
  std::size_t second = 0;
  int label = kSimilar;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

// round(count * similar_ratio) similar pairs, the rest dissimilar, returned
// in shuffled order. Similar pairs pick a class uniformly, then two distinct
// samples of it; dissimilar pairs pick an ordered pair of distinct classes
// uniformly, then one sample from each.
std::vector<LabeledPair> sample_pairs(const DatasetManifest& manifest, std::size_t count,
                                      double similar_ratio, std::uint64_t seed);

// Audit dump: header `path1,path2,Y`.
void write_pairs_csv(const DatasetManifest& manifest, const std::vector<LabeledPair>& pairs,
                     const std::filesystem::path& path);

}  // namespace leafsiam
