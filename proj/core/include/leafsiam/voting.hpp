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
#include <vector>

namespace leafsiam {

inline constexpr int kSupportPerClass = 5;

// distances[i][j]: query to the j-th support image of class i.
using DistanceMatrix = std::vector<std::array<double, kSupportPerClass>>;

struct Prediction {
  int predicted_class = 0;
  std::array<int, kSupportPerClass> column_winners{};
  std::vector<int> votes;                 // per class, sums to 5
  std::vector<double> average_distance;   // per class, mean over its 5 supports
  bool tie_break_used = false;            // vote count was shared
  bool exact_tie = false;                 // ... and so was the average distance
};

// For each support column the class with the smallest distance gets a vote
// (lowest index on equal distances). The most-voted class wins; a shared
// maximum is resolved by the smaller average distance, then by the lower
// class index.
Prediction majority_vote(const DistanceMatrix& distances);

}  // namespace leafsiam
