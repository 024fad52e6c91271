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

#include "leafsiam/voting.hpp"

#include <algorithm>

#include "leafsiam/error.hpp"

namespace leafsiam {

Prediction majority_vote(const DistanceMatrix& distances) {
  const std::size_t n = distances.size();
  if (n == 0) throw Error(ErrorKind::kGallery, "cannot vote over an empty gallery");
  Prediction p;
  p.votes.assign(n, 0);
  p.average_distance.assign(n, 0.0);
  for (int j = 0; j < kSupportPerClass; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (distances[i][j] < distances[best][j]) best = i;
    }
    p.column_winners[j] = static_cast<int>(best);
    ++p.votes[best];
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double d : distances[i]) sum += d;
    p.average_distance[i] = sum / kSupportPerClass;
  }

  const int top = *std::max_element(p.votes.begin(), p.votes.end());
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.votes[i] == top) tied.push_back(i);
  }
  std::size_t winner = tied.front();
  if (tied.size() > 1) {
    p.tie_break_used = true;
    for (std::size_t i : tied) {
      if (p.average_distance[i] < p.average_distance[winner]) winner = i;
    }
    p.exact_tie = std::count_if(tied.begin(), tied.end(), [&](std::size_t i) {
                    return p.average_distance[i] == p.average_distance[winner];
                  }) > 1;
  }
  p.predicted_class = static_cast<int>(winner);
  return p;
}

}  // namespace leafsiam
