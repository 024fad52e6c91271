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

#include "leafsiam/pairs.hpp"

#include <cmath>
#include <fstream>

#include "leafsiam/error.hpp"
#include "leafsiam/random.hpp"

namespace leafsiam {

std::vector<LabeledPair> sample_pairs(const DatasetManifest& manifest, std::size_t count,
                                      double similar_ratio, std::uint64_t seed) {
  if (!(similar_ratio >= 0.0 && similar_ratio <= 1.0)) {
    throw Error(ErrorKind::kSampling, "similar ratio must lie in [0, 1]");
  }
  const auto n_similar =
      static_cast<std::size_t>(std::llround(static_cast<double>(count) * similar_ratio));
  const std::size_t n_dissimilar = count - n_similar;

  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> with_pairs;  // classes with >= 2 samples
  std::vector<std::size_t> non_empty;
  for (std::size_t c = 0; c < manifest.class_count(); ++c) {
    members.push_back(manifest.indices_of_class(static_cast<int>(c)));
    if (members.back().size() >= 2) with_pairs.push_back(c);
    if (!members.back().empty()) non_empty.push_back(c);
  }
  if (n_similar > 0 && with_pairs.empty()) {
    throw Error(ErrorKind::kSampling, "similar pairs requested but no class has two samples");
  }
  if (n_dissimilar > 0 && non_empty.size() < 2) {
    throw Error(ErrorKind::kSampling,
                "dissimilar pairs requested but fewer than two classes have samples");
  }

  Rng rng(seed);
  std::vector<LabeledPair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < n_similar; ++i) {
    const auto& m = members[with_pairs[rng.uniform_index(with_pairs.size())]];
    const auto a = rng.uniform_index(m.size());
    auto b = rng.uniform_index(m.size() - 1);
    if (b >= a) ++b;
    pairs.push_back({m[a], m[b], kSimilar});
  }
  for (std::size_t i = 0; i < n_dissimilar; ++i) {
    const auto ca = rng.uniform_index(non_empty.size());
    auto cb = rng.uniform_index(non_empty.size() - 1);
    if (cb >= ca) ++cb;
    const auto& ma = members[non_empty[ca]];
    const auto& mb = members[non_empty[cb]];
    pairs.push_back({ma[rng.uniform_index(ma.size())], mb[rng.uniform_index(mb.size())],
                     kDissimilar});
  }
  rng.shuffle(std::span(pairs));
  return pairs;
}

void write_pairs_csv(const DatasetManifest& manifest, const std::vector<LabeledPair>& pairs,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "path1,path2,Y\n";
  for (const auto& p : pairs) {
    out << manifest.samples().at(p.first).path << ',' << manifest.samples().at(p.second).path
        << ',' << p.label << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

}  // namespace leafsiam
