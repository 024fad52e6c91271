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

#include "leafsiam/gallery.hpp"

#include "leafsiam/error.hpp"
#include "leafsiam/loss.hpp"
#include "leafsiam/random.hpp"

namespace leafsiam {

EmbeddingModel::EmbeddingModel(BackboneConfig config, NetworkParams<float> params)
    : backbone_(std::move(config)), params_(std::move(params)),
      fingerprint_(params_fingerprint(params_)) {
  backbone_.check_params(params_);
}

Embedding EmbeddingModel::embed(const PixelImage& image) const {
  return backbone_.forward(params_, to_feature_map<float>(image), Mode::kEval);
}

SupportGallery build_gallery(const EmbeddingModel& model, const DatasetManifest& train_manifest,
                             std::uint64_t seed, const ImageLoader& loader) {
  SupportGallery g;
  g.classes = train_manifest.classes();
  g.seed = seed;
  g.params_fingerprint = model.fingerprint();
  Rng rng(seed);
  for (std::size_t c = 0; c < train_manifest.class_count(); ++c) {
    auto members = train_manifest.indices_of_class(static_cast<int>(c));
    if (members.size() < static_cast<std::size_t>(kSupportPerClass)) {
      throw Error(ErrorKind::kGallery, "class '" + g.classes[c] + "' has " +
                                           std::to_string(members.size()) +
                                           " training samples, the gallery needs " +
                                           std::to_string(kSupportPerClass));
    }
    rng.shuffle(std::span(members));
    std::array<Embedding, kSupportPerClass> row;
    std::array<std::string, kSupportPerClass> paths;
    for (int j = 0; j < kSupportPerClass; ++j) {
      const auto& sample = train_manifest.samples()[members[j]];
      row[j] = model.embed(loader(sample));
      paths[j] = sample.path;
    }
    g.embeddings.push_back(std::move(row));
    g.support_paths.push_back(std::move(paths));
  }
  return g;
}

DistanceMatrix gallery_distances(const SupportGallery& gallery, const Embedding& query) {
  DistanceMatrix d(gallery.embeddings.size());
  for (std::size_t i = 0; i < gallery.embeddings.size(); ++i) {
    for (int j = 0; j < kSupportPerClass; ++j) {
      d[i][j] = euclidean_distance(query, gallery.embeddings[i][j]);
    }
  }
  return d;
}

Prediction classify(const SupportGallery& gallery, const EmbeddingModel& model,
                    const PixelImage& query) {
  if (gallery.params_fingerprint != model.fingerprint()) {
    throw Error(ErrorKind::kConfiguration,
                "gallery was built with parameters " + std::to_string(gallery.params_fingerprint) +
                    " but the model has " + std::to_string(model.fingerprint()));
  }
  return majority_vote(gallery_distances(gallery, model.embed(query)));
}

}  // namespace leafsiam
