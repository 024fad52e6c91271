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
#include <string>
#include <vector>

#include "leafsiam/backbone.hpp"
#include "leafsiam/manifest.hpp"
#include "leafsiam/voting.hpp"

namespace leafsiam {

// Backbone plus frozen parameters; embeds images in eval mode.
class EmbeddingModel {
 public:
  EmbeddingModel(BackboneConfig config, NetworkParams<float> params);

  Embedding embed(const PixelImage& image) const;
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  const Backbone<float>& backbone() const noexcept { return backbone_; }
  const NetworkParams<float>& params() const noexcept { return params_; }

 private:
  Backbone<float> backbone_;
  NetworkParams<float> params_;
  std::uint64_t fingerprint_;
};

struct SupportGallery {
  std::vector<std::string> classes;
  std::vector<std::array<Embedding, kSupportPerClass>> embeddings;
  std::vector<std::array<std::string, kSupportPerClass>> support_paths;
  std::uint64_t seed = 0;
  std::uint64_t params_fingerprint = 0;
};

// Five distinct samples per class, chosen uniformly with `seed` from the
// training manifest, embedded in eval mode. A class with fewer than five
// samples is a gallery error.
SupportGallery build_gallery(const EmbeddingModel& model, const DatasetManifest& train_manifest,
                             std::uint64_t seed, const ImageLoader& loader = file_image_loader());

// The distance matrix of one query embedding against the gallery.
DistanceMatrix gallery_distances(const SupportGallery& gallery, const Embedding& query);

// Throws a configuration error if the gallery was built from other weights.
Prediction classify(const SupportGallery& gallery, const EmbeddingModel& model,
                    const PixelImage& query);

}  // namespace leafsiam
