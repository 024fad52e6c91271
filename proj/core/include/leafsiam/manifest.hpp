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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leafsiam/image.hpp"

namespace leafsiam {

enum class Origin { kOriginal, kAugmented };

std::string_view to_string(Origin origin);
Origin origin_from_string(std::string_view text);

struct Sample {
  std::string path;
  int class_index = 0;
  Origin origin = Origin::kOriginal;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Immutable listing of labelled image samples. Construction validates that
// class names are unique and every class index is in range; per-class counts
// are derived.
class DatasetManifest {
 public:
  DatasetManifest() = default;
  DatasetManifest(std::vector<std::string> classes, std::vector<Sample> samples,
                  std::optional<std::uint64_t> seed = std::nullopt);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t class_count() const noexcept { return classes_.size(); }
  bool has_augmented() const noexcept;

  // Sample indices belonging to `class_index`, in manifest order.
  std::vector<std::size_t> indices_of_class(int class_index) const;

  // Same class list, only the listed samples (in the given order).
  DatasetManifest subset(std::span<const std::size_t> indices) const;

  // FNV-1a of the canonical JSON serialization.
  std::uint64_t fingerprint() const;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;

 private:
  std::vector<std::string> classes_;
  std::vector<Sample> samples_;
  std::vector<std::size_t> counts_;
  std::optional<std::uint64_t> seed_;
};

// Canonical JSON: keys `classes`, `samples` ({path, class, origin}), `seed`,
// in that order, two-space indentation, trailing newline.
std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(std::string_view text);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct ScanResult {
  DatasetManifest manifest;
  std::vector<std::string> skipped;  // files that failed to decode
};

// Maps a manifest sample to its pixels. The default reads and decodes the
// file at `path`; tests and tools may substitute in-memory sources.
using ImageLoader = std::function<PixelImage(const Sample&)>;

ImageLoader file_image_loader();

// One subdirectory per class, classes ordered lexicographically by directory
// name, files ordered by name. Every regular non-hidden file is decoded; the
// ones that fail are skipped and reported.
ScanResult scan_folder(const std::filesystem::path& root);

}  // namespace leafsiam
