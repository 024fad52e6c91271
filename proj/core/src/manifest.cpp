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

#include "leafsiam/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "leafsiam/error.hpp"
#include "leafsiam/hash.hpp"
#include "leafsiam/image.hpp"

namespace leafsiam {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Origin origin) {
  return origin == Origin::kOriginal ? "original" : "augmented";
}

Origin origin_from_string(std::string_view text) {
  if (text == "original") return Origin::kOriginal;
  if (text == "augmented") return Origin::kAugmented;
  throw Error(ErrorKind::kValidation, "unknown sample origin '" + std::string(text) + "'");
}

DatasetManifest::DatasetManifest(std::vector<std::string> classes, std::vector<Sample> samples,
                                 std::optional<std::uint64_t> seed)
    : classes_(std::move(classes)), samples_(std::move(samples)), seed_(seed) {
  std::set<std::string> seen;
  for (const auto& name : classes_) {
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::kValidation, "duplicate class name '" + name + "'");
    }
  }
  counts_.assign(classes_.size(), 0);
  for (const auto& s : samples_) {
    if (s.class_index < 0 || static_cast<std::size_t>(s.class_index) >= classes_.size()) {
      throw Error(ErrorKind::kValidation,
                  "sample " + s.path + " has class index " + std::to_string(s.class_index) +
                      " outside [0, " + std::to_string(classes_.size()) + ")");
    }
    ++counts_[static_cast<std::size_t>(s.class_index)];
  }
}

bool DatasetManifest::has_augmented() const noexcept {
  return std::any_of(samples_.begin(), samples_.end(),
                     [](const Sample& s) { return s.origin == Origin::kAugmented; });
}

std::vector<std::size_t> DatasetManifest::indices_of_class(int class_index) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].class_index == class_index) out.push_back(i);
  }
  return out;
}

DatasetManifest DatasetManifest::subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(samples_.at(i));
  return DatasetManifest(classes_, std::move(picked), seed_);
}

std::uint64_t DatasetManifest::fingerprint() const {
  Fnv1a h;
  h.update(manifest_to_json(*this));
  return h.digest();
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  ordered_json doc;
  doc["classes"] = manifest.classes();
  ordered_json samples = ordered_json::array();
  for (const auto& s : manifest.samples()) {
    ordered_json entry;
    entry["path"] = s.path;
    entry["class"] = s.class_index;
    entry["origin"] = std::string(to_string(s.origin));
    samples.push_back(std::move(entry));
  }
  doc["samples"] = std::move(samples);
  if (manifest.seed()) {
    doc["seed"] = *manifest.seed();
  } else {
    doc["seed"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

DatasetManifest manifest_from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("manifest is not valid JSON: ") + e.what());
  }
  for (const char* key : {"classes", "samples"}) {
    if (!doc.contains(key)) {
      throw Error(ErrorKind::kValidation, std::string("manifest is missing field '") + key + "'");
    }
  }
  try {
    auto classes = doc.at("classes").get<std::vector<std::string>>();
    std::vector<Sample> samples;
    for (const auto& entry : doc.at("samples")) {
      Sample s;
      s.path = entry.at("path").get<std::string>();
      s.class_index = entry.at("class").get<int>();
      s.origin = entry.contains("origin")
                     ? origin_from_string(entry.at("origin").get<std::string>())
                     : Origin::kOriginal;
      samples.push_back(std::move(s));
    }
    std::optional<std::uint64_t> seed;
    if (doc.contains("seed") && !doc.at("seed").is_null()) seed = doc.at("seed").get<std::uint64_t>();
    return DatasetManifest(std::move(classes), std::move(samples), seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("malformed manifest: ") + e.what());
  }
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << manifest_to_json(manifest);
  if (!out) throw Error(ErrorKind::kIo, "cannot write manifest " + path.string());
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_json(buffer.str());
}

namespace {

bool is_hidden(const fs::path& p) {
  const auto name = p.filename().string();
  return !name.empty() && name.front() == '.';
}

}  // namespace

ImageLoader file_image_loader() {
  return [](const Sample& s) { return load_image(s.path); };
}

ScanResult scan_folder(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorKind::kIngestion, "dataset root " + root.string() + " is not a directory");
  }
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && !is_hidden(entry.path())) class_dirs.push_back(entry.path());
  }
  if (class_dirs.empty()) {
    throw Error(ErrorKind::kIngestion, "no classes found in " + root.string());
  }
  std::sort(class_dirs.begin(), class_dirs.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  ScanResult result;
  std::vector<std::string> classes;
  std::vector<Sample> samples;
  for (std::size_t ci = 0; ci < class_dirs.size(); ++ci) {
    const auto& dir = class_dirs[ci];
    classes.push_back(dir.filename().string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && !is_hidden(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::size_t accepted = 0;
    for (const auto& file : files) {
      const auto abs = fs::absolute(file).lexically_normal().generic_string();
      try {
        decode_image(read_file_bytes(file), abs);
      } catch (const Error&) {
        result.skipped.push_back(abs);
        continue;
      }
      samples.push_back({abs, static_cast<int>(ci), Origin::kOriginal});
      ++accepted;
    }
    if (accepted == 0) {
      throw Error(ErrorKind::kIngestion, "class directory " + dir.string() + " has no images");
    }
  }
  result.manifest = DatasetManifest(std::move(classes), std::move(samples));
  return result;
}

}  // namespace leafsiam
