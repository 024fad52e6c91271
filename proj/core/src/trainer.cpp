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

#include "leafsiam/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "leafsiam/error.hpp"
#include "leafsiam/loss.hpp"
#include "leafsiam/optimizer.hpp"
#include "leafsiam/pairs.hpp"
#include "leafsiam/random.hpp"
#include "leafsiam/split.hpp"

namespace leafsiam {

void validate(const TrainConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kValidation, what); };
  if (c.epochs < 1) fail("train.epochs must be >= 1");
  if (c.batch_size < 1) fail("train.batch_size must be >= 1");
  if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate)) {
    fail("train.learning_rate must be a finite non-negative number");
  }
  if (!(c.weight_decay >= 0.0)) fail("train.weight_decay must be >= 0");
  if (!(c.margin > 0.0)) fail("train.margin must be > 0");
  if (!(c.train_fraction > 0.0 && c.train_fraction <= 1.0)) fail("train.train_fraction must lie in (0, 1]");
  if (!(c.similar_ratio >= 0.0 && c.similar_ratio <= 1.0)) fail("train.similar_ratio must lie in [0, 1]");
}

namespace {

class ImageCache {
 public:
  ImageCache(const DatasetManifest& manifest, const ImageLoader& loader, std::size_t budget)
      : manifest_(manifest), loader_(loader), budget_(budget) {}

  FeatureMap<float> get(std::size_t index) {
    if (auto it = cache_.find(index); it != cache_.end()) return it->second;
    auto map = to_feature_map<float>(loader_(manifest_.samples().at(index)));
    const std::size_t bytes = map.size() * sizeof(float);
    if (used_ + bytes <= budget_) {
      used_ += bytes;
      cache_.emplace(index, map);
    }
    return map;
  }

 private:
  const DatasetManifest& manifest_;
  const ImageLoader& loader_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::unordered_map<std::size_t, FeatureMap<float>> cache_;
};

std::string describe_batch(const DatasetManifest& m, const std::vector<LabeledPair>& pairs,
                           std::size_t begin, std::size_t end) {
  std::ostringstream os;
  for (std::size_t i = begin; i < end; ++i) {
    os << "\n  (" << m.samples()[pairs[i].first].path << ", " << m.samples()[pairs[i].second].path
       << ", Y=" << pairs[i].label << ")";
  }
  return os.str();
}

}  // namespace

TrainResult train(const TrainConfig& config, const DatasetManifest& train_manifest,
                  const TrainOptions& options) {
  validate(config);
  if (train_manifest.empty()) throw Error(ErrorKind::kSampling, "training manifest is empty");

  Rng rng(config.seed);
  const Backbone<float> backbone(options.backbone);
  const std::uint64_t init_seed = rng.fork();
  const std::uint64_t subsample_seed = rng.fork();

  TrainResult result;
  result.train_manifest =
      config.train_fraction < 1.0
          ? stratified_fraction(train_manifest, config.train_fraction, subsample_seed).first
          : train_manifest;
  const auto& manifest = result.train_manifest;
  result.params = backbone.init_params(init_seed);

  ImageCache images(manifest, options.loader, options.image_cache_bytes);
  AdamState<float> state;
  const AdamOptions adam{config.learning_rate, config.weight_decay, 0.9, 0.999, 1e-8};
  NetworkParams<float> grads = backbone.zero_params();
  std::size_t step = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto pairs = sample_pairs(manifest, manifest.size(), config.similar_ratio, rng.fork());
    double epoch_sum = 0.0;
    for (std::size_t begin = 0; begin < pairs.size(); begin += config.batch_size) {
      const std::size_t end = std::min(pairs.size(), begin + static_cast<std::size_t>(config.batch_size));
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (auto& t : grads.tensors) std::fill(t.data.begin(), t.data.end(), 0.0f);

      double batch_sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const auto a = images.get(pairs[i].first);
        const auto b = images.get(pairs[i].second);
        const auto seed_a = rng.fork();
        const auto seed_b = rng.fork();
        try {
          batch_sum += siamese_pair_loss<float>(backbone, result.params, a, b, pairs[i].label,
                                                config.margin, Mode::kTrain, seed_a, seed_b,
                                                &grads, scale);
        } catch (const Error& e) {
          // a NaN distance trips the loss contract; report it as divergence
          if (e.kind() != ErrorKind::kContract) throw;
          batch_sum = std::numeric_limits<double>::quiet_NaN();
        }
      }
      const double mean = batch_sum * scale;
      if (!std::isfinite(mean)) {
        throw Error(ErrorKind::kTraining, "non-finite loss at step " + std::to_string(step) +
                                              " (epoch " + std::to_string(epoch) + "), batch:" +
                                              describe_batch(manifest, pairs, begin, end));
      }
      adam_step(result.params, grads, state, adam);

      LossRecord record{step, epoch, mean, std::chrono::system_clock::now()};
      result.losses.push_back(record);
      if (options.hooks.on_batch) options.hooks.on_batch(record);
      epoch_sum += batch_sum;
      ++step;
    }
    result.epoch_mean_loss.push_back(epoch_sum / static_cast<double>(pairs.size()));
    if (options.hooks.on_epoch_end) options.hooks.on_epoch_end(epoch, result.params);
  }
  return result;
}

void write_loss_csv(const std::vector<LossRecord>& losses, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << "step,epoch,loss\n";
  char buf[64];
  for (const auto& r : losses) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.loss);
    out << r.step << ',' << r.epoch << ',' << buf << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

}  // namespace leafsiam
