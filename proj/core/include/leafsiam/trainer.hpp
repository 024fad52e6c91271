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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "leafsiam/backbone.hpp"
#include "leafsiam/manifest.hpp"

namespace leafsiam {

struct TrainConfig {
  int epochs = 10;
  int batch_size = 8;
  double learning_rate = 0.001;
  double weight_decay = 0.0001;
  double margin = 2.0;
  std::uint64_t seed = 0;
  double train_fraction = 1.0;
  double similar_ratio = 0.5;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Throws a validation error naming the offending field.
void validate(const TrainConfig& config);

struct LossRecord {
  std::size_t step = 0;
  int epoch = 0;
  double loss = 0.0;  // mean contrastive loss of the batch
  std::chrono::system_clock::time_point timestamp;
};

struct TrainResult {
  NetworkParams<float> params;
  std::vector<LossRecord> losses;
  std::vector<double> epoch_mean_loss;
  DatasetManifest train_manifest;  // after train_fraction subsampling
};

struct TrainHooks {
  std::function<void(int epoch, const NetworkParams<float>& params)> on_epoch_end;
  std::function<void(const LossRecord&)> on_batch;
};

struct TrainOptions {
  BackboneConfig backbone = BackboneConfig::reference();
  ImageLoader loader = file_image_loader();
  // Decoded images kept in memory; beyond this, images are decoded per use.
  std::size_t image_cache_bytes = std::size_t{1} << 31;
  TrainHooks hooks;
};

// Contrastive Siamese training. Each epoch draws `train size` pairs at
// `similar_ratio`, splits them into batches, averages the pair losses of a
// batch and applies one Adam step. One parameter set serves both pair
// members. Bit-reproducible for a fixed seed on one machine. A non-finite
// batch loss aborts with a training error describing the batch.
TrainResult train(const TrainConfig& config, const DatasetManifest& train_manifest,
                  const TrainOptions& options = {});

// `step,epoch,loss` with the loss printed to round-trip precision.
void write_loss_csv(const std::vector<LossRecord>& losses, const std::filesystem::path& path);

}  // namespace leafsiam
