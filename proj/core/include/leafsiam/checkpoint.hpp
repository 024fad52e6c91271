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

#include <cstdint>
#include <filesystem>

#include "leafsiam/tensor.hpp"

namespace leafsiam {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary layout, little-endian:
//   "LSIAMCKP" | u32 version | u32 tensor count
//   per tensor: u32 name length | name | u32 rank | u32 dims[rank] |
//               u64 element count | float32 data
// Float values are stored bit-exactly.
void save_checkpoint(const NetworkParams<float>& params, const std::filesystem::path& path);
NetworkParams<float> load_checkpoint(const std::filesystem::path& path);

}  // namespace leafsiam
