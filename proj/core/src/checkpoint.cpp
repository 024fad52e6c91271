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

#include "leafsiam/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "leafsiam/error.hpp"

namespace leafsiam {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr std::array<char, 8> kMagic = {'L', 'S', 'I', 'A', 'M', 'C', 'K', 'P'};

template <class U>
void put(std::ofstream& out, U value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(U));
}

template <class U>
U get(std::ifstream& in, const std::filesystem::path& path) {
  U value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(U));
  if (!in) throw Error(ErrorKind::kValidation, "truncated checkpoint " + path.string());
  return value;
}

}  // namespace

void save_checkpoint(const NetworkParams<float>& params, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write checkpoint " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.tensors.size()));
  for (const auto& t : params.tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (int d : t.shape) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    put<std::uint64_t>(out, t.data.size());
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(float)));
  }
  if (!out) throw Error(ErrorKind::kIo, "cannot write checkpoint " + path.string());
}

NetworkParams<float> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open checkpoint " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw Error(ErrorKind::kValidation, path.string() + " is not a leafsiam checkpoint");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::kValidation, "unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = get<std::uint32_t>(in, path);
  NetworkParams<float> params;
  for (std::uint32_t i = 0; i < count; ++i) {
    Tensor<float> t;
    const auto name_len = get<std::uint32_t>(in, path);
    if (name_len > 4096) throw Error(ErrorKind::kValidation, "corrupt checkpoint " + path.string());
    t.name.resize(name_len);
    in.read(t.name.data(), name_len);
    const auto rank = get<std::uint32_t>(in, path);
    if (rank > 8) throw Error(ErrorKind::kValidation, "corrupt checkpoint " + path.string());
    for (std::uint32_t r = 0; r < rank; ++r) t.shape.push_back(static_cast<int>(get<std::uint32_t>(in, path)));
    const auto numel = get<std::uint64_t>(in, path);
    if (numel != t.numel()) {
      throw Error(ErrorKind::kValidation, "tensor " + t.name + " size does not match its shape");
    }
    t.data.resize(numel);
    in.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(numel * sizeof(float)));
    if (!in) throw Error(ErrorKind::kValidation, "truncated checkpoint " + path.string());
    params.tensors.push_back(std::move(t));
  }
  return params;
}

}  // namespace leafsiam
