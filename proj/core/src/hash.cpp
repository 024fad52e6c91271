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

#include "leafsiam/hash.hpp"

#include <cstdio>

namespace leafsiam {

namespace {
constexpr std::uint64_t kPrime = 0x100000001b3ULL;
}

void Fnv1a::update(std::span<const std::byte> bytes) noexcept {
  for (std::byte b : bytes) {
    state_ ^= static_cast<std::uint64_t>(b);
    state_ *= kPrime;
  }
}

void Fnv1a::update(std::string_view text) noexcept {
  update(std::as_bytes(std::span(text.data(), text.size())));
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace leafsiam
