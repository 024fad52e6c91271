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

#include <stdexcept>
#include <string>
#include <string_view>

namespace leafsiam {

enum class ErrorKind {
  kIngestion,
  kDecode,
  kSplit,
  kSynthetic,
  kSampling,
  kStructural,
  kDimension,
  kContract,
  kTraining,
  kGallery,
  kConfiguration,
  kContamination,
  kValidation,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind` tells the CLI
// which exit code to use.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  // 2 for input/validation problems, 3 for runtime/training failures.
  int exit_code() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace leafsiam
