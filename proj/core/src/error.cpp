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

#include "leafsiam/error.hpp"

namespace leafsiam {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIngestion: return "ingestion error";
    case ErrorKind::kDecode: return "decode error";
    case ErrorKind::kSplit: return "split error";
    case ErrorKind::kSynthetic: return "synthetic dataset error";
    case ErrorKind::kSampling: return "sampling error";
    case ErrorKind::kStructural: return "structural error";
    case ErrorKind::kDimension: return "dimensional error";
    case ErrorKind::kContract: return "contract violation";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kGallery: return "gallery error";
    case ErrorKind::kConfiguration: return "configuration error";
    case ErrorKind::kContamination: return "contamination error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

int Error::exit_code() const noexcept {
  switch (kind_) {
    case ErrorKind::kTraining:
    case ErrorKind::kStructural:
    case ErrorKind::kIo:
      return 3;
    default:
      return 2;
  }
}

}  // namespace leafsiam
