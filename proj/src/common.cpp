// Copyright 2026 The pconf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pconf/common.hpp"

namespace pconf {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Contract: return "contract";
    case ErrorCode::InvalidSpec: return "invalid-spec";
    case ErrorCode::InvalidData: return "invalid-data";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::Diverged: return "diverged";
    case ErrorCode::Tuning: return "tuning";
    case ErrorCode::UnsupportedPlot: return "unsupported-plot";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace pconf
