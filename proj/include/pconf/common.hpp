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

#ifndef PCONF_COMMON_HPP
#define PCONF_COMMON_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pconf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error categories shared by the C++ core and the C API.
enum class ErrorCode {
  Contract,         ///< a caller broke an operation precondition
  InvalidSpec,      ///< a configuration/spec object violates its invariants
  InvalidData,      ///< data content unusable for the requested operation
  Parse,            ///< malformed input file
  Io,               ///< file could not be opened/written
  Diverged,         ///< non-finite loss or gradient during optimization
  Tuning,           ///< every hyperparameter candidate failed
  UnsupportedPlot,  ///< plot request cannot be rendered
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the optimizer; carries the zero-based step at which the loss or
/// gradient stopped being finite.
class DivergedError : public Error {
 public:
  DivergedError(std::size_t step, const std::string& message)
      : Error(ErrorCode::Diverged, message), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// std::visit helper.
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

}  // namespace pconf

#endif  // PCONF_COMMON_HPP
