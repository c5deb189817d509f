// Copyright 2026 the adgsyn authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adgsyn {

enum class ErrorCode {
  // SMILES parsing
  EmptyInput,
  UnbalancedParenthesis,
  UnclosedRingBond,
  UnknownElement,
  // tensor / autodiff
  ShapeMismatch,
  WidthMismatch,
  BackwardWithoutGraph,
  ScaleUnderflow,
  EmptyGraph,
  AllMasked,
  // data / metrics
  MalformedRow,
  UnknownCellLine,
  TooFewSamples,
  LengthMismatch,
  KOutOfRange,
  SingleClass,
  NoPositives,
  // config / io
  ConfigInvalid,
  IoFailure,
};

const char* error_code_name(ErrorCode code);

/// Project-wide exception. `position` is a byte offset for parser errors
/// and a 1-based line number for tabular-data errors; npos when unused.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorCode code, std::string message, std::size_t position = npos);

  ErrorCode code() const { return code_; }
  std::size_t position() const { return position_; }

 private:
  ErrorCode code_;
  std::size_t position_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& message,
                              std::size_t position = Error::npos);

}  // namespace adgsyn
