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

#include "adgsyn/error.hpp"

namespace adgsyn {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnbalancedParenthesis: return "UnbalancedParenthesis";
    case ErrorCode::UnclosedRingBond: return "UnclosedRingBond";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::BackwardWithoutGraph: return "BackwardWithoutGraph";
    case ErrorCode::ScaleUnderflow: return "ScaleUnderflow";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::AllMasked: return "AllMasked";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownCellLine: return "UnknownCellLine";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::size_t position)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      position_(position) {}

void throw_error(ErrorCode code, const std::string& message, std::size_t position) {
  throw Error(code, message, position);
}

}  // namespace adgsyn
