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

#include <string>
#include <vector>

#include "adgsyn/tensor.hpp"

namespace adgsyn {

struct NamedParam {
  std::string name;
  Tensor tensor;
};

// Versioned binary parameter container; byte layout in docs/CHECKPOINT_FORMAT.md.
// A JSON manifest with the same table (names, shapes, precisions, offsets) is
// written next to the payload.

inline constexpr char kCheckpointMagic[4] = {'A', 'D', 'G', 'S'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& bin_path, const std::string& manifest_path,
                     const std::vector<NamedParam>& params);

std::vector<NamedParam> load_checkpoint(const std::string& bin_path);

}  // namespace adgsyn
