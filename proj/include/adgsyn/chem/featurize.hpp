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

#include <span>
#include <vector>

#include "adgsyn/chem/smiles.hpp"

namespace adgsyn::chem {

// Fixed 78-wide per-atom encoding, version 1. Block layout (see
// docs/FEATURES.md for the exact slot table):
//   [0,45)   element one-hot: 44 named symbols + "other"
//   [45,56)  explicit degree one-hot, 0..10 (clamped)
//   [56,67)  implicit-hydrogen one-hot, 0..10 (clamped)
//   [67,77)  formal charge one-hot: -4..+4 + "other"
//   [77]     aromatic flag
inline constexpr int kFeatureVersion = 1;
inline constexpr int kElementSlots = 45;
inline constexpr int kDegreeSlots = 11;
inline constexpr int kHydrogenSlots = 11;
inline constexpr int kChargeSlots = 10;
inline constexpr int kFeatureWidth =
    kElementSlots + kDegreeSlots + kHydrogenSlots + kChargeSlots + 1;
static_assert(kFeatureWidth == 78);

/// The 44 named element symbols, in slot order.
std::span<const char* const> feature_elements();

/// Row-major n x 78 matrix; row i encodes atom i. Unknown elements land in
/// the "other" slot, never an error.
std::vector<float> featurize(const MolecularGraph& graph);

/// featurize() and store the result in graph.features.
void featurize_into(MolecularGraph& graph);

}  // namespace adgsyn::chem
