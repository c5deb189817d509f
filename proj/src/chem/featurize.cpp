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

#include "adgsyn/chem/featurize.hpp"

#include <algorithm>
#include <array>

namespace adgsyn::chem {

namespace {

constexpr std::array<const char*, 44> kElements = {
    "C",  "N",  "O",  "S",  "F",  "Si", "P",  "Cl", "Br", "Mg", "Na",
    "Ca", "Fe", "As", "Al", "I",  "B",  "V",  "K",  "Tl", "Yb", "Sb",
    "Sn", "Ag", "Pd", "Co", "Se", "Ti", "Zn", "H",  "Li", "Ge", "Cu",
    "Au", "Ni", "Cd", "In", "Mn", "Zr", "Cr", "Pt", "Hg", "Pb", "W"};

int element_slot(const std::string& symbol) {
  for (std::size_t i = 0; i < kElements.size(); ++i) {
    if (symbol == kElements[i]) return static_cast<int>(i);
  }
  return static_cast<int>(kElements.size());  // "other"
}

int charge_slot(int charge) {
  if (charge < -4 || charge > 4) return kChargeSlots - 1;  // "other"
  return charge + 4;
}

}  // namespace

std::span<const char* const> feature_elements() {
  return std::span<const char* const>(kElements.data(), kElements.size());
}

std::vector<float> featurize(const MolecularGraph& graph) {
  const int n = graph.atom_count();
  std::vector<float> rows(static_cast<std::size_t>(n) * kFeatureWidth, 0.0f);
  for (int i = 0; i < n; ++i) {
    const Atom& atom = graph.atoms[static_cast<std::size_t>(i)];
    float* row = rows.data() + static_cast<std::size_t>(i) * kFeatureWidth;
    int off = 0;
    row[off + element_slot(atom.element)] = 1.0f;
    off += kElementSlots;
    row[off + std::clamp(atom.degree, 0, kDegreeSlots - 1)] = 1.0f;
    off += kDegreeSlots;
    row[off + std::clamp(atom.implicit_hydrogens, 0, kHydrogenSlots - 1)] = 1.0f;
    off += kHydrogenSlots;
    row[off + charge_slot(atom.formal_charge)] = 1.0f;
    off += kChargeSlots;
    row[off] = atom.is_aromatic ? 1.0f : 0.0f;
  }
  return rows;
}

void featurize_into(MolecularGraph& graph) { graph.features = featurize(graph); }

}  // namespace adgsyn::chem
