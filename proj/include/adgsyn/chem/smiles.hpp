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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adgsyn/error.hpp"

namespace adgsyn::chem {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

/// Order as a number (aromatic counts 1.5), used for valence sums and the
/// serialized cache format.
double bond_order_value(BondOrder order);

struct Atom {
  std::string element;
  int degree = 0;             // explicit neighbors in the graph
  int formal_charge = 0;
  int implicit_hydrogens = 0; // bracket atoms: as written; organic subset: by valence
  bool is_aromatic = false;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
};

struct MolecularGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  /// Symmetric n*n 0/1 relation without self loops.
  std::vector<std::uint8_t> adjacency;
  /// n x 78 row-major; empty until featurize() has run. Layout in docs/FEATURES.md.
  std::vector<float> features;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  bool adjacent(int i, int j) const {
    return adjacency[static_cast<std::size_t>(i) * atoms.size() + j] != 0;
  }
  /// Checks the structural invariants (symmetry, no self loops, index range,
  /// feature row count when present); throws on violation.
  void validate() const;
};

/// Parses one SMILES string: organic subset, bracket atoms, ring-closure
/// digits 1-9 and %nn, branches, bond symbols -, =, #, :, and fragment dots.
/// Stereo markers (/, \, @) are accepted and discarded. Errors carry the
/// byte offset of the offending token.
MolecularGraph parse_smiles(std::string_view input);

bool is_known_element(std::string_view symbol);

}  // namespace adgsyn::chem
