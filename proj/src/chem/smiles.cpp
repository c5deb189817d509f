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

#include "adgsyn/chem/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <unordered_set>

namespace adgsyn::chem {

namespace {

// Elements the parser accepts inside brackets. Featurization separately maps
// anything outside its 44-symbol list to the "other" slot.
const std::unordered_set<std::string>& element_table() {
  static const std::unordered_set<std::string> table = {
      "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al",
      "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe",
      "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",
      "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te",
      "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb",
      "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt",
      "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa",
      "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr"};
  return table;
}

// Valence ladders for implicit-hydrogen assignment on organic-subset atoms.
const std::vector<int>* valence_ladder(const std::string& element) {
  static const std::map<std::string, std::vector<int>> ladders = {
      {"B", {3}},  {"C", {4}},       {"N", {3, 5}}, {"O", {2}},  {"P", {3, 5}},
      {"S", {2, 4, 6}}, {"F", {1}},  {"Cl", {1}},   {"Br", {1}}, {"I", {1}}};
  const auto it = ladders.find(element);
  return it == ladders.end() ? nullptr : &it->second;
}

// Bond order as written; Default is resolved after parsing (aromatic when
// both ends are aromatic and the edge lies in a ring, single otherwise).
enum class PendingOrder { Default, Single, Double, Triple, Aromatic };

struct PendingBond {
  int a = 0;
  int b = 0;
  PendingOrder order = PendingOrder::Default;
};

struct RingOpening {
  int atom = 0;
  std::optional<PendingOrder> bond;
  std::size_t offset = 0;
};

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  std::vector<Atom> atoms;
  std::vector<bool> from_bracket;
  std::vector<PendingBond> bonds;
  int prev_atom = -1;
  std::optional<PendingOrder> pending_bond;
  std::size_t pending_bond_offset = 0;
  std::vector<std::pair<int, std::size_t>> branch_stack;  // (prev_atom, '(' offset)
  std::map<int, RingOpening> open_rings;

  [[noreturn]] void fail(ErrorCode code, const std::string& msg, std::size_t at) {
    throw Error(code, msg + " at byte " + std::to_string(at), at);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void add_bond(int a, int b, PendingOrder order, std::size_t at) {
    if (a == b) fail(ErrorCode::UnclosedRingBond, "ring bond closes on its own atom", at);
    for (const PendingBond& pb : bonds) {
      if ((pb.a == a && pb.b == b) || (pb.a == b && pb.b == a)) {
        fail(ErrorCode::UnclosedRingBond, "duplicate bond between atoms", at);
      }
    }
    bonds.push_back({a, b, order});
  }

  void add_atom(Atom atom, bool bracket, std::size_t at) {
    const int idx = static_cast<int>(atoms.size());
    atoms.push_back(std::move(atom));
    from_bracket.push_back(bracket);
    if (prev_atom >= 0) {
      add_bond(prev_atom, idx, pending_bond.value_or(PendingOrder::Default), at);
    } else if (pending_bond.has_value()) {
      fail(ErrorCode::UnknownElement, "bond symbol with no preceding atom", pending_bond_offset);
    }
    pending_bond.reset();
    prev_atom = idx;
  }

  void ring_digit(int digit, std::size_t at) {
    if (prev_atom < 0) {
      fail(ErrorCode::UnclosedRingBond, "ring-closure digit before any atom", at);
    }
    auto it = open_rings.find(digit);
    if (it == open_rings.end()) {
      open_rings[digit] = RingOpening{prev_atom, pending_bond, at};
      pending_bond.reset();
      return;
    }
    const RingOpening open = it->second;
    open_rings.erase(it);
    PendingOrder order = PendingOrder::Default;
    if (open.bond.has_value() && pending_bond.has_value() && *open.bond != *pending_bond) {
      fail(ErrorCode::UnclosedRingBond, "ring bond closed with conflicting bond symbols", at);
    }
    if (open.bond.has_value()) order = *open.bond;
    if (pending_bond.has_value()) order = *pending_bond;
    pending_bond.reset();
    add_bond(open.atom, prev_atom, order, at);
  }

  Atom organic_atom(std::size_t at) {
    Atom atom;
    const char c = text[pos];
    if (std::islower(static_cast<unsigned char>(c))) {
      static const std::unordered_set<char> aromatic = {'b', 'c', 'n', 'o', 'p', 's'};
      if (aromatic.count(c) == 0) {
        fail(ErrorCode::UnknownElement, std::string("unknown aromatic symbol '") + c + "'", at);
      }
      atom.element = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      atom.is_aromatic = true;
      ++pos;
      return atom;
    }
    // Two-letter organic-subset symbols first.
    if (pos + 1 < text.size()) {
      const std::string two = std::string(text.substr(pos, 2));
      if (two == "Cl" || two == "Br") {
        atom.element = two;
        pos += 2;
        return atom;
      }
    }
    static const std::unordered_set<char> organic = {'B', 'C', 'N', 'O', 'P', 'S', 'F', 'I'};
    if (organic.count(c) == 0) {
      fail(ErrorCode::UnknownElement, std::string("unexpected character '") + c + "'", at);
    }
    atom.element = c;
    ++pos;
    return atom;
  }

  Atom bracket_atom(std::size_t at) {
    ++pos;  // consume '['
    Atom atom;
    // isotope (discarded)
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    if (eof()) fail(ErrorCode::UnknownElement, "unterminated bracket atom", at);

    // element symbol; lowercase first letter marks an aromatic atom
    const char first = peek();
    if (std::islower(static_cast<unsigned char>(first))) {
      std::string sym(1, first);
      if (pos + 1 < text.size() && std::islower(static_cast<unsigned char>(text[pos + 1]))) {
        const std::string two = {first, text[pos + 1]};
        if (two == "se" || two == "as") sym = two;
      }
      std::string canonical = sym;
      canonical[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(canonical[0])));
      if (!is_known_element(canonical)) {
        fail(ErrorCode::UnknownElement, "unknown element '" + sym + "'", pos);
      }
      atom.element = canonical;
      atom.is_aromatic = true;
      pos += sym.size();
    } else if (std::isupper(static_cast<unsigned char>(first))) {
      std::string sym(1, first);
      if (pos + 1 < text.size() && std::islower(static_cast<unsigned char>(text[pos + 1]))) {
        const std::string two = std::string(text.substr(pos, 2));
        if (is_known_element(two)) sym = two;
      }
      if (!is_known_element(sym)) {
        fail(ErrorCode::UnknownElement, "unknown element '" + sym + "'", pos);
      }
      atom.element = sym;
      pos += sym.size();
    } else if (first == '*') {
      fail(ErrorCode::UnknownElement, "wildcard atoms are not supported", pos);
    } else {
      fail(ErrorCode::UnknownElement, std::string("unexpected character '") + first + "' in bracket", pos);
    }

    // chirality (discarded)
    while (!eof() && peek() == '@') ++pos;
    // optional TH1/AL1-style tags after '@' are not supported; plain digits
    // after '@' would be ring bonds outside a bracket, so just continue.

    // explicit hydrogen count
    if (!eof() && peek() == 'H') {
      ++pos;
      int count = 1;
      if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        count = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
          count = count * 10 + (peek() - '0');
          ++pos;
        }
      }
      atom.implicit_hydrogens = count;
    }

    // formal charge: +, -, ++, --, +n, -n
    if (!eof() && (peek() == '+' || peek() == '-')) {
      const char sign_char = peek();
      const int sign = sign_char == '+' ? 1 : -1;
      int magnitude = 0;
      while (!eof() && peek() == sign_char) {
        ++magnitude;
        ++pos;
      }
      if (magnitude == 1 && !eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
          magnitude = magnitude * 10 + (peek() - '0');
          ++pos;
        }
      }
      atom.formal_charge = sign * magnitude;
    }

    // atom-map class (discarded)
    if (!eof() && peek() == ':') {
      ++pos;
      if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        fail(ErrorCode::UnknownElement, "atom-map class expects digits", pos);
      }
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    }

    if (eof() || peek() != ']') {
      fail(ErrorCode::UnknownElement, "unterminated bracket atom", at);
    }
    ++pos;  // consume ']'
    return atom;
  }

  void run() {
    while (!eof()) {
      const std::size_t at = pos;
      const char c = peek();
      if (c == '[') {
        add_atom(bracket_atom(at), true, at);
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        add_atom(organic_atom(at), false, at);
      } else if (c == '-' || c == '/' || c == '\\') {
        set_pending(PendingOrder::Single, at);
      } else if (c == '=') {
        set_pending(PendingOrder::Double, at);
      } else if (c == '#') {
        set_pending(PendingOrder::Triple, at);
      } else if (c == ':') {
        set_pending(PendingOrder::Aromatic, at);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos;
        ring_digit(c - '0', at);
      } else if (c == '%') {
        if (pos + 2 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos + 1])) ||
            !std::isdigit(static_cast<unsigned char>(text[pos + 2]))) {
          fail(ErrorCode::UnclosedRingBond, "'%' expects two digits", at);
        }
        const int digit = (text[pos + 1] - '0') * 10 + (text[pos + 2] - '0');
        pos += 3;
        ring_digit(digit, at);
      } else if (c == '(') {
        if (prev_atom < 0) {
          fail(ErrorCode::UnbalancedParenthesis, "branch with no preceding atom", at);
        }
        branch_stack.emplace_back(prev_atom, at);
        ++pos;
      } else if (c == ')') {
        if (branch_stack.empty()) {
          fail(ErrorCode::UnbalancedParenthesis, "')' without matching '('", at);
        }
        if (pending_bond.has_value()) {
          fail(ErrorCode::UnknownElement, "bond symbol before ')'", pending_bond_offset);
        }
        prev_atom = branch_stack.back().first;
        branch_stack.pop_back();
        ++pos;
      } else if (c == '.') {
        if (pending_bond.has_value()) {
          fail(ErrorCode::UnknownElement, "bond symbol before fragment separator", pending_bond_offset);
        }
        prev_atom = -1;
        ++pos;
      } else {
        fail(ErrorCode::UnknownElement, std::string("unexpected character '") + c + "'", at);
      }
    }
    if (!branch_stack.empty()) {
      fail(ErrorCode::UnbalancedParenthesis, "unclosed '('", branch_stack.back().second);
    }
    if (!open_rings.empty()) {
      fail(ErrorCode::UnclosedRingBond,
           "ring bond " + std::to_string(open_rings.begin()->first) + " never closed",
           open_rings.begin()->second.offset);
    }
    if (pending_bond.has_value()) {
      fail(ErrorCode::UnknownElement, "dangling bond symbol", pending_bond_offset);
    }
  }

  void set_pending(PendingOrder order, std::size_t at) {
    if (pending_bond.has_value()) {
      fail(ErrorCode::UnknownElement, "two consecutive bond symbols", at);
    }
    pending_bond = order;
    pending_bond_offset = at;
    ++pos;
  }
};

// Bridge edges (edges not on any cycle) via iterative DFS with discovery and
// low-link times. Used to resolve Default bonds between aromatic atoms.
std::vector<bool> find_bridges(int n, const std::vector<PendingBond>& bonds) {
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, bond index)
  for (std::size_t e = 0; e < bonds.size(); ++e) {
    adj[bonds[e].a].emplace_back(bonds[e].b, static_cast<int>(e));
    adj[bonds[e].b].emplace_back(bonds[e].a, static_cast<int>(e));
  }
  std::vector<bool> bridge(bonds.size(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  struct Frame {
    int node;
    int parent_edge;
    std::size_t next_child = 0;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack;
    stack.push_back({root, -1});
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& fr = stack.back();
      if (fr.next_child < adj[fr.node].size()) {
        const auto [to, edge] = adj[fr.node][fr.next_child++];
        if (edge == fr.parent_edge) continue;
        if (disc[to] == -1) {
          disc[to] = low[to] = timer++;
          stack.push_back({to, edge});
        } else {
          low[fr.node] = std::min(low[fr.node], disc[to]);
        }
      } else {
        stack.pop_back();
        if (!stack.empty()) {
          Frame& parent = stack.back();
          low[parent.node] = std::min(low[parent.node], low[fr.node]);
          if (low[fr.node] > disc[parent.node]) bridge[static_cast<std::size_t>(fr.parent_edge)] = true;
        }
      }
    }
  }
  return bridge;
}

}  // namespace

double bond_order_value(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return 1.0;
    case BondOrder::Double: return 2.0;
    case BondOrder::Triple: return 3.0;
    case BondOrder::Aromatic: return 1.5;
  }
  return 1.0;
}

bool is_known_element(std::string_view symbol) {
  return element_table().count(std::string(symbol)) != 0;
}

void MolecularGraph::validate() const {
  const int n = atom_count();
  for (const Bond& b : bonds) {
    if (b.a == b.b) throw_error(ErrorCode::UnclosedRingBond, "self-loop bond in graph");
    if (b.a < 0 || b.a >= n || b.b < 0 || b.b >= n) {
      throw_error(ErrorCode::ShapeMismatch, "bond index out of range");
    }
  }
  if (adjacency.size() != static_cast<std::size_t>(n) * n) {
    throw_error(ErrorCode::ShapeMismatch, "adjacency size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (adjacency[static_cast<std::size_t>(i) * n + i] != 0) {
      throw_error(ErrorCode::ShapeMismatch, "adjacency has a self loop");
    }
    for (int j = 0; j < n; ++j) {
      if (adjacency[static_cast<std::size_t>(i) * n + j] !=
          adjacency[static_cast<std::size_t>(j) * n + i]) {
        throw_error(ErrorCode::ShapeMismatch, "adjacency not symmetric");
      }
    }
  }
  if (!features.empty() && features.size() != static_cast<std::size_t>(n) * 78) {
    throw_error(ErrorCode::ShapeMismatch, "feature matrix row count mismatch");
  }
}

MolecularGraph parse_smiles(std::string_view input) {
  // Trim surrounding whitespace; everything else must be SMILES tokens.
  std::size_t begin = 0, end = input.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(input[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(input[end - 1]))) --end;
  if (begin == end) {
    throw Error(ErrorCode::EmptyInput, "empty SMILES string", 0);
  }

  Parser parser;
  parser.text = input.substr(begin, end - begin);
  parser.run();

  MolecularGraph graph;
  graph.atoms = std::move(parser.atoms);
  const int n = graph.atom_count();

  // Resolve Default bond orders: aromatic when both ends are aromatic and
  // the edge is part of a ring; otherwise single.
  const std::vector<bool> bridge = find_bridges(n, parser.bonds);
  graph.bonds.reserve(parser.bonds.size());
  for (std::size_t e = 0; e < parser.bonds.size(); ++e) {
    const PendingBond& pb = parser.bonds[e];
    BondOrder order = BondOrder::Single;
    switch (pb.order) {
      case PendingOrder::Single: order = BondOrder::Single; break;
      case PendingOrder::Double: order = BondOrder::Double; break;
      case PendingOrder::Triple: order = BondOrder::Triple; break;
      case PendingOrder::Aromatic: order = BondOrder::Aromatic; break;
      case PendingOrder::Default:
        order = (graph.atoms[pb.a].is_aromatic && graph.atoms[pb.b].is_aromatic && !bridge[e])
                    ? BondOrder::Aromatic
                    : BondOrder::Single;
        break;
    }
    graph.bonds.push_back({pb.a, pb.b, order});
  }

  graph.adjacency.assign(static_cast<std::size_t>(n) * n, 0);
  std::vector<double> order_sum(static_cast<std::size_t>(n), 0.0);
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const Bond& b : graph.bonds) {
    graph.adjacency[static_cast<std::size_t>(b.a) * n + b.b] = 1;
    graph.adjacency[static_cast<std::size_t>(b.b) * n + b.a] = 1;
    order_sum[static_cast<std::size_t>(b.a)] += bond_order_value(b.order);
    order_sum[static_cast<std::size_t>(b.b)] += bond_order_value(b.order);
    ++degree[static_cast<std::size_t>(b.a)];
    ++degree[static_cast<std::size_t>(b.b)];
  }

  // Implicit hydrogens for organic-subset atoms from the valence ladder;
  // bracket atoms keep exactly the count written in the brackets.
  for (int i = 0; i < n; ++i) {
    Atom& atom = graph.atoms[i];
    atom.degree = degree[static_cast<std::size_t>(i)];
    if (parser.from_bracket[static_cast<std::size_t>(i)]) continue;
    const std::vector<int>* ladder = valence_ladder(atom.element);
    if (ladder == nullptr) continue;
    const int needed = static_cast<int>(std::ceil(order_sum[static_cast<std::size_t>(i)] - 1e-9));
    int valence = 0;
    for (int v : *ladder) {
      if (v >= needed) {
        valence = v;
        break;
      }
    }
    atom.implicit_hydrogens = valence > 0 ? valence - needed : 0;
  }

  graph.validate();
  return graph;
}

}  // namespace adgsyn::chem
