//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_REACTION_HPP_
#define CHEMCENSOR_REACTION_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chemcensor/molecule.hpp"

namespace chemcensor {

// (molecule index within one side, atom index within that molecule)
struct AtomRef {
  int mol = -1;
  int atom = -1;
  auto operator<=>(const AtomRef &) const = default;
};

struct Reaction {
  std::vector<Molecule> reactants;
  std::vector<Molecule> reagents;
  std::vector<Molecule> products;
  bool mapped = false;
  std::string source_text;

  // map number -> atom location, one table per side (reagents carry none
  // that matter)
  std::map<int, AtomRef> reactant_map_index;
  std::map<int, AtomRef> product_map_index;

  void rebuild_map_index();
};

// Parses "reactants>reagents>products" or "reactants>>products".
// mapped=true iff at least one nonzero map number appears on both sides.
// Throws SyntaxError and MapError.
Reaction parse_reaction(std::string_view text);

std::string write_reaction(const Reaction &rxn, bool canonical = false);

enum class ChangeKind : std::uint8_t {
  kBondFormed = 1 << 0,
  kBondBroken = 1 << 1,
  kOrderChanged = 1 << 2,
  kChargeChanged = 1 << 3,
  kHChanged = 1 << 4,
  kAppeared = 1 << 5,
  kDisappeared = 1 << 6,
};

struct DynamicAtomSet {
  std::set<int> map_numbers;
  std::map<int, unsigned> change_kinds;  // map number -> ChangeKind bits

  bool empty() const { return map_numbers.empty(); }
};

// An atom is dynamic when its mapped counterpart differs in neighbor map
// multiset, incident bond orders, formal charge, hydrogen count or
// aromatic flag, or when its map number appears on one side only.
// Throws EmptyCenterError for identity reactions.
DynamicAtomSet detect_dynamic_atoms(const Reaction &rxn);

// Heuristic greedy maximum-common-substructure atom mapper for unmapped
// candidate reactions. Tries every reactant processing order (capped),
// grows connected common fragments greedily, and keeps the assignment that
// maximizes product coverage, then per-reactant intactness. Throws
// MappingFailedError when mapped product atoms / product atoms falls below
// min_coverage.
Reaction map_reaction(const Reaction &rxn, double min_coverage = 0.9,
                      double *coverage_out = nullptr);

}  // namespace chemcensor

#endif  // CHEMCENSOR_REACTION_HPP_
