//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_RC_HPP_
#define CHEMCENSOR_RC_HPP_

#include <array>
#include <set>
#include <string>
#include <vector>

#include "chemcensor/fglib.hpp"
#include "chemcensor/reaction.hpp"

namespace chemcensor {

// A reaction center at one context level: the included atom sets on both
// sides plus the canonical string key used for KB lookups.
//
// Level construction (shells measured in bonds from dynamic atoms, within
// one molecule; unmapped atoms join their own side at level 1):
//   L1: dynamic atoms + 1-shell + whole FG matches touching a dynamic atom
//   L2: L1 + 2-shell + rings holding a dynamic atom + adjacent stereocenters
//   L3: L2 + 3-shell + rings fused to the dynamic-holding rings
//   L4: L3 + 4-shell + first substituent atom of each fully-included
//       aromatic ring, widened to any FG match containing that atom
//   L5: L4 + 5-shell
struct RCPattern {
  int level = 0;
  std::vector<std::set<int>> left_atoms;   // per reactant molecule
  std::vector<std::set<int>> right_atoms;  // per product molecule
  std::string canonical_key;
};

// Cached per-molecule FG matches for one reaction, reused across levels.
struct ReactionMatches {
  // side[mol][fg_id] -> list of matches (atom-index vectors)
  std::vector<std::vector<std::vector<std::vector<int>>>> left;
  std::vector<std::vector<std::vector<std::vector<int>>>> right;
};

ReactionMatches compute_reaction_matches(const Reaction &rxn,
                                         const FGLibrary &library);

struct RCLevels {
  DynamicAtomSet dynamic;
  std::array<RCPattern, 5> levels;      // index 0 = level 1
  std::array<FGSignature, 5> signatures;
};

// One pass over all five levels; keys and signatures filled in.
RCLevels extract_all_levels(const Reaction &rxn, const FGLibrary &library);

// Single level, spec surface. Propagates EmptyCenterError.
RCPattern extract_rc(const Reaction &rxn, int level, const FGLibrary &library);

// Serializes both sides over canonical subgraph ranks. Atom tokens carry
// (element, charge, aromatic, in-pattern ring membership, dynamic flag);
// stereo marks join from level 2 upward. Invariant under atom-order
// permutation and map-label renumbering of the reaction.
std::string rc_canonical_key(const RCPattern &rc, const Reaction &rxn);

FGSignature compute_fg_signature(const Reaction &rxn, const RCPattern &rc,
                                 const FGLibrary &library);

}  // namespace chemcensor

#endif  // CHEMCENSOR_RC_HPP_
