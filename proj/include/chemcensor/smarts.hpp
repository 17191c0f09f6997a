//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_SMARTS_HPP_
#define CHEMCENSOR_SMARTS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chemcensor/molecule.hpp"

namespace chemcensor {

// Atom-expression tree for the supported SMARTS subset: element classes,
// aromatic/aliphatic forms, [#n], charge, H-count, ring membership/count,
// degree, wildcard, and !/&/,/; logic. Recursive SMARTS, chirality and
// other constructs are rejected with UnsupportedFeatureError.
struct AtomExpr {
  enum class Kind : std::uint8_t { kAnd, kOr, kNot, kPrim };
  enum class Prim : std::uint8_t {
    kAny,          // *
    kAromatic,     // a
    kAliphatic,    // A
    kElement,      // value = atomic number, either form
    kAromElement,  // lowercase symbol
    kAliphElement, // uppercase symbol
    kCharge,       // value = signed charge
    kHCount,       // value = exact hydrogen count
    kRingCount,    // value = -1 for "any ring", else exact SSSR membership
    kDegree,       // value = exact heavy-atom degree
  };

  Kind kind = Kind::kPrim;
  Prim prim = Prim::kAny;
  int value = 0;
  std::vector<AtomExpr> children;
};

enum class BondQuery : std::uint8_t {
  kDefault,  // unspecified: single or aromatic
  kSingle,
  kDouble,
  kTriple,
  kAromatic,
  kAny,
};

struct QueryBond {
  int a = -1;
  int b = -1;
  BondQuery query = BondQuery::kDefault;
};

class QueryPattern {
public:
  std::vector<AtomExpr> atoms;
  std::vector<QueryBond> bonds;
  std::string source_text;

  int num_atoms() const { return static_cast<int>(atoms.size()); }
  const std::vector<int> &bonds_of(int atom) const {
    return adjacency_[static_cast<size_t>(atom)];
  }
  void rebuild_adjacency();

private:
  std::vector<std::vector<int>> adjacency_;
};

// Throws SyntaxError or UnsupportedFeatureError. The pattern graph must be
// connected and non-empty.
QueryPattern parse_smarts(std::string_view text);

bool atom_matches(const AtomExpr &expr, const Molecule &mol, int atom);
bool bond_matches(BondQuery query, const Molecule &mol, int bond);

// All injective pattern-to-molecule mappings, deduplicated by matched atom
// set (collapsing pattern automorphisms) and returned in a deterministic
// order. mapping[i] = molecule atom for pattern atom i.
std::vector<std::vector<int>> match_pattern(const QueryPattern &pattern,
                                            const Molecule &mol);

// Element-count screen; a library scan skips patterns that cannot match.
struct PatternScreen {
  std::vector<std::pair<int, int>> required_elements;  // (atomic_num, count)
  int min_atoms = 0;
  bool needs_aromatic = false;
  bool needs_ring = false;
};

struct MoleculeProfile {
  std::vector<int> element_counts;  // indexed by atomic number
  int num_atoms = 0;
  bool has_aromatic = false;
  bool has_ring = false;
};

PatternScreen compute_screen(const QueryPattern &pattern);
MoleculeProfile profile_molecule(const Molecule &mol);
bool screen_passes(const PatternScreen &screen, const MoleculeProfile &prof);

}  // namespace chemcensor

#endif  // CHEMCENSOR_SMARTS_HPP_
