//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_SMILES_HPP_
#define CHEMCENSOR_SMILES_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "chemcensor/molecule.hpp"

namespace chemcensor {

// Parses a (possibly multi-component) SMILES string. Implicit hydrogens of
// organic-subset atoms are resolved into Atom::explicit_h; bracket atoms
// keep their written H counts verbatim. Tetrahedral tags and directional
// bonds are normalized into Atom::chirality / Molecule::stereo_bonds.
// Throws SyntaxError, ValenceError or MapError.
Molecule parse_smiles(std::string_view text);

struct SmilesWriteOptions {
  enum class Order { kInput, kCanonical, kRandom };
  Order order = Order::kInput;
  bool include_maps = true;
  std::uint64_t seed = 0;
};

std::string write_smiles(const Molecule &mol, const SmilesWriteOptions &opt);

// Canonical output depends only on the molecular graph, not the input atom
// order; components are sorted. Non-canonical output follows input order.
std::string write_smiles(const Molecule &mol, bool canonical = false);

// Random-traversal SMILES drawn from a generator seeded by `seed`;
// reparsing yields a graph-isomorphic molecule.
std::string randomize_traversal(const Molecule &mol, std::uint64_t seed);

// Cis/trans query for a stereo double bond against an arbitrary reference
// neighbor pair (na adjacent to bond.a, nb to bond.b). Returns +1 for cis,
// -1 for trans, 0 when the bond carries no stereo annotation.
int stereo_relation(const Molecule &mol, int bond_idx, int na, int nb);

}  // namespace chemcensor

#endif  // CHEMCENSOR_SMILES_HPP_
