//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_ELEMENTS_HPP_
#define CHEMCENSOR_ELEMENTS_HPP_

#include <string>
#include <string_view>

namespace chemcensor {

// Atomic number 0 is the SMILES wildcard atom '*'.
constexpr int kWildcardAtom = 0;
constexpr int kMaxAtomicNum = 118;

// Symbol for an atomic number ("*" for 0); empty view if out of range.
std::string_view element_symbol(int atomic_num);

// Atomic number for a symbol, -1 if unknown. Case-sensitive standard
// symbols plus "*".
int atomic_number(std::string_view symbol);

// Elements of the SMILES organic subset (written without brackets).
bool is_organic_subset(int atomic_num);

// Elements allowed in lowercase aromatic form: b c n o p s se as.
bool can_be_aromatic(int atomic_num);

// Number of implicit hydrogens for an organic-subset atom given the sum of
// its bond orders (aliphatic case). Default valences: B3, C4, N3, O2,
// P3/5, S2/4/6, halogens 1. Returns -1 when the sum exceeds every allowed
// valence.
int implicit_hydrogens(int atomic_num, int bond_order_sum);

// Implicit hydrogens for a lowercase aromatic organic-subset atom with the
// given heavy-atom degree. Atoms donating a pi electron to the ring (b, c,
// n, p) consume one extra valence slot; lone-pair donors (o, s) do not.
int aromatic_implicit_hydrogens(int atomic_num, int degree);

}  // namespace chemcensor

#endif  // CHEMCENSOR_ELEMENTS_HPP_
