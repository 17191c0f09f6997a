//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_MOLECULE_HPP_
#define CHEMCENSOR_MOLECULE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace chemcensor {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

enum class Chirality : std::uint8_t { kNone, kCW, kCCW };

// Direction of a single bond as written in SMILES ('/' or '\'), normalized
// so the flag always reads "toward bond.b".
enum class BondDir : std::uint8_t { kNone, kUp, kDown };

struct Atom {
  int atomic_num = 6;
  int formal_charge = 0;
  bool aromatic = false;
  int explicit_h = 0;  // resolved hydrogen count, implicit + bracket
  int isotope = 0;     // 0 = unspecified
  int map_number = 0;  // 0 = unmapped
  // Tetrahedral parity relative to the atom's neighbors sorted by atom
  // index, with an implicit hydrogen counted as a phantom neighbor carrying
  // the owner's own index.
  Chirality chirality = Chirality::kNone;
  bool in_ring = false;

  std::string_view symbol() const;
};

struct Bond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::kSingle;
  bool in_ring = false;
  BondDir dir = BondDir::kNone;

  int other(int atom) const { return atom == a ? b : a; }
};

// Cis/trans annotation on a double bond: ref_a neighbors bond.a, ref_b
// neighbors bond.b; cis means the two reference atoms sit on the same side.
struct BondStereo {
  int bond = -1;
  int ref_a = -1;
  int ref_b = -1;
  bool cis = false;
};

// Attributed molecular graph. Built by the SMILES parser (or by hand in
// tests) and immutable after finalize(); safe to share across threads.
class Molecule {
public:
  Molecule() = default;

  int add_atom(Atom atom);
  // Throws SyntaxError on self-loops or duplicate atom pairs.
  int add_bond(int a, int b, BondOrder order);

  // Perceives rings, validates aromatic notation, freezes the graph.
  void finalize();

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }

  const Atom &atom(int i) const { return atoms_[static_cast<size_t>(i)]; }
  Atom &atom(int i) { return atoms_[static_cast<size_t>(i)]; }
  const Bond &bond(int i) const { return bonds_[static_cast<size_t>(i)]; }
  Bond &bond(int i) { return bonds_[static_cast<size_t>(i)]; }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }

  // Bond indices incident to an atom, in insertion order.
  const std::vector<int> &bonds_of(int atom) const {
    return adjacency_[static_cast<size_t>(atom)];
  }
  int degree(int atom) const {
    return static_cast<int>(adjacency_[static_cast<size_t>(atom)].size());
  }
  // Neighbor atom indices in insertion order.
  std::vector<int> neighbors(int atom) const;
  // Index of the bond joining a and b, -1 if absent.
  int bond_between(int a, int b) const;

  // Smallest set of smallest rings, each a cycle of atom indices.
  const std::vector<std::vector<int>> &rings() const { return rings_; }
  // Number of SSSR rings containing the atom.
  int ring_count(int atom) const {
    return ring_count_[static_cast<size_t>(atom)];
  }

  std::vector<BondStereo> stereo_bonds;
  std::string source_text;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> rings_;
  std::vector<int> ring_count_;
};

// SSSR via shortest-path candidate cycles filtered to a GF(2)-independent
// basis, smallest first. Exposed for the ring-soundness tests; finalize()
// calls it internally.
std::vector<std::vector<int>> perceive_rings(const Molecule &mol);

}  // namespace chemcensor

#endif  // CHEMCENSOR_MOLECULE_HPP_
