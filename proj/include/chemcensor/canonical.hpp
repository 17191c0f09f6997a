//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_CANONICAL_HPP_
#define CHEMCENSOR_CANONICAL_HPP_

#include <cstdint>
#include <vector>

#include "chemcensor/molecule.hpp"

namespace chemcensor {

// Iterative neighborhood refinement over an arbitrary labeled graph.
// Nodes carry caller-supplied initial invariant vectors; edges carry an
// integer label. Produces a permutation of 0..n-1. Ties surviving full
// refinement are broken by promoting the lowest-index member of the
// smallest tied class, which keeps results deterministic for a fixed
// input order; automorphic ties yield identical serialized forms either way.
class RankRefiner {
public:
  int add_node(std::vector<std::int64_t> invariant);
  void add_edge(int a, int b, std::int64_t label);

  // Extra invariant appended after the primary refinement stabilizes and
  // before index tie-breaking (stereo flags ride here).
  void set_final_tiebreak(std::vector<std::int64_t> keys);

  std::vector<int> ranks() const;

  // Every ranking reachable by exploring all members of each tied class
  // instead of just the lowest-index one. Returns at most `cap` rankings;
  // when the exploration would exceed the cap it degrades to the single
  // default ranking. Used by the canonical writer to pick a byte-stable
  // form for molecules whose automorphisms mirror stereocenters.
  std::vector<std::vector<int>> rank_candidates(int cap) const;

private:
  void refine(std::vector<int> &ranks) const;
  std::vector<int> refined_start() const;
  std::vector<int> promote_and_refine(std::vector<int> ranks,
                                      int chosen) const;

  std::vector<std::vector<std::int64_t>> invariants_;
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj_;
  std::vector<std::int64_t> final_keys_;
};

// All tie-break rankings for a molecule, capped; single default ranking
// when the symmetry is too large to enumerate.
std::vector<std::vector<int>> canonical_rank_candidates(const Molecule &mol,
                                                        int cap);

// Canonical atom ranks for a whole molecule. Invariant under relabeling of
// the input atom order (up to automorphism); atom-map numbers do not
// participate. Seed tuple: (element, charge, degree, explicit_h, aromatic,
// in_ring, isotope); stereo presence is the final refinement key.
std::vector<int> canonical_ranks(const Molecule &mol);

}  // namespace chemcensor

#endif  // CHEMCENSOR_CANONICAL_HPP_
