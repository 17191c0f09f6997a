//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/canonical.hpp"

#include <algorithm>
#include <numeric>

namespace chemcensor {

int RankRefiner::add_node(std::vector<std::int64_t> invariant) {
  invariants_.push_back(std::move(invariant));
  adj_.emplace_back();
  return static_cast<int>(invariants_.size()) - 1;
}

void RankRefiner::add_edge(int a, int b, std::int64_t label) {
  adj_[static_cast<size_t>(a)].emplace_back(b, label);
  adj_[static_cast<size_t>(b)].emplace_back(a, label);
}

void RankRefiner::set_final_tiebreak(std::vector<std::int64_t> keys) {
  final_keys_ = std::move(keys);
}

namespace {

// Dense ranks of arbitrary comparable keys, smallest key = rank 0.
template <typename Key>
std::vector<int> dense_ranks(const std::vector<Key> &keys) {
  size_t n = keys.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return keys[static_cast<size_t>(a)] < keys[static_cast<size_t>(b)];
  });
  std::vector<int> ranks(n, 0);
  int r = 0;
  for (size_t i = 0; i < n; ++i) {
    if (i > 0 && keys[static_cast<size_t>(order[i])] !=
                     keys[static_cast<size_t>(order[i - 1])])
      ++r;
    ranks[static_cast<size_t>(order[i])] = r;
  }
  return ranks;
}

int distinct_count(const std::vector<int> &ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

}  // namespace

namespace {

// members of the lowest-ranked class with more than one atom, or empty
std::vector<int> first_tied_class(const std::vector<int> &ranks) {
  size_t n = ranks.size();
  std::vector<int> class_size(n, 0);
  for (int r : ranks)
    ++class_size[static_cast<size_t>(r)];
  int target = -1;
  for (size_t r = 0; r < n; ++r)
    if (class_size[r] > 1) {
      target = static_cast<int>(r);
      break;
    }
  std::vector<int> members;
  if (target < 0)
    return members;
  for (size_t i = 0; i < n; ++i)
    if (ranks[i] == target)
      members.push_back(static_cast<int>(i));
  return members;
}

}  // namespace

void RankRefiner::refine(std::vector<int> &ranks) const {
  size_t n = invariants_.size();
  int distinct = distinct_count(ranks);
  while (distinct < static_cast<int>(n)) {
    std::vector<std::vector<std::int64_t>> sigs(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::int64_t> neigh;
      neigh.reserve(adj_[i].size());
      for (auto [j, label] : adj_[i])
        neigh.push_back(label * static_cast<std::int64_t>(n + 1) +
                        ranks[static_cast<size_t>(j)]);
      std::sort(neigh.begin(), neigh.end());
      sigs[i].push_back(ranks[i]);
      sigs[i].insert(sigs[i].end(), neigh.begin(), neigh.end());
    }
    std::vector<int> next = dense_ranks(sigs);
    int next_distinct = distinct_count(next);
    ranks = std::move(next);
    if (next_distinct == distinct)
      break;
    distinct = next_distinct;
  }
}

std::vector<int> RankRefiner::refined_start() const {
  size_t n = invariants_.size();
  std::vector<int> ranks = dense_ranks(invariants_);
  refine(ranks);
  if (!final_keys_.empty() && distinct_count(ranks) < static_cast<int>(n)) {
    std::vector<std::pair<int, std::int64_t>> keyed(n);
    for (size_t i = 0; i < n; ++i)
      keyed[i] = {ranks[i], final_keys_[i]};
    ranks = dense_ranks(keyed);
    refine(ranks);
  }
  return ranks;
}

std::vector<int> RankRefiner::promote_and_refine(std::vector<int> ranks,
                                                 int chosen) const {
  size_t n = invariants_.size();
  std::vector<std::pair<int, int>> keyed(n);
  for (size_t i = 0; i < n; ++i)
    keyed[i] = {ranks[i], static_cast<int>(i) == chosen ? 0 : 1};
  ranks = dense_ranks(keyed);
  refine(ranks);
  return ranks;
}

std::vector<int> RankRefiner::ranks() const {
  if (invariants_.empty())
    return {};
  std::vector<int> ranks = refined_start();
  while (true) {
    std::vector<int> tied = first_tied_class(ranks);
    if (tied.empty())
      break;
    ranks = promote_and_refine(std::move(ranks), tied[0]);
  }
  return ranks;
}

std::vector<std::vector<int>> RankRefiner::rank_candidates(int cap) const {
  if (invariants_.empty())
    return {{}};
  std::vector<std::vector<int>> out;
  bool exceeded = false;
  auto explore = [&](auto &&self, std::vector<int> ranks) -> void {
    if (exceeded)
      return;
    std::vector<int> tied = first_tied_class(ranks);
    if (tied.empty()) {
      out.push_back(std::move(ranks));
      if (static_cast<int>(out.size()) > cap)
        exceeded = true;
      return;
    }
    for (int member : tied) {
      self(self, promote_and_refine(ranks, member));
      if (exceeded)
        return;
    }
  };
  explore(explore, refined_start());
  if (exceeded)
    return {this->ranks()};
  return out;
}

namespace {

RankRefiner molecule_refiner(const Molecule &mol) {
  RankRefiner refiner;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    refiner.add_node({a.atomic_num, a.formal_charge, mol.degree(i),
                      a.explicit_h, a.aromatic ? 1 : 0, a.in_ring ? 1 : 0,
                      a.isotope});
  }
  for (const Bond &b : mol.bonds())
    refiner.add_edge(b.a, b.b, static_cast<std::int64_t>(b.order));

  std::vector<std::int64_t> stereo(static_cast<size_t>(mol.num_atoms()), 0);
  for (int i = 0; i < mol.num_atoms(); ++i)
    if (mol.atom(i).chirality != Chirality::kNone)
      stereo[static_cast<size_t>(i)] |= 1;
  for (const BondStereo &bs : mol.stereo_bonds) {
    const Bond &b = mol.bond(bs.bond);
    stereo[static_cast<size_t>(b.a)] |= 2;
    stereo[static_cast<size_t>(b.b)] |= 2;
  }
  refiner.set_final_tiebreak(std::move(stereo));
  return refiner;
}

}  // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  return molecule_refiner(mol).ranks();
}

std::vector<std::vector<int>> canonical_rank_candidates(const Molecule &mol,
                                                        int cap) {
  return molecule_refiner(mol).rank_candidates(cap);
}

}  // namespace chemcensor
