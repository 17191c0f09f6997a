//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/molecule.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#include "chemcensor/elements.hpp"
#include "chemcensor/errors.hpp"

namespace chemcensor {

std::string_view Atom::symbol() const {
  return element_symbol(atomic_num);
}

int Molecule::add_atom(Atom atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

int Molecule::add_bond(int a, int b, BondOrder order) {
  if (a == b)
    throw SyntaxError("self-bond on atom " + std::to_string(a));
  if (bond_between(a, b) >= 0)
    throw SyntaxError("duplicate bond between atoms " + std::to_string(a) +
                      " and " + std::to_string(b));
  Bond bond;
  bond.a = a;
  bond.b = b;
  bond.order = order;
  bonds_.push_back(bond);
  int idx = static_cast<int>(bonds_.size()) - 1;
  adjacency_[static_cast<size_t>(a)].push_back(idx);
  adjacency_[static_cast<size_t>(b)].push_back(idx);
  return idx;
}

std::vector<int> Molecule::neighbors(int atom) const {
  std::vector<int> out;
  out.reserve(adjacency_[static_cast<size_t>(atom)].size());
  for (int bi : adjacency_[static_cast<size_t>(atom)])
    out.push_back(bonds_[static_cast<size_t>(bi)].other(atom));
  return out;
}

int Molecule::bond_between(int a, int b) const {
  if (a < 0 || a >= num_atoms())
    return -1;
  for (int bi : adjacency_[static_cast<size_t>(a)])
    if (bonds_[static_cast<size_t>(bi)].other(a) == b)
      return bi;
  return -1;
}

void Molecule::finalize() {
  rings_ = perceive_rings(*this);

  ring_count_.assign(atoms_.size(), 0);
  for (Atom &a : atoms_)
    a.in_ring = false;
  for (Bond &b : bonds_)
    b.in_ring = false;
  for (const auto &ring : rings_) {
    for (size_t i = 0; i < ring.size(); ++i) {
      int u = ring[i];
      int v = ring[(i + 1) % ring.size()];
      atoms_[static_cast<size_t>(u)].in_ring = true;
      ++ring_count_[static_cast<size_t>(u)];
      int bi = bond_between(u, v);
      if (bi >= 0)
        bonds_[static_cast<size_t>(bi)].in_ring = true;
    }
  }

  for (const Bond &b : bonds_) {
    if (b.order == BondOrder::kAromatic &&
        (!atoms_[static_cast<size_t>(b.a)].aromatic ||
         !atoms_[static_cast<size_t>(b.b)].aromatic))
      throw SyntaxError("aromatic bond between non-aromatic atoms");
  }
  for (int i = 0; i < num_atoms(); ++i) {
    if (atoms_[static_cast<size_t>(i)].aromatic &&
        !atoms_[static_cast<size_t>(i)].in_ring)
      throw SyntaxError("aromatic atom outside any ring");
  }
}

namespace {

// Shortest-path tree from src; parent[i] = previous atom, dist[i] = hops.
void bfs(const Molecule &mol, int src, std::vector<int> &dist,
         std::vector<int> &parent) {
  dist.assign(static_cast<size_t>(mol.num_atoms()), -1);
  parent.assign(static_cast<size_t>(mol.num_atoms()), -1);
  std::queue<int> q;
  dist[static_cast<size_t>(src)] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int bi : mol.bonds_of(u)) {
      int v = mol.bond(bi).other(u);
      if (dist[static_cast<size_t>(v)] < 0) {
        dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
        parent[static_cast<size_t>(v)] = u;
        q.push(v);
      }
    }
  }
}

std::vector<int> path_to_root(const std::vector<int> &parent, int v) {
  std::vector<int> path;
  for (int cur = v; cur >= 0; cur = parent[static_cast<size_t>(cur)])
    path.push_back(cur);
  return path;
}

// Edge-set bitmask of a cycle, for GF(2) independence checks.
std::vector<uint64_t> cycle_edge_vector(const Molecule &mol,
                                        const std::vector<int> &cycle) {
  size_t words = (static_cast<size_t>(mol.num_bonds()) + 63) / 64;
  std::vector<uint64_t> vec(words, 0);
  for (size_t i = 0; i < cycle.size(); ++i) {
    int u = cycle[i];
    int v = cycle[(i + 1) % cycle.size()];
    int bi = mol.bond_between(u, v);
    if (bi < 0)
      return {};
    vec[static_cast<size_t>(bi) / 64] ^= uint64_t{1} << (bi % 64);
  }
  return vec;
}

}  // namespace

std::vector<std::vector<int>> perceive_rings(const Molecule &mol) {
  int n = mol.num_atoms();
  int m = mol.num_bonds();
  if (n == 0 || m == 0)
    return {};

  // Component count for the cyclomatic number.
  std::vector<int> comp(static_cast<size_t>(n), -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[static_cast<size_t>(i)] >= 0)
      continue;
    ++ncomp;
    std::deque<int> q{i};
    comp[static_cast<size_t>(i)] = ncomp;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int bi : mol.bonds_of(u)) {
        int v = mol.bond(bi).other(u);
        if (comp[static_cast<size_t>(v)] < 0) {
          comp[static_cast<size_t>(v)] = ncomp;
          q.push_back(v);
        }
      }
    }
  }
  int ring_budget = m - n + ncomp;
  if (ring_budget <= 0)
    return {};

  // Horton-style candidates: for every root r and bond (x,y), the cycle
  // path(r,x) + (x,y) + path(y,r) when the two paths meet only at r.
  std::vector<std::vector<int>> candidates;
  std::vector<int> dist, parent;
  for (int r = 0; r < n; ++r) {
    bfs(mol, r, dist, parent);
    for (const Bond &b : mol.bonds()) {
      int x = b.a, y = b.b;
      if (dist[static_cast<size_t>(x)] < 0 || dist[static_cast<size_t>(y)] < 0)
        continue;
      if (parent[static_cast<size_t>(x)] == y ||
          parent[static_cast<size_t>(y)] == x)
        continue;
      std::vector<int> px = path_to_root(parent, x);
      std::vector<int> py = path_to_root(parent, y);
      // Disjoint except the shared root.
      std::vector<char> seen(static_cast<size_t>(n), 0);
      for (int a : px)
        seen[static_cast<size_t>(a)] = 1;
      bool ok = true;
      for (size_t i = 0; i + 1 < py.size(); ++i)
        if (seen[static_cast<size_t>(py[i])] != 0) {
          ok = false;
          break;
        }
      if (!ok)
        continue;
      std::vector<int> cycle(px.rbegin(), px.rend());  // r .. x
      for (size_t i = 0; i + 1 < py.size(); ++i)       // y .. (below r)
        cycle.push_back(py[i]);
      candidates.push_back(std::move(cycle));
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto &a, const auto &b) {
                     if (a.size() != b.size())
                       return a.size() < b.size();
                     return a < b;
                   });

  // Greedy GF(2) elimination over edge vectors, smallest cycles first.
  auto leading_bit = [](const std::vector<uint64_t> &v) {
    for (int w = static_cast<int>(v.size()) - 1; w >= 0; --w)
      if (v[static_cast<size_t>(w)] != 0)
        return w * 64 + 63 - __builtin_clzll(v[static_cast<size_t>(w)]);
    return -1;
  };
  std::vector<std::pair<int, std::vector<uint64_t>>> pivots;  // (lead, vec)
  std::vector<std::vector<int>> rings;
  for (auto &cand : candidates) {
    if (static_cast<int>(rings.size()) >= ring_budget)
      break;
    std::vector<uint64_t> red = cycle_edge_vector(mol, cand);
    if (red.empty())
      continue;
    int lead = leading_bit(red);
    while (lead >= 0) {
      auto it = std::find_if(pivots.begin(), pivots.end(),
                             [&](const auto &p) { return p.first == lead; });
      if (it == pivots.end())
        break;
      for (size_t w = 0; w < red.size(); ++w)
        red[w] ^= it->second[w];
      lead = leading_bit(red);
    }
    if (lead < 0)
      continue;  // dependent on already-selected rings
    pivots.emplace_back(lead, std::move(red));
    rings.push_back(std::move(cand));
  }

  // Canonical ring orientation: rotate to the smallest atom, pick the
  // lexicographically smaller direction; then sort the ring list.
  for (auto &ring : rings) {
    auto smallest = std::min_element(ring.begin(), ring.end());
    std::rotate(ring.begin(), smallest, ring.end());
    if (ring.size() > 2 && ring[1] > ring[ring.size() - 1]) {
      std::reverse(ring.begin() + 1, ring.end());
    }
  }
  std::sort(rings.begin(), rings.end(), [](const auto &a, const auto &b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  });
  return rings;
}

}  // namespace chemcensor
