//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <set>

#include "chemcensor/canonical.hpp"
#include "chemcensor/smiles.hpp"
#include "support.hpp"

using namespace chemcensor;

namespace {

// Exhaustive simple-cycle enumeration, the oracle for small molecules.
std::set<std::set<int>> all_simple_cycles(const Molecule &m) {
  std::set<std::set<int>> cycles;
  int n = m.num_atoms();
  std::vector<int> path;
  std::vector<char> on_path(static_cast<size_t>(n), 0);
  auto dfs = [&](auto &&self, int start, int u) -> void {
    for (int bi : m.bonds_of(u)) {
      int v = m.bond(bi).other(u);
      if (v == start && path.size() >= 3) {
        cycles.insert(std::set<int>(path.begin(), path.end()));
        continue;
      }
      if (on_path[static_cast<size_t>(v)] || v < start)
        continue;
      path.push_back(v);
      on_path[static_cast<size_t>(v)] = 1;
      self(self, start, v);
      on_path[static_cast<size_t>(v)] = 0;
      path.pop_back();
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    on_path.assign(static_cast<size_t>(n), 0);
    on_path[static_cast<size_t>(s)] = 1;
    dfs(dfs, s, s);
  }
  return cycles;
}

}  // namespace

TEST_CASE("acyclic molecules have no rings") {
  CHECK(parse_smiles("CCO").rings().empty());
  CHECK(parse_smiles("CC(C)CC(=O)NC").rings().empty());
}

TEST_CASE("cyclopropane is a single three-ring") {
  Molecule m = parse_smiles("C1CC1");
  REQUIRE(m.rings().size() == 1);
  CHECK(m.rings()[0].size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(m.atom(i).in_ring);
}

TEST_CASE("naphthalene yields two six-rings sharing a bond") {
  Molecule m = parse_smiles("c1ccc2ccccc2c1");
  REQUIRE(m.rings().size() == 2);
  CHECK(m.rings()[0].size() == 6);
  CHECK(m.rings()[1].size() == 6);
  std::set<int> shared;
  std::set<int> r0(m.rings()[0].begin(), m.rings()[0].end());
  for (int a : m.rings()[1])
    if (r0.count(a) != 0)
      shared.insert(a);
  CHECK(shared.size() == 2);  // one fused bond

  // oracle: both rings are genuine smallest cycles
  auto cycles = all_simple_cycles(m);
  for (const auto &ring : m.rings())
    CHECK(cycles.count(std::set<int>(ring.begin(), ring.end())) == 1);
}

TEST_CASE("ring soundness over the fixture set") {
  for (const std::string &s : cctest::fixture_smiles()) {
    Molecule m = parse_smiles(s);
    std::vector<char> flagged(static_cast<size_t>(m.num_atoms()), 0);
    for (const auto &ring : m.rings()) {
      for (size_t i = 0; i < ring.size(); ++i) {
        int u = ring[i];
        int v = ring[(i + 1) % ring.size()];
        CHECK_MESSAGE(m.bond_between(u, v) >= 0, "broken ring cycle in ", s);
        flagged[static_cast<size_t>(u)] = 1;
      }
    }
    for (int i = 0; i < m.num_atoms(); ++i)
      CHECK(m.atom(i).in_ring == (flagged[static_cast<size_t>(i)] != 0));
  }
}

TEST_CASE("spiro and bridged systems keep the cyclomatic count") {
  Molecule spiro = parse_smiles("C1CCC2(CC1)CCCC2");
  CHECK(spiro.rings().size() == 2);
  Molecule bridged = parse_smiles("C1CC2CCC1CC2");
  CHECK(bridged.rings().size() == 2);
}

TEST_CASE("canonical ranks form a permutation with deterministic ties") {
  Molecule m = parse_smiles("CC");
  auto ranks = canonical_ranks(m);
  std::multiset<int> rs(ranks.begin(), ranks.end());
  CHECK(rs == std::multiset<int>{0, 1});
}

TEST_CASE("oxygen rank is stable across input permutations of ethanol") {
  // all six traversals of CCO that keep it one molecule
  std::vector<std::string> forms = {"CCO", "OCC", "C(O)C", "C(C)O"};
  std::set<std::string> canon;
  for (const auto &f : forms)
    canon.insert(write_smiles(parse_smiles(f), true));
  CHECK(canon.size() == 1);
}

TEST_CASE("acetic acid ranks align across two written forms") {
  Molecule a = parse_smiles("CC(=O)O");
  Molecule b = parse_smiles("OC(C)=O");
  auto ra = canonical_ranks(a);
  auto rb = canonical_ranks(b);
  REQUIRE(cctest::graphs_isomorphic(a, b));
  // align by brute force and compare rank assignment
  int n = a.num_atoms();
  std::vector<int> image(static_cast<size_t>(n), -1);
  std::vector<char> used(static_cast<size_t>(n), 0);
  bool aligned = false;
  auto extend = [&](auto &&self, int i) -> bool {
    if (i == n)
      return true;
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<size_t>(j)] ||
          !cctest::atoms_compatible(a.atom(i), b.atom(j)))
        continue;
      bool ok = true;
      for (int k = 0; k < i; ++k) {
        int ab = a.bond_between(i, k);
        int bb = b.bond_between(j, image[static_cast<size_t>(k)]);
        if ((ab < 0) != (bb < 0) ||
            (ab >= 0 && a.bond(ab).order != b.bond(bb).order)) {
          ok = false;
          break;
        }
      }
      if (!ok)
        continue;
      image[static_cast<size_t>(i)] = j;
      used[static_cast<size_t>(j)] = 1;
      if (self(self, i + 1))
        return true;
      used[static_cast<size_t>(j)] = 0;
    }
    return false;
  };
  aligned = extend(extend, 0);
  REQUIRE(aligned);
  for (int i = 0; i < n; ++i)
    CHECK(ra[static_cast<size_t>(i)] ==
          rb[static_cast<size_t>(image[static_cast<size_t>(i)])]);
}
