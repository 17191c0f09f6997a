//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/rc.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "chemcensor/canonical.hpp"
#include "chemcensor/errors.hpp"
#include "chemcensor/smiles.hpp"

namespace chemcensor {
namespace {

using MatchTable = std::vector<std::vector<std::vector<int>>>;  // [fg][match]

std::vector<int> bfs_distances(const Molecule &mol,
                               const std::vector<int> &sources) {
  std::vector<int> dist(static_cast<size_t>(mol.num_atoms()), -1);
  std::queue<int> q;
  for (int s : sources) {
    dist[static_cast<size_t>(s)] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int bi : mol.bonds_of(u)) {
      int v = mol.bond(bi).other(u);
      if (dist[static_cast<size_t>(v)] < 0) {
        dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

// Per-molecule level sets for one side of the reaction. Unmapped atoms are
// the appeared/disappeared ones; they count as dynamic here so that a
// reaction mapped by the heuristic mapper (leaving groups unmapped) and the
// same reaction with every atom map written out produce identical sets.
std::array<std::set<int>, 5> level_sets_for_molecule(
    const Molecule &mol, const std::set<int> &dynamic_maps,
    const MatchTable &matches) {
  std::vector<int> dynamic_atoms;
  std::vector<char> is_dynamic(static_cast<size_t>(mol.num_atoms()), 0);
  for (int i = 0; i < mol.num_atoms(); ++i) {
    int map = mol.atom(i).map_number;
    if (map == 0 || dynamic_maps.count(map) != 0) {
      dynamic_atoms.push_back(i);
      is_dynamic[static_cast<size_t>(i)] = 1;
    }
  }

  std::array<std::set<int>, 5> levels;
  std::vector<int> dist = dynamic_atoms.empty()
                              ? std::vector<int>(
                                    static_cast<size_t>(mol.num_atoms()), -1)
                              : bfs_distances(mol, dynamic_atoms);

  auto add_shell = [&](std::set<int> &out, int radius) {
    for (int i = 0; i < mol.num_atoms(); ++i)
      if (dist[static_cast<size_t>(i)] >= 0 &&
          dist[static_cast<size_t>(i)] <= radius)
        out.insert(i);
  };

  // L1: dynamic atoms, 1-shell, FG matches holding a dynamic atom.
  add_shell(levels[0], 1);
  for (const auto &fg_matches : matches)
    for (const auto &match : fg_matches) {
      bool touches_dynamic = std::any_of(match.begin(), match.end(), [&](int a) {
        return is_dynamic[static_cast<size_t>(a)] != 0;
      });
      if (touches_dynamic)
        levels[0].insert(match.begin(), match.end());
    }

  // L2: 2-shell, rings holding a dynamic atom, stereocenters adjacent to L1.
  levels[1] = levels[0];
  add_shell(levels[1], 2);
  std::vector<char> ring_is_dynamic(mol.rings().size(), 0);
  for (size_t ri = 0; ri < mol.rings().size(); ++ri) {
    const auto &ring = mol.rings()[ri];
    bool dyn = std::any_of(ring.begin(), ring.end(), [&](int a) {
      return is_dynamic[static_cast<size_t>(a)] != 0;
    });
    if (dyn) {
      ring_is_dynamic[ri] = 1;
      levels[1].insert(ring.begin(), ring.end());
    }
  }
  for (int i = 0; i < mol.num_atoms(); ++i) {
    if (mol.atom(i).chirality == Chirality::kNone ||
        levels[1].count(i) != 0)
      continue;
    for (int nb : mol.neighbors(i))
      if (levels[0].count(nb) != 0) {
        levels[1].insert(i);
        break;
      }
  }

  // L3: 3-shell plus rings fused (sharing a bond) to dynamic-holding rings.
  levels[2] = levels[1];
  add_shell(levels[2], 3);
  for (size_t ri = 0; ri < mol.rings().size(); ++ri) {
    if (ring_is_dynamic[ri] != 0)
      continue;
    const auto &ring = mol.rings()[ri];
    std::set<std::pair<int, int>> edges;
    for (size_t i = 0; i < ring.size(); ++i) {
      int u = ring[i], v = ring[(i + 1) % ring.size()];
      edges.insert({std::min(u, v), std::max(u, v)});
    }
    bool fused = false;
    for (size_t rj = 0; rj < mol.rings().size() && !fused; ++rj) {
      if (ring_is_dynamic[rj] == 0)
        continue;
      const auto &other = mol.rings()[rj];
      for (size_t i = 0; i < other.size(); ++i) {
        int u = other[i], v = other[(i + 1) % other.size()];
        if (edges.count({std::min(u, v), std::max(u, v)}) != 0) {
          fused = true;
          break;
        }
      }
    }
    if (fused)
      levels[2].insert(ring.begin(), ring.end());
  }

  // L4: 4-shell plus aromatic-ring substituent context with FG widening.
  levels[3] = levels[2];
  add_shell(levels[3], 4);
  std::set<int> substituent_roots;
  for (const auto &ring : mol.rings()) {
    bool aromatic_ring = std::all_of(ring.begin(), ring.end(), [&](int a) {
      return mol.atom(a).aromatic;
    });
    if (!aromatic_ring)
      continue;
    bool included = std::all_of(ring.begin(), ring.end(), [&](int a) {
      return levels[2].count(a) != 0;
    });
    if (!included)
      continue;
    std::set<int> ring_atoms(ring.begin(), ring.end());
    for (int a : ring)
      for (int nb : mol.neighbors(a))
        if (ring_atoms.count(nb) == 0)
          substituent_roots.insert(nb);
  }
  levels[3].insert(substituent_roots.begin(), substituent_roots.end());
  for (const auto &fg_matches : matches)
    for (const auto &match : fg_matches) {
      bool rooted = std::any_of(match.begin(), match.end(), [&](int a) {
        return substituent_roots.count(a) != 0;
      });
      if (rooted)
        levels[3].insert(match.begin(), match.end());
    }

  // L5: 5-shell.
  levels[4] = levels[3];
  add_shell(levels[4], 5);
  return levels;
}

// --- canonical subgraph serialization -------------------------------------

struct SubgraphEmitter {
  const Molecule &mol;
  const std::vector<int> &atoms;  // component atoms, sorted
  const std::set<int> &included;  // full per-molecule level set
  std::map<int, int> local;       // molecule atom -> local index
  std::vector<int> ranks;
  std::vector<char> in_pattern_ring;
  const std::set<int> &dynamic_maps;
  bool with_stereo;

  SubgraphEmitter(const Molecule &m, const std::vector<int> &comp,
                  const std::set<int> &incl, const std::set<int> &dyn,
                  bool stereo)
      : mol(m), atoms(comp), included(incl), dynamic_maps(dyn),
        with_stereo(stereo) {
    for (size_t i = 0; i < atoms.size(); ++i)
      local[atoms[i]] = static_cast<int>(i);

    // ring membership within the induced subgraph
    Molecule sub;
    for (size_t i = 0; i < atoms.size(); ++i)
      sub.add_atom(Atom{});
    for (size_t i = 0; i < atoms.size(); ++i)
      for (int bi : mol.bonds_of(atoms[i])) {
        int other = mol.bond(bi).other(atoms[i]);
        auto it = local.find(other);
        if (it != local.end() && it->second > static_cast<int>(i))
          sub.add_bond(static_cast<int>(i), it->second, BondOrder::kSingle);
      }
    in_pattern_ring.assign(atoms.size(), 0);
    for (const auto &ring : perceive_rings(sub))
      for (int a : ring)
        in_pattern_ring[static_cast<size_t>(a)] = 1;

    RankRefiner refiner;
    for (int a : atoms) {
      const Atom &at = mol.atom(a);
      refiner.add_node({at.atomic_num, at.formal_charge, at.aromatic ? 1 : 0,
                        in_pattern_ring[static_cast<size_t>(local[a])],
                        is_dynamic(a) ? 1 : 0});
    }
    for (size_t i = 0; i < atoms.size(); ++i)
      for (int bi : mol.bonds_of(atoms[i])) {
        int other = mol.bond(bi).other(atoms[i]);
        auto it = local.find(other);
        if (it != local.end() && it->second > static_cast<int>(i))
          refiner.add_edge(static_cast<int>(i), it->second,
                           static_cast<std::int64_t>(mol.bond(bi).order));
      }
    ranks = refiner.ranks();
  }

  bool is_dynamic(int mol_atom) const {
    int map = mol.atom(mol_atom).map_number;
    return map == 0 || dynamic_maps.count(map) != 0;
  }

  std::string atom_token(int mol_atom) const {
    const Atom &a = mol.atom(mol_atom);
    std::string out = "[";
    out += a.symbol();
    if (a.formal_charge > 0) {
      out += "+";
      if (a.formal_charge > 1)
        out += std::to_string(a.formal_charge);
    } else if (a.formal_charge < 0) {
      out += "-";
      if (a.formal_charge < -1)
        out += std::to_string(-a.formal_charge);
    }
    if (a.aromatic)
      out += "a";
    if (in_pattern_ring[static_cast<size_t>(local.at(mol_atom))] != 0)
      out += "R";
    if (is_dynamic(mol_atom))
      out += "*";
    if (with_stereo && a.chirality != Chirality::kNone)
      out += tetrahedral_token(mol_atom);
    out += "]";
    return out;
  }

  // Parity over in-pattern neighbors sorted by canonical rank, phantom
  // hydrogen keyed by the owner. Unresolvable when heavy neighbors fall
  // outside the pattern.
  std::string tetrahedral_token(int mol_atom) const {
    std::vector<int> nbs = mol.neighbors(mol_atom);
    for (int nb : nbs)
      if (local.find(nb) == local.end())
        return "@x";
    const Atom &a = mol.atom(mol_atom);
    std::vector<int> by_index = nbs;
    std::sort(by_index.begin(), by_index.end());
    std::vector<int> by_rank = nbs;
    std::sort(by_rank.begin(), by_rank.end(), [&](int x, int y) {
      return rank_key(x) < rank_key(y);
    });
    if (a.explicit_h > 0) {
      // phantom H sits at the owner position in both orders
      auto ins_idx = std::lower_bound(by_index.begin(), by_index.end(),
                                      mol_atom);
      by_index.insert(ins_idx, mol_atom);
      auto ins_rank = std::lower_bound(
          by_rank.begin(), by_rank.end(), mol_atom,
          [&](int x, int y) { return rank_key(x) < rank_key(y); });
      by_rank.insert(ins_rank, mol_atom);
    }
    if (by_index.size() < 3)
      return "@x";
    int parity = 1;
    {
      std::vector<int> from = by_index;
      for (size_t i = 0; i < by_rank.size(); ++i) {
        if (from[i] == by_rank[i])
          continue;
        auto it = std::find(from.begin() + static_cast<long>(i) + 1,
                            from.end(), by_rank[i]);
        std::iter_swap(from.begin() + static_cast<long>(i), it);
        parity = -parity;
      }
    }
    Chirality tag = a.chirality;
    if (parity < 0)
      tag = tag == Chirality::kCW ? Chirality::kCCW : Chirality::kCW;
    return tag == Chirality::kCW ? "@2" : "@1";
  }

  // rank pair: in-pattern rank, tie-broken by nothing else (ranks unique)
  std::pair<int, int> rank_key(int mol_atom) const {
    auto it = local.find(mol_atom);
    if (it == local.end())
      return {1 << 20, mol_atom};
    return {ranks[static_cast<size_t>(it->second)], 0};
  }

  std::string bond_token(int bi) const {
    const Bond &b = mol.bond(bi);
    std::string out;
    switch (b.order) {
    case BondOrder::kSingle:
      out = "-";
      break;
    case BondOrder::kDouble:
      out = "=";
      break;
    case BondOrder::kTriple:
      out = "#";
      break;
    case BondOrder::kAromatic:
      out = ":";
      break;
    }
    if (with_stereo && b.order == BondOrder::kDouble)
      out += double_bond_stereo(bi);
    return out;
  }

  // 'c'/'t' relative to the lowest-ranked in-pattern neighbor on each side.
  std::string double_bond_stereo(int bi) const {
    const Bond &b = mol.bond(bi);
    auto lowest_in_pattern = [&](int z) {
      int best = -1;
      for (int nb : mol.neighbors(z)) {
        if (nb == b.other(z) || local.find(nb) == local.end())
          continue;
        if (best < 0 || rank_key(nb) < rank_key(best))
          best = nb;
      }
      return best;
    };
    int na = lowest_in_pattern(b.a);
    int nb = lowest_in_pattern(b.b);
    if (na < 0 || nb < 0)
      return "";
    int rel = stereo_relation(mol, bi, na, nb);
    if (rel == 0)
      return "";
    return rel > 0 ? "c" : "t";
  }

  // Emission: DFS over the component, neighbors by rank, SMILES-style ring
  // closure digits.
  std::string emit() const {
    size_t n = atoms.size();
    std::vector<int> order_of(n, -1);
    std::vector<int> parent_bond(n, -1);
    std::vector<std::vector<std::pair<int, int>>> children(n);  // (bond, local)
    struct Closure {
      int bond;
      int opener;
      int closer;
      int digit;
    };
    std::vector<Closure> closures;
    std::vector<char> closure_bond(static_cast<size_t>(mol.num_bonds()), 0);

    int start = 0;
    for (size_t i = 1; i < n; ++i)
      if (ranks[i] < ranks[static_cast<size_t>(start)])
        start = static_cast<int>(i);

    int counter = 0;
    auto dfs = [&](auto &&self, int u, int pbond) -> void {
      order_of[static_cast<size_t>(u)] = counter++;
      std::vector<std::pair<int, int>> nbs;  // (bond, local neighbor)
      for (int bi : mol.bonds_of(atoms[static_cast<size_t>(u)])) {
        int other = mol.bond(bi).other(atoms[static_cast<size_t>(u)]);
        auto it = local.find(other);
        if (it != local.end())
          nbs.emplace_back(bi, it->second);
      }
      std::sort(nbs.begin(), nbs.end(), [&](auto x, auto y) {
        return ranks[static_cast<size_t>(x.second)] <
               ranks[static_cast<size_t>(y.second)];
      });
      for (auto [bi, v] : nbs) {
        if (bi == pbond)
          continue;
        if (order_of[static_cast<size_t>(v)] >= 0) {
          if (closure_bond[static_cast<size_t>(bi)] == 0) {
            closure_bond[static_cast<size_t>(bi)] = 1;
            closures.push_back({bi, v, u, -1});
          }
          continue;
        }
        children[static_cast<size_t>(u)].emplace_back(bi, v);
        self(self, v, bi);
      }
    };
    dfs(dfs, start, -1);

    // digit assignment in visit order
    std::vector<int> by_visit(n);
    for (size_t i = 0; i < n; ++i)
      by_visit[static_cast<size_t>(order_of[i])] = static_cast<int>(i);
    std::set<int> free_digits;
    for (int d = 1; d <= 99; ++d)
      free_digits.insert(d);
    for (int u : by_visit) {
      for (auto &c : closures)
        if (c.closer == u && c.digit > 0)
          free_digits.insert(c.digit);
      std::vector<Closure *> opens;
      for (auto &c : closures)
        if (c.opener == u)
          opens.push_back(&c);
      std::sort(opens.begin(), opens.end(), [&](Closure *x, Closure *y) {
        return order_of[static_cast<size_t>(x->closer)] <
               order_of[static_cast<size_t>(y->closer)];
      });
      for (Closure *c : opens) {
        c->digit = *free_digits.begin();
        free_digits.erase(free_digits.begin());
      }
    }

    std::string out;
    auto emit_atom = [&](auto &&self, int u) -> void {
      out += atom_token(atoms[static_cast<size_t>(u)]);
      std::vector<const Closure *> closing, opening;
      for (const auto &c : closures) {
        if (c.closer == u)
          closing.push_back(&c);
        else if (c.opener == u)
          opening.push_back(&c);
      }
      std::sort(closing.begin(), closing.end(),
                [](const Closure *x, const Closure *y) {
                  return x->digit < y->digit;
                });
      std::sort(opening.begin(), opening.end(),
                [](const Closure *x, const Closure *y) {
                  return x->digit < y->digit;
                });
      for (const Closure *c : closing)
        out += std::to_string(c->digit);
      for (const Closure *c : opening) {
        out += bond_token(c->bond);
        out += std::to_string(c->digit);
      }
      const auto &kids = children[static_cast<size_t>(u)];
      for (size_t i = 0; i < kids.size(); ++i) {
        bool last = i + 1 == kids.size();
        if (!last)
          out += "(";
        out += bond_token(kids[i].first);
        self(self, kids[i].second);
        if (!last)
          out += ")";
      }
    };
    emit_atom(emit_atom, start);
    return out;
  }
};

std::string serialize_side(const std::vector<Molecule> &mols,
                           const std::vector<std::set<int>> &included,
                           const std::set<int> &dynamic_maps,
                           bool with_stereo) {
  std::vector<std::string> parts;
  for (size_t mi = 0; mi < mols.size(); ++mi) {
    const Molecule &mol = mols[mi];
    const std::set<int> &incl = included[mi];
    if (incl.empty())
      continue;
    // connected components of the induced subgraph
    std::set<int> remaining = incl;
    while (!remaining.empty()) {
      std::vector<int> comp;
      std::vector<int> stack{*remaining.begin()};
      remaining.erase(remaining.begin());
      comp.push_back(stack.back());
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int bi : mol.bonds_of(u)) {
          int v = mol.bond(bi).other(u);
          auto it = remaining.find(v);
          if (it != remaining.end()) {
            remaining.erase(it);
            comp.push_back(v);
            stack.push_back(v);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      SubgraphEmitter emitter(mol, comp, incl, dynamic_maps, with_stereo);
      parts.push_back(emitter.emit());
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0)
      out += ".";
    out += parts[i];
  }
  return out;
}

}  // namespace

ReactionMatches compute_reaction_matches(const Reaction &rxn,
                                         const FGLibrary &library) {
  ReactionMatches out;
  for (const Molecule &m : rxn.reactants)
    out.left.push_back(library.match_all(m));
  for (const Molecule &m : rxn.products)
    out.right.push_back(library.match_all(m));
  return out;
}

namespace {

RCLevels extract_levels_impl(const Reaction &rxn, const FGLibrary &library,
                             const ReactionMatches &matches) {
  RCLevels out;
  out.dynamic = detect_dynamic_atoms(rxn);
  const std::set<int> &dyn = out.dynamic.map_numbers;

  std::vector<std::array<std::set<int>, 5>> left, right;
  for (size_t mi = 0; mi < rxn.reactants.size(); ++mi)
    left.push_back(level_sets_for_molecule(rxn.reactants[mi], dyn,
                                           matches.left[mi]));
  for (size_t mi = 0; mi < rxn.products.size(); ++mi)
    right.push_back(level_sets_for_molecule(rxn.products[mi], dyn,
                                            matches.right[mi]));

  for (int lvl = 0; lvl < 5; ++lvl) {
    RCPattern &rc = out.levels[static_cast<size_t>(lvl)];
    rc.level = lvl + 1;
    for (auto &sets : left)
      rc.left_atoms.push_back(sets[static_cast<size_t>(lvl)]);
    for (auto &sets : right)
      rc.right_atoms.push_back(sets[static_cast<size_t>(lvl)]);
    rc.canonical_key =
        "RC" + std::to_string(rc.level) + "|" +
        serialize_side(rxn.reactants, rc.left_atoms, dyn, lvl + 1 >= 2) +
        ">>" +
        serialize_side(rxn.products, rc.right_atoms, dyn, lvl + 1 >= 2);

    // signature: a library FG is statically present when some match shares
    // no atom with this level's RC set
    FGSignature sig = library.empty_signature();
    auto scan = [&](const std::vector<MatchTable> &tables,
                    const std::vector<std::set<int>> &sets) {
      for (size_t mi = 0; mi < tables.size(); ++mi) {
        const std::set<int> &rc_atoms = sets[mi];
        for (size_t fg = 0; fg < tables[mi].size(); ++fg) {
          if (sig.test(static_cast<int>(fg)))
            continue;
          for (const auto &match : tables[mi][fg]) {
            bool overlaps = std::any_of(
                match.begin(), match.end(),
                [&](int a) { return rc_atoms.count(a) != 0; });
            if (!overlaps) {
              sig.set(static_cast<int>(fg));
              break;
            }
          }
        }
      }
    };
    scan(matches.left, rc.left_atoms);
    scan(matches.right, rc.right_atoms);
    out.signatures[static_cast<size_t>(lvl)] = std::move(sig);
  }
  return out;
}

}  // namespace

RCLevels extract_all_levels(const Reaction &rxn, const FGLibrary &library) {
  ReactionMatches matches = compute_reaction_matches(rxn, library);
  return extract_levels_impl(rxn, library, matches);
}

RCPattern extract_rc(const Reaction &rxn, int level,
                     const FGLibrary &library) {
  if (level < 1 || level > 5)
    throw ConfigError("RC level must be 1..5, got " + std::to_string(level));
  RCLevels all = extract_all_levels(rxn, library);
  return all.levels[static_cast<size_t>(level - 1)];
}

std::string rc_canonical_key(const RCPattern &rc, const Reaction &rxn) {
  return rc.canonical_key.empty()
             ? ("RC" + std::to_string(rc.level) + "|" +
                serialize_side(rxn.reactants, rc.left_atoms,
                               detect_dynamic_atoms(rxn).map_numbers,
                               rc.level >= 2) +
                ">>" +
                serialize_side(rxn.products, rc.right_atoms,
                               detect_dynamic_atoms(rxn).map_numbers,
                               rc.level >= 2))
             : rc.canonical_key;
}

FGSignature compute_fg_signature(const Reaction &rxn, const RCPattern &rc,
                                 const FGLibrary &library) {
  ReactionMatches matches = compute_reaction_matches(rxn, library);
  FGSignature sig = library.empty_signature();
  auto scan = [&](const std::vector<MatchTable> &tables,
                  const std::vector<std::set<int>> &sets) {
    for (size_t mi = 0; mi < tables.size(); ++mi) {
      for (size_t fg = 0; fg < tables[mi].size(); ++fg) {
        if (sig.test(static_cast<int>(fg)))
          continue;
        for (const auto &match : tables[mi][fg]) {
          bool overlaps =
              std::any_of(match.begin(), match.end(),
                          [&](int a) { return sets[mi].count(a) != 0; });
          if (!overlaps) {
            sig.set(static_cast<int>(fg));
            break;
          }
        }
      }
    }
  };
  scan(matches.left, rc.left_atoms);
  scan(matches.right, rc.right_atoms);
  return sig;
}

}  // namespace chemcensor
