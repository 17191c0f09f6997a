//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "chemcensor/errors.hpp"
#include "chemcensor/reaction.hpp"

namespace chemcensor {
namespace {

struct PairKey {
  int ra;
  int p_mol;
  int p_atom;
  auto operator<=>(const PairKey &) const = default;
};

// One grown fragment: reactant atom -> product atom correspondence plus
// the quality counters used for greedy selection.
struct Piece {
  int reactant = -1;
  std::vector<std::pair<int, AtomRef>> pairs;  // (reactant atom, product ref)
  int anchor_edges = 0;
  int exact_order_edges = 0;
  int h_agreements = 0;

  std::array<long long, 4> score() const {
    return {static_cast<long long>(pairs.size()), anchor_edges,
            exact_order_edges, h_agreements};
  }
};

int bond_order_int(const Molecule &m, int bi) {
  return static_cast<int>(m.bond(bi).order);
}

// Greedy connected growth from one seed pair. used_r/used_p mark atoms
// already committed by earlier pieces.
Piece grow_piece(const Molecule &rmol, int reactant_idx,
                 const std::vector<Molecule> &products, int seed_ra,
                 AtomRef seed_pa, const std::vector<char> &used_r,
                 const std::vector<std::vector<char>> &used_p) {
  Piece piece;
  piece.reactant = reactant_idx;

  const Molecule &pmol = products[static_cast<size_t>(seed_pa.mol)];
  std::vector<char> in_r(static_cast<size_t>(rmol.num_atoms()), 0);
  std::vector<char> in_p(static_cast<size_t>(pmol.num_atoms()), 0);
  std::vector<int> r_to_p(static_cast<size_t>(rmol.num_atoms()), -1);

  auto add_pair = [&](int ra, int pa, int anchors, int exact) {
    piece.pairs.emplace_back(ra, AtomRef{seed_pa.mol, pa});
    in_r[static_cast<size_t>(ra)] = 1;
    in_p[static_cast<size_t>(pa)] = 1;
    r_to_p[static_cast<size_t>(ra)] = pa;
    piece.anchor_edges += anchors;
    piece.exact_order_edges += exact;
    if (rmol.atom(ra).explicit_h == pmol.atom(pa).explicit_h)
      ++piece.h_agreements;
  };
  add_pair(seed_ra, seed_pa.atom, 0, 0);

  while (true) {
    // candidate (rn, pn) pairs adjacent to the piece on both sides
    struct Cand {
      int anchors = 0;
      int exact = 0;
      int h_agree = 0;
    };
    std::map<std::pair<int, int>, Cand> cands;
    for (auto &[ra, pref] : piece.pairs) {
      for (int rb : rmol.bonds_of(ra)) {
        int rn = rmol.bond(rb).other(ra);
        if (in_r[static_cast<size_t>(rn)] || used_r[static_cast<size_t>(rn)])
          continue;
        for (int pb : pmol.bonds_of(pref.atom)) {
          int pn = pmol.bond(pb).other(pref.atom);
          if (in_p[static_cast<size_t>(pn)] ||
              used_p[static_cast<size_t>(seed_pa.mol)][static_cast<size_t>(
                  pn)])
            continue;
          if (rmol.atom(rn).atomic_num != pmol.atom(pn).atomic_num)
            continue;
          cands.try_emplace({rn, pn});
        }
      }
    }
    if (cands.empty())
      break;
    for (auto &[key, cand] : cands) {
      auto [rn, pn] = key;
      for (auto &[ra, pref] : piece.pairs) {
        int rb = rmol.bond_between(ra, rn);
        int pb = pmol.bond_between(pref.atom, pn);
        if (rb >= 0 && pb >= 0) {
          ++cand.anchors;
          if (bond_order_int(rmol, rb) == bond_order_int(pmol, pb))
            ++cand.exact;
        }
      }
      cand.h_agree =
          rmol.atom(rn).explicit_h == pmol.atom(pn).explicit_h ? 1 : 0;
    }
    auto best = cands.begin();
    for (auto it = std::next(cands.begin()); it != cands.end(); ++it) {
      auto lhs = std::array<int, 3>{it->second.anchors, it->second.exact,
                                    it->second.h_agree};
      auto rhs = std::array<int, 3>{best->second.anchors, best->second.exact,
                                    best->second.h_agree};
      if (lhs > rhs)
        best = it;
    }
    add_pair(best->first.first, best->first.second, best->second.anchors,
             best->second.exact);
  }
  return piece;
}

struct Assignment {
  std::vector<std::pair<std::pair<int, int>, AtomRef>> pairs;
  // ((reactant mol, atom), product ref)
  long long mapped_product = 0;
  double fraction_sum = 0.0;
  long long exact_order = 0;
  long long h_agree = 0;

  // canonical identity for deterministic tie-breaking
  std::vector<int> flat() const {
    std::vector<int> out;
    for (const auto &[r, p] : pairs) {
      out.push_back(p.mol);
      out.push_back(p.atom);
      out.push_back(r.first);
      out.push_back(r.second);
    }
    return out;
  }
};

bool better(const Assignment &a, const Assignment &b) {
  if (a.mapped_product != b.mapped_product)
    return a.mapped_product > b.mapped_product;
  if (a.fraction_sum != b.fraction_sum)
    return a.fraction_sum > b.fraction_sum;
  if (a.exact_order != b.exact_order)
    return a.exact_order > b.exact_order;
  if (a.h_agree != b.h_agree)
    return a.h_agree > b.h_agree;
  return a.flat() < b.flat();
}

Assignment run_ordering(const Reaction &rxn, const std::vector<int> &order) {
  Assignment asg;
  std::vector<std::vector<char>> used_p;
  for (const Molecule &pm : rxn.products)
    used_p.emplace_back(static_cast<size_t>(pm.num_atoms()), 0);

  for (int ri : order) {
    const Molecule &rmol = rxn.reactants[static_cast<size_t>(ri)];
    std::vector<char> used_r(static_cast<size_t>(rmol.num_atoms()), 0);
    int mapped_here = 0;
    while (true) {
      Piece best;
      bool have = false;
      for (int ra = 0; ra < rmol.num_atoms(); ++ra) {
        if (used_r[static_cast<size_t>(ra)])
          continue;
        for (size_t pm = 0; pm < rxn.products.size(); ++pm) {
          const Molecule &pmol = rxn.products[pm];
          for (int pa = 0; pa < pmol.num_atoms(); ++pa) {
            if (used_p[pm][static_cast<size_t>(pa)])
              continue;
            if (rmol.atom(ra).atomic_num != pmol.atom(pa).atomic_num)
              continue;
            Piece piece =
                grow_piece(rmol, ri, rxn.products, ra,
                           AtomRef{static_cast<int>(pm), pa}, used_r, used_p);
            if (!have || piece.score() > best.score()) {
              best = std::move(piece);
              have = true;
            }
          }
        }
      }
      if (!have || best.pairs.empty())
        break;
      for (auto &[ra, pref] : best.pairs) {
        used_r[static_cast<size_t>(ra)] = 1;
        used_p[static_cast<size_t>(pref.mol)][static_cast<size_t>(pref.atom)] =
            1;
        asg.pairs.push_back({{ri, ra}, pref});
      }
      asg.mapped_product += static_cast<long long>(best.pairs.size());
      asg.exact_order += best.exact_order_edges;
      asg.h_agree += best.h_agreements;
      mapped_here += static_cast<int>(best.pairs.size());
    }
    asg.fraction_sum +=
        static_cast<double>(mapped_here) / rmol.num_atoms();
  }
  return asg;
}

}  // namespace

Reaction map_reaction(const Reaction &rxn, double min_coverage,
                      double *coverage_out) {
  if (rxn.mapped)
    throw MapError("map_reaction expects an unmapped reaction");
  if (rxn.products.empty())
    throw MapError("map_reaction needs a non-empty product side");

  // Candidate processing orders: all permutations while small, otherwise a
  // single size-descending pass.
  int nr = static_cast<int>(rxn.reactants.size());
  std::vector<std::vector<int>> orders;
  if (nr <= 5) {
    std::vector<int> idx(static_cast<size_t>(nr));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      orders.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
  } else {
    std::vector<int> idx(static_cast<size_t>(nr));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      int na = rxn.reactants[static_cast<size_t>(a)].num_atoms();
      int nb = rxn.reactants[static_cast<size_t>(b)].num_atoms();
      if (na != nb)
        return na > nb;
      return a < b;
    });
    orders.push_back(idx);
  }

  Assignment best;
  bool have = false;
  for (const auto &order : orders) {
    Assignment asg = run_ordering(rxn, order);
    if (!have || better(asg, best)) {
      best = std::move(asg);
      have = true;
    }
  }

  long long product_atoms = 0;
  for (const Molecule &pm : rxn.products)
    product_atoms += pm.num_atoms();
  double coverage = product_atoms == 0
                        ? 0.0
                        : static_cast<double>(best.mapped_product) /
                              static_cast<double>(product_atoms);
  if (coverage_out != nullptr)
    *coverage_out = coverage;
  if (coverage < min_coverage)
    throw MappingFailedError("product coverage " + std::to_string(coverage) +
                                 " below threshold " +
                                 std::to_string(min_coverage),
                             coverage);

  Reaction out = rxn;
  // wipe stray one-sided maps, then assign fresh numbers by product order
  for (auto *side : {&out.reactants, &out.reagents, &out.products})
    for (Molecule &m : *side)
      for (int i = 0; i < m.num_atoms(); ++i)
        m.atom(i).map_number = 0;

  std::sort(best.pairs.begin(), best.pairs.end(),
            [](const auto &x, const auto &y) { return x.second < y.second; });
  int next_map = 1;
  for (const auto &[r, p] : best.pairs) {
    out.reactants[static_cast<size_t>(r.first)].atom(r.second).map_number =
        next_map;
    out.products[static_cast<size_t>(p.mol)].atom(p.atom).map_number =
        next_map;
    ++next_map;
  }
  out.mapped = true;
  out.rebuild_map_index();
  return out;
}

}  // namespace chemcensor
