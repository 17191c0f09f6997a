//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/reaction.hpp"

#include <algorithm>

#include "chemcensor/errors.hpp"
#include "chemcensor/smiles.hpp"

namespace chemcensor {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, p - start));
    start = p + 1;
  }
  return parts;
}

std::vector<Molecule> parse_side(std::string_view side,
                                 const std::string &role) {
  std::vector<Molecule> mols;
  if (side.empty())
    return mols;
  for (std::string_view comp : split(side, '.')) {
    if (comp.empty())
      throw SyntaxError("empty component in " + role);
    mols.push_back(parse_smiles(comp));
  }
  return mols;
}

void index_side(const std::vector<Molecule> &mols, const std::string &role,
                std::map<int, AtomRef> &index) {
  index.clear();
  for (size_t mi = 0; mi < mols.size(); ++mi) {
    const Molecule &m = mols[mi];
    for (int ai = 0; ai < m.num_atoms(); ++ai) {
      int map = m.atom(ai).map_number;
      if (map == 0)
        continue;
      auto [it, inserted] =
          index.emplace(map, AtomRef{static_cast<int>(mi), ai});
      if (!inserted)
        throw MapError("duplicate atom map " + std::to_string(map) +
                       " among " + role);
    }
  }
}

}  // namespace

void Reaction::rebuild_map_index() {
  index_side(reactants, "reactants", reactant_map_index);
  index_side(products, "products", product_map_index);
}

Reaction parse_reaction(std::string_view text) {
  // trim
  size_t b = text.find_first_not_of(" \t\r\n");
  size_t e = text.find_last_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    throw SyntaxError("empty reaction");
  text = text.substr(b, e - b + 1);

  std::vector<std::string_view> sides = split(text, '>');
  if (sides.size() != 3)
    throw SyntaxError("reaction needs 'reactants>reagents>products', got " +
                      std::to_string(sides.size()) + " part(s)");

  Reaction rxn;
  rxn.source_text = std::string(text);
  rxn.reactants = parse_side(sides[0], "reactants");
  rxn.reagents = parse_side(sides[1], "reagents");
  rxn.products = parse_side(sides[2], "products");
  if (rxn.reactants.empty())
    throw SyntaxError("empty reactant side");
  if (rxn.products.empty())
    throw SyntaxError("empty product side");

  rxn.rebuild_map_index();

  // reagent maps may not collide with product maps
  std::set<int> reagent_maps;
  for (const Molecule &m : rxn.reagents)
    for (const Atom &a : m.atoms())
      if (a.map_number != 0)
        reagent_maps.insert(a.map_number);
  for (int map : reagent_maps)
    if (rxn.product_map_index.count(map) != 0)
      throw MapError("reagent shares atom map " + std::to_string(map) +
                     " with a product atom");

  rxn.mapped =
      !rxn.reactant_map_index.empty() && !rxn.product_map_index.empty();

  if (rxn.mapped) {
    for (const auto &[map, pref] : rxn.product_map_index) {
      auto it = rxn.reactant_map_index.find(map);
      if (it == rxn.reactant_map_index.end())
        throw MapError("product atom map " + std::to_string(map) +
                       " has no reactant counterpart");
      const Atom &ra = rxn.reactants[static_cast<size_t>(it->second.mol)].atom(
          it->second.atom);
      const Atom &pa =
          rxn.products[static_cast<size_t>(pref.mol)].atom(pref.atom);
      if (ra.atomic_num != pa.atomic_num)
        throw MapError("element mismatch across sides for atom map " +
                       std::to_string(map));
    }
  }
  return rxn;
}

std::string write_reaction(const Reaction &rxn, bool canonical) {
  auto side = [&](const std::vector<Molecule> &mols) {
    std::vector<std::string> parts;
    parts.reserve(mols.size());
    for (const Molecule &m : mols)
      parts.push_back(write_smiles(m, canonical));
    if (canonical)
      std::sort(parts.begin(), parts.end());
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i > 0)
        out += ".";
      out += parts[i];
    }
    return out;
  };
  return side(rxn.reactants) + ">" + side(rxn.reagents) + ">" +
         side(rxn.products);
}

namespace {

// Comparison token per neighbor: mapped neighbors compare by map number and
// bond order; unmapped ones by element and bond order.
struct NeighborToken {
  int mapped;
  int id;  // map number or atomic number
  int order;
  auto operator<=>(const NeighborToken &) const = default;
};

std::vector<NeighborToken> neighbor_tokens(const Molecule &m, int atom) {
  std::vector<NeighborToken> out;
  for (int bi : m.bonds_of(atom)) {
    const Bond &b = m.bond(bi);
    int nb = b.other(atom);
    const Atom &na = m.atom(nb);
    if (na.map_number > 0)
      out.push_back({1, na.map_number, static_cast<int>(b.order)});
    else
      out.push_back({0, na.atomic_num, static_cast<int>(b.order)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<int> mapped_neighbor_set(const Molecule &m, int atom) {
  std::set<int> out;
  for (int nb : m.neighbors(atom))
    if (m.atom(nb).map_number > 0)
      out.insert(m.atom(nb).map_number);
  return out;
}

}  // namespace

DynamicAtomSet detect_dynamic_atoms(const Reaction &rxn) {
  if (!rxn.mapped)
    throw MapError("detect_dynamic_atoms needs a mapped reaction");

  DynamicAtomSet dyn;
  auto mark = [&](int map, ChangeKind kind) {
    dyn.map_numbers.insert(map);
    dyn.change_kinds[map] |= static_cast<unsigned>(kind);
  };

  for (const auto &[map, rref] : rxn.reactant_map_index) {
    auto pit = rxn.product_map_index.find(map);
    if (pit == rxn.product_map_index.end()) {
      mark(map, ChangeKind::kDisappeared);
      continue;
    }
    const Molecule &rm = rxn.reactants[static_cast<size_t>(rref.mol)];
    const Molecule &pm = rxn.products[static_cast<size_t>(pit->second.mol)];
    int ra = rref.atom;
    int pa = pit->second.atom;

    if (rm.atom(ra).formal_charge != pm.atom(pa).formal_charge)
      mark(map, ChangeKind::kChargeChanged);
    if (rm.atom(ra).explicit_h != pm.atom(pa).explicit_h)
      mark(map, ChangeKind::kHChanged);
    if (rm.atom(ra).aromatic != pm.atom(pa).aromatic)
      mark(map, ChangeKind::kOrderChanged);

    if (neighbor_tokens(rm, ra) != neighbor_tokens(pm, pa)) {
      std::set<int> rn = mapped_neighbor_set(rm, ra);
      std::set<int> pn = mapped_neighbor_set(pm, pa);
      bool formed = false, broken = false;
      for (int x : pn)
        if (rn.count(x) == 0)
          formed = true;
      for (int x : rn)
        if (pn.count(x) == 0)
          broken = true;
      // unmapped-neighbor count changes count as formation/breakage too
      int r_unmapped = rm.degree(ra) - static_cast<int>(rn.size());
      int p_unmapped = pm.degree(pa) - static_cast<int>(pn.size());
      if (p_unmapped > r_unmapped)
        formed = true;
      if (r_unmapped > p_unmapped)
        broken = true;
      if (formed)
        mark(map, ChangeKind::kBondFormed);
      if (broken)
        mark(map, ChangeKind::kBondBroken);
      bool order_changed = false;
      for (int x : rn) {
        if (pn.count(x) == 0)
          continue;
        int rb = rm.bond_between(ra, rxn.reactant_map_index.at(x).atom);
        int pb = pm.bond_between(pa, rxn.product_map_index.at(x).atom);
        if (rb >= 0 && pb >= 0 &&
            rm.bond(rb).order != pm.bond(pb).order)
          order_changed = true;
      }
      if (order_changed)
        mark(map, ChangeKind::kOrderChanged);
      if (!formed && !broken && !order_changed)
        mark(map, ChangeKind::kOrderChanged);  // unmapped-neighbor swap
    }
  }

  for (const auto &[map, pref] : rxn.product_map_index)
    if (rxn.reactant_map_index.count(map) == 0)
      mark(map, ChangeKind::kAppeared);

  if (dyn.map_numbers.empty())
    throw EmptyCenterError("both sides are identical on mapped atoms");
  return dyn;
}

}  // namespace chemcensor
