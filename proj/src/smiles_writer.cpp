//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chemcensor/canonical.hpp"
#include "chemcensor/elements.hpp"
#include "chemcensor/errors.hpp"
#include "chemcensor/smiles.hpp"

namespace chemcensor {
namespace {

BondDir flip(BondDir d) {
  switch (d) {
  case BondDir::kUp:
    return BondDir::kDown;
  case BondDir::kDown:
    return BondDir::kUp;
  default:
    return BondDir::kNone;
  }
}

int permutation_parity(std::vector<int> from, const std::vector<int> &to) {
  int parity = 1;
  for (size_t i = 0; i < to.size(); ++i) {
    if (from[i] == to[i])
      continue;
    auto it = std::find(from.begin() + static_cast<long>(i) + 1, from.end(),
                        to[i]);
    std::iter_swap(from.begin() + static_cast<long>(i), it);
    parity = -parity;
  }
  return parity;
}

class Writer {
public:
  Writer(const Molecule &mol, const SmilesWriteOptions &opt)
      : mol_(mol), opt_(opt) { }

  std::string run();
  // emit with an externally chosen priority ordering
  std::string run_with(std::vector<int> priorities);

private:
  const Molecule &mol_;
  const SmilesWriteOptions &opt_;

  std::vector<int> priority_;     // visit priority per atom (lower first)
  std::vector<int> visit_index_;  // discovery order within the whole write
  std::vector<int> parent_bond_;
  std::vector<std::vector<std::pair<int, int>>> tree_children_;  // (bond, atom)
  struct Closure {
    int bond;
    int opener;
    int closer;
    int digit = -1;
  };
  std::vector<Closure> closures_;
  std::vector<int> closure_of_bond_;
  std::vector<BondDir> assigned_dir_;  // toward bond.b
  int counter_ = 0;

  void dfs(int u, int pbond);
  void assign_digits(const std::vector<int> &component_starts);
  void assign_stereo_directions();
  int side_of(int carrier_bond, int z) const;  // 0 below, 1 above
  std::string bond_token(int bond, int from) const;
  std::string atom_token(int u, const std::vector<int> &written_neighbors,
                         bool h_in_written) const;
  void emit(int u, std::string &out) const;
};

void Writer::dfs(int u, int pbond) {
  visit_index_[static_cast<size_t>(u)] = counter_++;
  parent_bond_[static_cast<size_t>(u)] = pbond;
  std::vector<int> order = mol_.bonds_of(u);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return priority_[static_cast<size_t>(mol_.bond(x).other(u))] <
           priority_[static_cast<size_t>(mol_.bond(y).other(u))];
  });
  for (int bi : order) {
    if (bi == pbond)
      continue;
    int v = mol_.bond(bi).other(u);
    if (visit_index_[static_cast<size_t>(v)] >= 0) {
      if (closure_of_bond_[static_cast<size_t>(bi)] < 0) {
        Closure c;
        c.bond = bi;
        c.opener = v;
        c.closer = u;
        closure_of_bond_[static_cast<size_t>(bi)] =
            static_cast<int>(closures_.size());
        closures_.push_back(c);
      }
      continue;
    }
    tree_children_[static_cast<size_t>(u)].emplace_back(bi, v);
    dfs(v, bi);
  }
}

void Writer::assign_digits(const std::vector<int> &atoms_in_visit_order) {
  std::set<int> free_digits;
  for (int d = 1; d <= 99; ++d)
    free_digits.insert(d);
  // openings at an atom ordered by when the matching closer is reached
  std::vector<std::vector<int>> opens(static_cast<size_t>(mol_.num_atoms()));
  for (size_t ci = 0; ci < closures_.size(); ++ci)
    opens[static_cast<size_t>(closures_[ci].opener)].push_back(
        static_cast<int>(ci));
  for (auto &v : opens)
    std::sort(v.begin(), v.end(), [&](int x, int y) {
      return visit_index_[static_cast<size_t>(closures_[static_cast<size_t>(
                 x)].closer)] <
             visit_index_[static_cast<size_t>(closures_[static_cast<size_t>(
                 y)].closer)];
    });

  for (int u : atoms_in_visit_order) {
    for (size_t ci = 0; ci < closures_.size(); ++ci)
      if (closures_[ci].closer == u)
        free_digits.insert(closures_[ci].digit);
    for (int ci : opens[static_cast<size_t>(u)]) {
      if (free_digits.empty())
        throw SyntaxError("too many simultaneously open ring closures");
      int d = *free_digits.begin();
      free_digits.erase(free_digits.begin());
      closures_[static_cast<size_t>(ci)].digit = d;
    }
  }
}

int Writer::side_of(int carrier_bond, int z) const {
  const Bond &c = mol_.bond(carrier_bond);
  BondDir d = assigned_dir_[static_cast<size_t>(carrier_bond)];
  BondDir toward_z = c.b == z ? d : flip(d);
  return toward_z == BondDir::kUp ? 0 : 1;
}

void Writer::assign_stereo_directions() {
  assigned_dir_.assign(static_cast<size_t>(mol_.num_bonds()), BondDir::kNone);

  std::vector<int> order(mol_.stereo_bonds.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const Bond &bx = mol_.bond(mol_.stereo_bonds[static_cast<size_t>(x)].bond);
    const Bond &by = mol_.bond(mol_.stereo_bonds[static_cast<size_t>(y)].bond);
    int vx = std::min(visit_index_[static_cast<size_t>(bx.a)],
                      visit_index_[static_cast<size_t>(bx.b)]);
    int vy = std::min(visit_index_[static_cast<size_t>(by.a)],
                      visit_index_[static_cast<size_t>(by.b)]);
    return vx < vy;
  });

  for (int si : order) {
    const BondStereo &bs = mol_.stereo_bonds[static_cast<size_t>(si)];
    const Bond &db = mol_.bond(bs.bond);

    // Orient the bond along the traversal so the emitted phase depends only
    // on the visit order, not on parse-time endpoint storage.
    int x = db.a, y = db.b;
    int ref_x = bs.ref_a, ref_y = bs.ref_b;
    if (visit_index_[static_cast<size_t>(y)] <
        visit_index_[static_cast<size_t>(x)]) {
      std::swap(x, y);
      std::swap(ref_x, ref_y);
    }

    // Usable carrier: a single, non-closure bond from the given end.
    auto pick_carrier = [&](int z) {
      int assigned = -1, best = -1;
      for (int bi : mol_.bonds_of(z)) {
        const Bond &c = mol_.bond(bi);
        if (bi == bs.bond || c.order != BondOrder::kSingle)
          continue;
        if (closure_of_bond_[static_cast<size_t>(bi)] >= 0)
          continue;
        if (assigned_dir_[static_cast<size_t>(bi)] != BondDir::kNone &&
            assigned < 0)
          assigned = bi;
        if (best < 0 ||
            priority_[static_cast<size_t>(c.other(z))] <
                priority_[static_cast<size_t>(mol_.bond(best).other(z))])
          best = bi;
      }
      return assigned >= 0 ? assigned : best;
    };
    int cx = pick_carrier(x);
    int cy = pick_carrier(y);
    if (cx < 0 || cy < 0)
      continue;  // not representable in this traversal, stereo dropped

    int u = mol_.bond(cx).other(x);
    int w = mol_.bond(cy).other(y);
    bool cis = bs.cis;
    if (u != ref_x)
      cis = !cis;
    if (w != ref_y)
      cis = !cis;

    bool x_set = assigned_dir_[static_cast<size_t>(cx)] != BondDir::kNone;
    bool y_set = assigned_dir_[static_cast<size_t>(cy)] != BondDir::kNone;
    if (x_set && y_set)
      continue;  // already constrained by neighboring stereo bonds
    if (!x_set && !y_set) {
      // place u below x: toward_x = up
      assigned_dir_[static_cast<size_t>(cx)] =
          mol_.bond(cx).b == x ? BondDir::kUp : BondDir::kDown;
      x_set = true;
    }
    if (!y_set) {
      int side_u = side_of(cx, x);
      int side_w = cis ? side_u : 1 - side_u;
      BondDir toward_y = side_w == 0 ? BondDir::kUp : BondDir::kDown;
      assigned_dir_[static_cast<size_t>(cy)] =
          mol_.bond(cy).b == y ? toward_y : flip(toward_y);
    } else {
      int side_w = side_of(cy, y);
      int side_u = cis ? side_w : 1 - side_w;
      BondDir toward_x = side_u == 0 ? BondDir::kUp : BondDir::kDown;
      assigned_dir_[static_cast<size_t>(cx)] =
          mol_.bond(cx).b == x ? toward_x : flip(toward_x);
    }
  }
}

std::string Writer::bond_token(int bond, int from) const {
  const Bond &b = mol_.bond(bond);
  switch (b.order) {
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    return "";
  case BondOrder::kSingle:
    break;
  }
  BondDir d = assigned_dir_[static_cast<size_t>(bond)];
  if (d != BondDir::kNone) {
    BondDir toward_to = b.a == from ? d : flip(d);
    return toward_to == BondDir::kUp ? "/" : "\\";
  }
  if (mol_.atom(b.a).aromatic && mol_.atom(b.b).aromatic)
    return "-";
  return "";
}

std::string Writer::atom_token(int u, const std::vector<int> &written_neighbors,
                               bool h_in_written) const {
  const Atom &a = mol_.atom(u);
  bool include_map = opt_.include_maps && a.map_number != 0;

  bool bare_ok = a.isotope == 0 && a.formal_charge == 0 && !include_map &&
                 a.chirality == Chirality::kNone &&
                 (is_organic_subset(a.atomic_num) ||
                  (a.atomic_num == kWildcardAtom && a.explicit_h == 0));
  if (bare_ok && a.atomic_num != kWildcardAtom) {
    int default_h;
    if (a.aromatic) {
      default_h = aromatic_implicit_hydrogens(a.atomic_num, mol_.degree(u));
    } else {
      int sum = 0;
      for (int bi : mol_.bonds_of(u)) {
        switch (mol_.bond(bi).order) {
        case BondOrder::kSingle:
        case BondOrder::kAromatic:
          sum += 1;
          break;
        case BondOrder::kDouble:
          sum += 2;
          break;
        case BondOrder::kTriple:
          sum += 3;
          break;
        }
      }
      default_h = implicit_hydrogens(a.atomic_num, sum);
    }
    bare_ok = default_h == a.explicit_h;
  }

  std::string sym(a.symbol());
  if (a.aromatic)
    for (char &ch : sym)
      ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));

  if (bare_ok)
    return sym;

  std::string out = "[";
  if (a.isotope > 0)
    out += std::to_string(a.isotope);
  out += sym;
  if (a.chirality != Chirality::kNone) {
    std::vector<int> written = written_neighbors;
    if (h_in_written) {
      // hydrogen slot is written immediately after the parent, mirroring
      // how the parser counts it
      auto it = written.begin();
      if (!written.empty() && parent_bond_[static_cast<size_t>(u)] >= 0)
        ++it;
      written.insert(it, u);
    }
    Chirality tag = a.chirality;
    if (written.size() >= 3) {
      std::vector<int> ref = written;
      std::sort(ref.begin(), ref.end());
      if (permutation_parity(ref, written) < 0)
        tag = tag == Chirality::kCW ? Chirality::kCCW : Chirality::kCW;
      out += tag == Chirality::kCW ? "@@" : "@";
    }
  }
  if (a.explicit_h == 1)
    out += "H";
  else if (a.explicit_h > 1)
    out += "H" + std::to_string(a.explicit_h);
  if (a.formal_charge != 0) {
    out += a.formal_charge > 0 ? "+" : "-";
    int mag = std::abs(a.formal_charge);
    if (mag > 1)
      out += std::to_string(mag);
  }
  if (include_map)
    out += ":" + std::to_string(a.map_number);
  out += "]";
  return out;
}

void Writer::emit(int u, std::string &out) const {
  // closings first (ascending digit), then openings in allocation order
  std::vector<const Closure *> closing, opening;
  for (const Closure &c : closures_) {
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
            [&](const Closure *x, const Closure *y) {
              return visit_index_[static_cast<size_t>(x->closer)] <
                     visit_index_[static_cast<size_t>(y->closer)];
            });

  // written neighbor order as a reparse would see it
  std::vector<int> written;
  int pbond = parent_bond_[static_cast<size_t>(u)];
  if (pbond >= 0)
    written.push_back(mol_.bond(pbond).other(u));
  const Atom &a = mol_.atom(u);
  bool h_in_written = a.chirality != Chirality::kNone && a.explicit_h > 0;
  for (const Closure *c : closing)
    written.push_back(c->opener);
  for (const Closure *c : opening)
    written.push_back(c->closer);
  for (auto [bi, v] : tree_children_[static_cast<size_t>(u)])
    written.push_back(v);

  out += atom_token(u, written, h_in_written);
  for (const Closure *c : closing) {
    if (c->digit >= 10)
      out += "%";
    out += std::to_string(c->digit);
  }
  for (const Closure *c : opening) {
    out += bond_token(c->bond, u);
    if (c->digit >= 10)
      out += "%";
    out += std::to_string(c->digit);
  }

  const auto &children = tree_children_[static_cast<size_t>(u)];
  for (size_t i = 0; i < children.size(); ++i) {
    auto [bi, v] = children[i];
    bool last = i + 1 == children.size();
    if (!last)
      out += "(";
    out += bond_token(bi, u);
    emit(v, out);
    if (!last)
      out += ")";
  }
}

std::string Writer::run() {
  std::mt19937_64 rng(opt_.seed);
  std::vector<int> priorities(static_cast<size_t>(mol_.num_atoms()));
  std::iota(priorities.begin(), priorities.end(), 0);
  switch (opt_.order) {
  case SmilesWriteOptions::Order::kCanonical:
    priorities = canonical_ranks(mol_);
    break;
  case SmilesWriteOptions::Order::kRandom:
    std::shuffle(priorities.begin(), priorities.end(), rng);
    break;
  case SmilesWriteOptions::Order::kInput:
    break;
  }
  return run_with(std::move(priorities));
}

std::string Writer::run_with(std::vector<int> priorities) {
  int n = mol_.num_atoms();
  if (n == 0)
    return "";

  std::mt19937_64 rng(opt_.seed);
  priority_ = std::move(priorities);

  visit_index_.assign(static_cast<size_t>(n), -1);
  parent_bond_.assign(static_cast<size_t>(n), -1);
  tree_children_.assign(static_cast<size_t>(n), {});
  closure_of_bond_.assign(static_cast<size_t>(mol_.num_bonds()), -1);

  // per-component start atoms: minimal priority
  std::vector<std::pair<int, int>> starts;  // (priority, atom)
  std::vector<int> comp(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (comp[static_cast<size_t>(i)] >= 0)
      continue;
    std::vector<int> stack{i};
    comp[static_cast<size_t>(i)] = i;
    int best = i;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (priority_[static_cast<size_t>(u)] <
          priority_[static_cast<size_t>(best)])
        best = u;
      for (int bi : mol_.bonds_of(u)) {
        int v = mol_.bond(bi).other(u);
        if (comp[static_cast<size_t>(v)] < 0) {
          comp[static_cast<size_t>(v)] = i;
          stack.push_back(v);
        }
      }
    }
    starts.emplace_back(priority_[static_cast<size_t>(best)], best);
  }

  std::vector<int> start_atoms;
  for (auto &[p, atom] : starts)
    start_atoms.push_back(atom);

  for (int s : start_atoms)
    dfs(s, -1);

  std::vector<int> by_visit(static_cast<size_t>(n));
  std::iota(by_visit.begin(), by_visit.end(), 0);
  std::sort(by_visit.begin(), by_visit.end(), [&](int x, int y) {
    return visit_index_[static_cast<size_t>(x)] <
           visit_index_[static_cast<size_t>(y)];
  });
  assign_digits(by_visit);
  assign_stereo_directions();

  std::vector<std::string> parts;
  for (int s : start_atoms) {
    std::string part;
    emit(s, part);
    parts.push_back(std::move(part));
  }

  if (opt_.order == SmilesWriteOptions::Order::kCanonical)
    std::sort(parts.begin(), parts.end());
  else if (opt_.order == SmilesWriteOptions::Order::kRandom)
    std::shuffle(parts.begin(), parts.end(), rng);

  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0)
      out += ".";
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string write_smiles(const Molecule &mol, const SmilesWriteOptions &opt) {
  // Stereo annotations can be mirrored by a graph automorphism (the two
  // arms of a symmetric ring, say), leaving several equivalent canonical
  // candidates; emit them all and keep the smallest string.
  bool has_stereo = !mol.stereo_bonds.empty();
  for (int i = 0; i < mol.num_atoms() && !has_stereo; ++i)
    has_stereo = mol.atom(i).chirality != Chirality::kNone;
  if (opt.order == SmilesWriteOptions::Order::kCanonical && has_stereo) {
    std::vector<std::vector<int>> candidates =
        canonical_rank_candidates(mol, 24);
    std::string best;
    for (auto &ranks : candidates) {
      std::string s = Writer(mol, opt).run_with(std::move(ranks));
      if (best.empty() || s < best)
        best = std::move(s);
    }
    return best;
  }
  return Writer(mol, opt).run();
}

std::string write_smiles(const Molecule &mol, bool canonical) {
  SmilesWriteOptions opt;
  opt.order = canonical ? SmilesWriteOptions::Order::kCanonical
                        : SmilesWriteOptions::Order::kInput;
  return write_smiles(mol, opt);
}

std::string randomize_traversal(const Molecule &mol, std::uint64_t seed) {
  SmilesWriteOptions opt;
  opt.order = SmilesWriteOptions::Order::kRandom;
  opt.seed = seed;
  return write_smiles(mol, opt);
}

}  // namespace chemcensor
