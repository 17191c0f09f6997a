//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "chemcensor/canonical.hpp"
#include "chemcensor/elements.hpp"
#include "chemcensor/errors.hpp"

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

// Parity (+1 even, -1 odd) of the permutation taking `from` to `to`.
// Both sequences hold the same distinct values.
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

struct PendingBond {
  bool has_order = false;
  BondOrder order = BondOrder::kSingle;
  BondDir dir = BondDir::kNone;

  bool any() const { return has_order || dir != BondDir::kNone; }
  void clear() { *this = PendingBond{}; }
};

struct OpenRing {
  int atom = -1;
  PendingBond spec;
  size_t worder_slot = 0;
};

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) { }

  Molecule run();

private:
  std::string_view text_;
  size_t pos_ = 0;
  Molecule mol_;
  std::vector<bool> bracket_;
  // Written neighbor order per atom; -1 is the in-bracket hydrogen slot,
  // values <= -2 are unresolved ring-closure placeholders (-2 - digit).
  std::vector<std::vector<int>> worder_;
  int prev_ = -1;
  PendingBond pending_;
  std::vector<int> branch_stack_;
  std::map<int, OpenRing> open_rings_;

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  [[noreturn]] void fail(const std::string &msg) const {
    throw SyntaxError(msg + " at position " + std::to_string(pos_) + " in '" +
                      std::string(text_) + "'");
  }

  int read_digits(int max_chars);
  void new_atom(Atom atom, bool bracketed);
  void close_or_open_ring(int digit);
  void parse_bracket_atom();
  void parse_organic_atom(char c);
  void resolve_hydrogens();
  void normalize_chirality();
  void derive_bond_stereo();
};

int Parser::read_digits(int max_chars) {
  int value = 0;
  int used = 0;
  while (!done() && std::isdigit(static_cast<unsigned char>(peek())) &&
         used < max_chars) {
    value = value * 10 + (take() - '0');
    ++used;
  }
  return used == 0 ? -1 : value;
}

void Parser::new_atom(Atom atom, bool bracketed) {
  int idx = mol_.add_atom(atom);
  bracket_.push_back(bracketed);
  worder_.emplace_back();
  if (prev_ >= 0) {
    BondOrder order;
    if (pending_.has_order) {
      order = pending_.order;
    } else if (pending_.dir != BondDir::kNone) {
      order = BondOrder::kSingle;
    } else {
      order = (mol_.atom(prev_).aromatic && atom.aromatic)
                  ? BondOrder::kAromatic
                  : BondOrder::kSingle;
    }
    int bi = mol_.add_bond(prev_, idx, order);
    mol_.bond(bi).dir = pending_.dir;  // written prev -> idx, so toward b
    worder_[static_cast<size_t>(prev_)].push_back(idx);
    worder_[static_cast<size_t>(idx)].push_back(prev_);
  } else if (pending_.any()) {
    fail("bond symbol with no preceding atom");
  }
  if (bracketed && atom.explicit_h > 0)
    worder_[static_cast<size_t>(idx)].push_back(-1);
  pending_.clear();
  prev_ = idx;
}

void Parser::close_or_open_ring(int digit) {
  if (prev_ < 0)
    fail("ring closure digit with no preceding atom");
  auto it = open_rings_.find(digit);
  if (it == open_rings_.end()) {
    OpenRing open;
    open.atom = prev_;
    open.spec = pending_;
    open.worder_slot = worder_[static_cast<size_t>(prev_)].size();
    worder_[static_cast<size_t>(prev_)].push_back(-2 - digit);
    open_rings_.emplace(digit, open);
    pending_.clear();
    return;
  }

  OpenRing open = it->second;
  open_rings_.erase(it);
  if (open.atom == prev_)
    fail("ring closure to the same atom");

  BondOrder order;
  bool have_open = open.spec.has_order;
  bool have_close = pending_.has_order;
  if (have_open && have_close && open.spec.order != pending_.order)
    fail("conflicting ring-bond orders for closure " + std::to_string(digit));
  if (have_open || have_close) {
    order = have_open ? open.spec.order : pending_.order;
  } else if (open.spec.dir != BondDir::kNone ||
             pending_.dir != BondDir::kNone) {
    order = BondOrder::kSingle;
  } else {
    order = (mol_.atom(open.atom).aromatic && mol_.atom(prev_).aromatic)
                ? BondOrder::kAromatic
                : BondOrder::kSingle;
  }

  // Bond stored as (open -> close); each written symbol reads toward the
  // partner, so the closing-site symbol flips.
  BondDir dir = BondDir::kNone;
  BondDir from_open = open.spec.dir;
  BondDir from_close = flip(pending_.dir);
  if (from_open != BondDir::kNone && from_close != BondDir::kNone &&
      from_open != from_close)
    fail("conflicting ring-bond directions for closure " +
         std::to_string(digit));
  dir = from_open != BondDir::kNone ? from_open : from_close;

  int bi = mol_.add_bond(open.atom, prev_, order);
  mol_.bond(bi).dir = dir;
  worder_[static_cast<size_t>(open.atom)][open.worder_slot] = prev_;
  worder_[static_cast<size_t>(prev_)].push_back(open.atom);
  pending_.clear();
}

void Parser::parse_bracket_atom() {
  Atom atom;
  atom.atomic_num = -1;
  take();  // '['

  int isotope = read_digits(3);
  if (isotope >= 0)
    atom.isotope = isotope;

  if (done())
    fail("unterminated bracket atom");

  // Element symbol: longest valid match wins; lowercase means aromatic.
  char c = peek();
  if (c == '*') {
    take();
    atom.atomic_num = kWildcardAtom;
  } else if (std::islower(static_cast<unsigned char>(c))) {
    std::string two;
    two += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (pos_ + 1 < text_.size() &&
        std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
      std::string cand = two + std::string(1, text_[pos_ + 1]);
      int z = atomic_number(cand);
      if (z >= 0 && can_be_aromatic(z)) {
        take();
        take();
        atom.atomic_num = z;
        atom.aromatic = true;
      }
    }
    if (atom.atomic_num < 0) {
      int z = atomic_number(two);
      if (z < 0 || !can_be_aromatic(z))
        fail(std::string("unknown aromatic symbol '") + c + "'");
      take();
      atom.atomic_num = z;
      atom.aromatic = true;
    }
  } else if (std::isupper(static_cast<unsigned char>(c))) {
    std::string sym(1, take());
    if (!done() && std::islower(static_cast<unsigned char>(peek()))) {
      std::string cand = sym + std::string(1, peek());
      if (atomic_number(cand) >= 0) {
        take();
        sym = cand;
      }
    }
    int z = atomic_number(sym);
    if (z < 0)
      fail("unknown element symbol '" + sym + "'");
    atom.atomic_num = z;
  } else {
    fail(std::string("unexpected character '") + c + "' in bracket atom");
  }

  if (!done() && peek() == '@') {
    take();
    if (!done() && peek() == '@') {
      take();
      atom.chirality = Chirality::kCW;
    } else {
      atom.chirality = Chirality::kCCW;
    }
    if (!done() && std::isupper(static_cast<unsigned char>(peek())) &&
        peek() != 'H')
      throw UnsupportedFeatureError("extended chirality class in '" +
                                    std::string(text_) + "'");
  }

  if (!done() && peek() == 'H') {
    take();
    int count = read_digits(2);
    atom.explicit_h = count < 0 ? 1 : count;
  }

  if (!done() && (peek() == '+' || peek() == '-')) {
    char sign = take();
    int magnitude = read_digits(2);
    if (magnitude < 0) {
      magnitude = 1;
      while (!done() && peek() == sign) {
        take();
        ++magnitude;
      }
    }
    atom.formal_charge = sign == '+' ? magnitude : -magnitude;
  }

  if (!done() && peek() == ':') {
    take();
    int map = read_digits(5);
    if (map < 0)
      fail("missing atom-map number after ':'");
    atom.map_number = map;
  }

  if (done() || take() != ']')
    fail("unterminated bracket atom");

  new_atom(atom, true);
}

void Parser::parse_organic_atom(char c) {
  Atom atom;
  if (c == '*') {
    take();
    atom.atomic_num = kWildcardAtom;
    new_atom(atom, false);
    return;
  }
  if (std::isupper(static_cast<unsigned char>(c))) {
    std::string sym(1, take());
    if ((sym == "C" && !done() && peek() == 'l') ||
        (sym == "B" && !done() && peek() == 'r'))
      sym += take();
    int z = atomic_number(sym);
    if (z < 0 || !is_organic_subset(z))
      fail("symbol '" + sym + "' needs brackets");
    atom.atomic_num = z;
    new_atom(atom, false);
    return;
  }
  // aromatic organic subset: b c n o p s
  std::string sym(1, static_cast<char>(
                         std::toupper(static_cast<unsigned char>(take()))));
  int z = atomic_number(sym);
  if (z < 0 || !is_organic_subset(z) || !can_be_aromatic(z))
    fail(std::string("unknown symbol '") + c + "'");
  atom.atomic_num = z;
  atom.aromatic = true;
  new_atom(atom, false);
}

void Parser::resolve_hydrogens() {
  for (int i = 0; i < mol_.num_atoms(); ++i) {
    if (bracket_[static_cast<size_t>(i)])
      continue;
    Atom &a = mol_.atom(i);
    if (a.atomic_num == kWildcardAtom) {
      a.explicit_h = 0;
      continue;
    }
    if (a.aromatic) {
      int base;
      switch (a.atomic_num) {
      case 6:
        base = 4;
        break;
      case 8:
      case 16:
        base = 2;
        break;
      default:
        base = 3;
        break;
      }
      if (mol_.degree(i) > base)
        throw ValenceError("aromatic " + std::string(a.symbol()) +
                           " with degree " + std::to_string(mol_.degree(i)) +
                           " in '" + std::string(text_) + "'");
      a.explicit_h = aromatic_implicit_hydrogens(a.atomic_num, mol_.degree(i));
      continue;
    }
    int sum = 0;
    for (int bi : mol_.bonds_of(i)) {
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
    int h = implicit_hydrogens(a.atomic_num, sum);
    if (h < 0)
      throw ValenceError("bond-order sum " + std::to_string(sum) +
                         " exceeds allowed valence of " +
                         std::string(a.symbol()) + " in '" +
                         std::string(text_) + "'");
    a.explicit_h = h;
  }
}

void Parser::normalize_chirality() {
  for (int i = 0; i < mol_.num_atoms(); ++i) {
    Atom &a = mol_.atom(i);
    if (a.chirality == Chirality::kNone)
      continue;
    std::vector<int> written = worder_[static_cast<size_t>(i)];
    for (int &v : written)
      if (v == -1)
        v = i;  // hydrogen rides under the owner's index
    if (written.size() < 3) {
      a.chirality = Chirality::kNone;
      continue;
    }
    std::vector<int> ref = written;
    std::sort(ref.begin(), ref.end());
    if (permutation_parity(ref, written) < 0)
      a.chirality =
          a.chirality == Chirality::kCW ? Chirality::kCCW : Chirality::kCW;
  }
}

void Parser::derive_bond_stereo() {
  for (int bi = 0; bi < mol_.num_bonds(); ++bi) {
    const Bond &b = mol_.bond(bi);
    if (b.order != BondOrder::kDouble)
      continue;
    // side: kUp toward the atom means the neighbor sits below it.
    auto directed_neighbors = [&](int z) {
      std::vector<std::pair<int, int>> out;  // (neighbor, side: 0 below/1 above)
      for (int nb : mol_.bonds_of(z)) {
        const Bond &c = mol_.bond(nb);
        if (nb == bi || c.dir == BondDir::kNone ||
            c.order != BondOrder::kSingle)
          continue;
        BondDir toward_z = c.b == z ? c.dir : flip(c.dir);
        out.emplace_back(c.other(z), toward_z == BondDir::kUp ? 0 : 1);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    auto left = directed_neighbors(b.a);
    auto right = directed_neighbors(b.b);
    if (left.empty() || right.empty())
      continue;
    if (left.size() == 2 && left[0].second == left[1].second)
      continue;  // contradictory input, drop stereo
    if (right.size() == 2 && right[0].second == right[1].second)
      continue;
    BondStereo bs;
    bs.bond = bi;
    bs.ref_a = left[0].first;
    bs.ref_b = right[0].first;
    bs.cis = left[0].second == right[0].second;
    mol_.stereo_bonds.push_back(bs);
  }
}

Molecule Parser::run() {
  while (!done() && std::isspace(static_cast<unsigned char>(text_.back())))
    text_.remove_suffix(1);

  if (text_.empty())
    throw SyntaxError("empty SMILES");

  while (!done()) {
    char c = peek();
    if (c == '(') {
      take();
      if (prev_ < 0)
        fail("branch with no preceding atom");
      if (pending_.any())
        fail("bond symbol before branch open");
      branch_stack_.push_back(prev_);
    } else if (c == ')') {
      take();
      if (branch_stack_.empty())
        fail("unmatched ')'");
      if (pending_.any())
        fail("dangling bond symbol before ')'");
      prev_ = branch_stack_.back();
      branch_stack_.pop_back();
    } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' ||
               c == '\\') {
      if (pending_.any())
        fail("two consecutive bond symbols");
      take();
      switch (c) {
      case '-':
        pending_.has_order = true;
        pending_.order = BondOrder::kSingle;
        break;
      case '=':
        pending_.has_order = true;
        pending_.order = BondOrder::kDouble;
        break;
      case '#':
        pending_.has_order = true;
        pending_.order = BondOrder::kTriple;
        break;
      case ':':
        pending_.has_order = true;
        pending_.order = BondOrder::kAromatic;
        break;
      case '/':
        pending_.dir = BondDir::kUp;
        break;
      case '\\':
        pending_.dir = BondDir::kDown;
        break;
      }
    } else if (c == '.') {
      take();
      if (pending_.any())
        fail("bond symbol before '.'");
      if (!branch_stack_.empty())
        fail("'.' inside a branch");
      if (prev_ < 0)
        fail("empty component before '.'");
      prev_ = -1;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      take();
      close_or_open_ring(c - '0');
    } else if (c == '%') {
      take();
      int digit = read_digits(2);
      if (digit < 10)
        fail("'%' ring closure needs two digits");
      close_or_open_ring(digit);
    } else if (c == '[') {
      parse_bracket_atom();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
      parse_organic_atom(c);
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  if (!branch_stack_.empty())
    fail("unclosed branch");
  if (!open_rings_.empty())
    fail("unclosed ring closure " +
         std::to_string(open_rings_.begin()->first));
  if (pending_.any())
    fail("dangling bond symbol at end of input");
  if (prev_ < 0 && mol_.num_atoms() == 0)
    fail("no atoms");

  resolve_hydrogens();
  normalize_chirality();
  mol_.source_text = std::string(text_);
  mol_.finalize();
  derive_bond_stereo();

  std::set<int> seen_maps;
  for (const Atom &a : mol_.atoms()) {
    if (a.map_number == 0)
      continue;
    if (!seen_maps.insert(a.map_number).second)
      throw MapError("duplicate atom map " + std::to_string(a.map_number) +
                     " in '" + std::string(text_) + "'");
  }
  return mol_;
}

}  // namespace

Molecule parse_smiles(std::string_view text) {
  size_t start = text.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos)
    throw SyntaxError("empty SMILES");
  return Parser(text.substr(start)).run();
}

int stereo_relation(const Molecule &mol, int bond_idx, int na, int nb) {
  for (const BondStereo &bs : mol.stereo_bonds) {
    if (bs.bond != bond_idx)
      continue;
    bool cis = bs.cis;
    if (na != bs.ref_a)
      cis = !cis;
    if (nb != bs.ref_b)
      cis = !cis;
    return cis ? 1 : -1;
  }
  return 0;
}

}  // namespace chemcensor
