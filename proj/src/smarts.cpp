//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/smarts.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "chemcensor/elements.hpp"
#include "chemcensor/errors.hpp"

namespace chemcensor {

void QueryPattern::rebuild_adjacency() {
  adjacency_.assign(atoms.size(), {});
  for (size_t i = 0; i < bonds.size(); ++i) {
    adjacency_[static_cast<size_t>(bonds[i].a)].push_back(
        static_cast<int>(i));
    adjacency_[static_cast<size_t>(bonds[i].b)].push_back(
        static_cast<int>(i));
  }
}

namespace {

AtomExpr prim(AtomExpr::Prim p, int value = 0) {
  AtomExpr e;
  e.kind = AtomExpr::Kind::kPrim;
  e.prim = p;
  e.value = value;
  return e;
}

AtomExpr combine(AtomExpr::Kind kind, std::vector<AtomExpr> children) {
  if (children.size() == 1)
    return children[0];
  AtomExpr e;
  e.kind = kind;
  e.children = std::move(children);
  return e;
}

class SmartsParser {
public:
  explicit SmartsParser(std::string_view text) : text_(text) { }

  QueryPattern run();

private:
  std::string_view text_;
  size_t pos_ = 0;
  QueryPattern pat_;
  int prev_ = -1;
  bool pending_set_ = false;
  BondQuery pending_ = BondQuery::kDefault;
  std::vector<int> branch_stack_;
  struct OpenRing {
    int atom;
    bool has_bond;
    BondQuery query;
  };
  std::map<int, OpenRing> open_rings_;

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  [[noreturn]] void fail(const std::string &msg) const {
    throw SyntaxError(msg + " at position " + std::to_string(pos_) +
                      " in SMARTS '" + std::string(text_) + "'");
  }
  [[noreturn]] void unsupported(const std::string &what) const {
    throw UnsupportedFeatureError(what + " in SMARTS '" + std::string(text_) +
                                  "'");
  }

  int read_int(int fallback);
  void add_query_atom(AtomExpr expr);
  void ring_digit(int digit);
  AtomExpr parse_bracket_expr();
  AtomExpr parse_expr_low();
  AtomExpr parse_expr_or();
  AtomExpr parse_expr_and();
  AtomExpr parse_expr_not();
  AtomExpr parse_primitive();
  bool primitive_ahead() const;
};

int SmartsParser::read_int(int fallback) {
  if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
    return fallback;
  int v = 0;
  while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
    v = v * 10 + (take() - '0');
  return v;
}

void SmartsParser::add_query_atom(AtomExpr expr) {
  pat_.atoms.push_back(std::move(expr));
  int idx = static_cast<int>(pat_.atoms.size()) - 1;
  if (prev_ >= 0) {
    QueryBond qb;
    qb.a = prev_;
    qb.b = idx;
    qb.query = pending_set_ ? pending_ : BondQuery::kDefault;
    pat_.bonds.push_back(qb);
  } else if (pending_set_) {
    fail("bond expression with no preceding atom");
  }
  pending_set_ = false;
  prev_ = idx;
}

void SmartsParser::ring_digit(int digit) {
  if (prev_ < 0)
    fail("ring closure with no preceding atom");
  auto it = open_rings_.find(digit);
  if (it == open_rings_.end()) {
    open_rings_[digit] = {prev_, pending_set_, pending_};
    pending_set_ = false;
    return;
  }
  OpenRing open = it->second;
  open_rings_.erase(it);
  if (open.atom == prev_)
    fail("ring closure to the same atom");
  BondQuery q = BondQuery::kDefault;
  if (open.has_bond && pending_set_ && open.query != pending_)
    fail("conflicting ring-bond expressions");
  if (open.has_bond)
    q = open.query;
  else if (pending_set_)
    q = pending_;
  QueryBond qb;
  qb.a = open.atom;
  qb.b = prev_;
  qb.query = q;
  pat_.bonds.push_back(qb);
  pending_set_ = false;
}

bool SmartsParser::primitive_ahead() const {
  if (done())
    return false;
  char c = peek();
  return std::isalnum(static_cast<unsigned char>(c)) || c == '*' ||
         c == '#' || c == '+' || c == '-' || c == '@' || c == '$';
}

AtomExpr SmartsParser::parse_primitive() {
  char c = peek();
  if (c == '$')
    unsupported("recursive SMARTS");
  if (c == '@')
    unsupported("chirality constraint");
  if (c == '*') {
    take();
    return prim(AtomExpr::Prim::kAny);
  }
  if (c == '#') {
    take();
    int z = read_int(-1);
    if (z < 0 || z > kMaxAtomicNum)
      fail("bad atomic number after '#'");
    return prim(AtomExpr::Prim::kElement, z);
  }
  if (c == '+' || c == '-') {
    take();
    int mag = read_int(-1);
    if (mag < 0) {
      mag = 1;
      while (!done() && peek() == c) {
        take();
        ++mag;
      }
    }
    return prim(AtomExpr::Prim::kCharge, c == '+' ? mag : -mag);
  }
  if (std::isdigit(static_cast<unsigned char>(c)))
    unsupported("isotope constraint");
  if (c == 'H') {
    take();
    return prim(AtomExpr::Prim::kHCount, read_int(1));
  }
  if (c == 'R') {
    take();
    int n = read_int(-1);
    return prim(AtomExpr::Prim::kRingCount, n);
  }
  if (c == 'D') {
    take();
    return prim(AtomExpr::Prim::kDegree, read_int(1));
  }
  if (c == 'a') {
    take();
    // two-letter aromatic elements
    if (!done() && (peek() == 's')) {
      // "as" only when it forms the arsenic symbol, not "a" + "s" prim:
      // inside brackets juxtaposition is AND, so plain "as" is ambiguous.
      // Treat "as" as arsenic, matching common toolkit behavior.
      take();
      return prim(AtomExpr::Prim::kAromElement, 33);
    }
    return prim(AtomExpr::Prim::kAromatic);
  }
  if (c == 'A') {
    take();
    return prim(AtomExpr::Prim::kAliphatic);
  }
  if (c == 's') {
    take();
    if (!done() && peek() == 'e') {
      take();
      return prim(AtomExpr::Prim::kAromElement, 34);
    }
    return prim(AtomExpr::Prim::kAromElement, 16);
  }
  if (std::islower(static_cast<unsigned char>(c))) {
    std::string sym(1, static_cast<char>(
                           std::toupper(static_cast<unsigned char>(take()))));
    int z = atomic_number(sym);
    if (z < 0 || !can_be_aromatic(z))
      fail(std::string("unknown aromatic symbol '") + c + "'");
    return prim(AtomExpr::Prim::kAromElement, z);
  }
  if (std::isupper(static_cast<unsigned char>(c))) {
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
    return prim(AtomExpr::Prim::kAliphElement, z);
  }
  fail(std::string("unexpected character '") + c + "' in atom expression");
}

AtomExpr SmartsParser::parse_expr_not() {
  if (!done() && peek() == '!') {
    take();
    AtomExpr e;
    e.kind = AtomExpr::Kind::kNot;
    e.children.push_back(parse_expr_not());
    return e;
  }
  return parse_primitive();
}

AtomExpr SmartsParser::parse_expr_and() {
  std::vector<AtomExpr> terms;
  terms.push_back(parse_expr_not());
  while (!done()) {
    if (peek() == '&') {
      take();
      terms.push_back(parse_expr_not());
    } else if (peek() == '!' || primitive_ahead()) {
      terms.push_back(parse_expr_not());
    } else {
      break;
    }
  }
  return combine(AtomExpr::Kind::kAnd, std::move(terms));
}

AtomExpr SmartsParser::parse_expr_or() {
  std::vector<AtomExpr> terms;
  terms.push_back(parse_expr_and());
  while (!done() && peek() == ',') {
    take();
    terms.push_back(parse_expr_and());
  }
  return combine(AtomExpr::Kind::kOr, std::move(terms));
}

AtomExpr SmartsParser::parse_expr_low() {
  std::vector<AtomExpr> terms;
  terms.push_back(parse_expr_or());
  while (!done() && peek() == ';') {
    take();
    terms.push_back(parse_expr_or());
  }
  return combine(AtomExpr::Kind::kAnd, std::move(terms));
}

AtomExpr SmartsParser::parse_bracket_expr() {
  take();  // '['
  AtomExpr e = parse_expr_low();
  if (done() || peek() != ']')
    fail("unterminated bracket atom expression");
  take();
  return e;
}

QueryPattern SmartsParser::run() {
  if (text_.empty())
    throw SyntaxError("empty SMARTS");
  while (!done()) {
    char c = peek();
    if (c == '(') {
      if (prev_ < 0)
        unsupported("component-level grouping");
      if (pending_set_)
        fail("bond expression before branch open");
      take();
      branch_stack_.push_back(prev_);
    } else if (c == ')') {
      take();
      if (branch_stack_.empty())
        fail("unmatched ')'");
      prev_ = branch_stack_.back();
      branch_stack_.pop_back();
    } else if (c == '.') {
      unsupported("disconnected pattern ('.')");
    } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '~') {
      // '#' doubles as the atomic-number prefix but only inside brackets
      if (pending_set_)
        fail("two consecutive bond expressions");
      take();
      pending_set_ = true;
      switch (c) {
      case '-':
        pending_ = BondQuery::kSingle;
        break;
      case '=':
        pending_ = BondQuery::kDouble;
        break;
      case '#':
        pending_ = BondQuery::kTriple;
        break;
      case ':':
        pending_ = BondQuery::kAromatic;
        break;
      case '~':
        pending_ = BondQuery::kAny;
        break;
      }
    } else if (c == '/' || c == '\\') {
      unsupported("directional bond constraint");
    } else if (c == '$') {
      unsupported("recursive SMARTS");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      take();
      ring_digit(c - '0');
    } else if (c == '%') {
      take();
      int d1 = done() ? -1 : (std::isdigit(static_cast<unsigned char>(peek()))
                                  ? take() - '0'
                                  : -1);
      int d2 = done() ? -1 : (std::isdigit(static_cast<unsigned char>(peek()))
                                  ? take() - '0'
                                  : -1);
      if (d1 < 0 || d2 < 0)
        fail("'%' ring closure needs two digits");
      ring_digit(d1 * 10 + d2);
    } else if (c == '[') {
      add_query_atom(parse_bracket_expr());
    } else if (c == '*') {
      take();
      add_query_atom(prim(AtomExpr::Prim::kAny));
    } else if (c == 'a' && (pos_ + 1 >= text_.size() ||
                            text_[pos_ + 1] != 's')) {
      take();
      add_query_atom(prim(AtomExpr::Prim::kAromatic));
    } else if (c == 'A') {
      take();
      add_query_atom(prim(AtomExpr::Prim::kAliphatic));
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, take());
      if ((sym == "C" && !done() && peek() == 'l') ||
          (sym == "B" && !done() && peek() == 'r'))
        sym += take();
      int z = atomic_number(sym);
      if (z < 0 || !is_organic_subset(z))
        fail("symbol '" + sym + "' needs brackets");
      add_query_atom(prim(AtomExpr::Prim::kAliphElement, z));
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::string sym(1, static_cast<char>(
                             std::toupper(static_cast<unsigned char>(take()))));
      int z = atomic_number(sym);
      if (z < 0 || !is_organic_subset(z) || !can_be_aromatic(z))
        fail(std::string("unknown symbol '") + c + "'");
      add_query_atom(prim(AtomExpr::Prim::kAromElement, z));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      break;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  if (!branch_stack_.empty())
    fail("unclosed branch");
  if (!open_rings_.empty())
    fail("unclosed ring closure");
  if (pending_set_)
    fail("dangling bond expression");
  if (pat_.atoms.empty())
    fail("no query atoms");

  // connectivity check
  pat_.rebuild_adjacency();
  std::vector<char> seen(pat_.atoms.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  size_t count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int bi : pat_.bonds_of(u)) {
      const QueryBond &qb = pat_.bonds[static_cast<size_t>(bi)];
      int v = qb.a == u ? qb.b : qb.a;
      if (seen[static_cast<size_t>(v)] == 0) {
        seen[static_cast<size_t>(v)] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  if (count != pat_.atoms.size())
    fail("pattern graph is not connected");

  pat_.source_text = std::string(text_);
  return pat_;
}

}  // namespace

QueryPattern parse_smarts(std::string_view text) {
  size_t start = text.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos)
    throw SyntaxError("empty SMARTS");
  return SmartsParser(text.substr(start)).run();
}

bool atom_matches(const AtomExpr &expr, const Molecule &mol, int atom) {
  const Atom &a = mol.atom(atom);
  switch (expr.kind) {
  case AtomExpr::Kind::kAnd:
    for (const AtomExpr &c : expr.children)
      if (!atom_matches(c, mol, atom))
        return false;
    return true;
  case AtomExpr::Kind::kOr:
    for (const AtomExpr &c : expr.children)
      if (atom_matches(c, mol, atom))
        return true;
    return false;
  case AtomExpr::Kind::kNot:
    return !atom_matches(expr.children[0], mol, atom);
  case AtomExpr::Kind::kPrim:
    break;
  }
  switch (expr.prim) {
  case AtomExpr::Prim::kAny:
    return true;
  case AtomExpr::Prim::kAromatic:
    return a.aromatic;
  case AtomExpr::Prim::kAliphatic:
    return !a.aromatic;
  case AtomExpr::Prim::kElement:
    return a.atomic_num == expr.value;
  case AtomExpr::Prim::kAromElement:
    return a.atomic_num == expr.value && a.aromatic;
  case AtomExpr::Prim::kAliphElement:
    return a.atomic_num == expr.value && !a.aromatic;
  case AtomExpr::Prim::kCharge:
    return a.formal_charge == expr.value;
  case AtomExpr::Prim::kHCount:
    return a.explicit_h == expr.value;
  case AtomExpr::Prim::kRingCount:
    if (expr.value < 0)
      return a.in_ring;
    if (expr.value == 0)
      return !a.in_ring;
    return mol.ring_count(atom) == expr.value;
  case AtomExpr::Prim::kDegree:
    return mol.degree(atom) == expr.value;
  }
  return false;
}

bool bond_matches(BondQuery query, const Molecule &mol, int bond) {
  BondOrder order = mol.bond(bond).order;
  switch (query) {
  case BondQuery::kDefault:
    return order == BondOrder::kSingle || order == BondOrder::kAromatic;
  case BondQuery::kSingle:
    return order == BondOrder::kSingle;
  case BondQuery::kDouble:
    return order == BondOrder::kDouble;
  case BondQuery::kTriple:
    return order == BondOrder::kTriple;
  case BondQuery::kAromatic:
    return order == BondOrder::kAromatic;
  case BondQuery::kAny:
    return true;
  }
  return false;
}

std::vector<std::vector<int>> match_pattern(const QueryPattern &pattern,
                                            const Molecule &mol) {
  int np = pattern.num_atoms();
  int nm = mol.num_atoms();
  if (np == 0 || np > nm)
    return {};

  // BFS order over the connected pattern so every atom after the first has
  // an already-mapped neighbor.
  std::vector<int> order;
  std::vector<int> pos(static_cast<size_t>(np), -1);
  order.push_back(0);
  pos[0] = 0;
  for (size_t qi = 0; qi < order.size(); ++qi) {
    int u = order[qi];
    for (int bi : pattern.bonds_of(u)) {
      const QueryBond &qb = pattern.bonds[static_cast<size_t>(bi)];
      int v = qb.a == u ? qb.b : qb.a;
      if (pos[static_cast<size_t>(v)] < 0) {
        pos[static_cast<size_t>(v)] = static_cast<int>(order.size());
        order.push_back(v);
      }
    }
  }

  // per ordered atom: bonds to earlier-ordered atoms
  std::vector<std::vector<std::pair<int, BondQuery>>> anchors(
      static_cast<size_t>(np));
  for (const QueryBond &qb : pattern.bonds) {
    int pa = pos[static_cast<size_t>(qb.a)];
    int pb = pos[static_cast<size_t>(qb.b)];
    if (pa < pb)
      anchors[static_cast<size_t>(pb)].emplace_back(qb.a, qb.query);
    else
      anchors[static_cast<size_t>(pa)].emplace_back(qb.b, qb.query);
  }

  std::vector<std::vector<int>> results;
  std::vector<int> image(static_cast<size_t>(np), -1);
  std::vector<char> used(static_cast<size_t>(nm), 0);

  auto backtrack = [&](auto &&self, size_t depth) -> void {
    if (depth == order.size()) {
      results.push_back(image);
      return;
    }
    int p = order[depth];
    const auto &req = anchors[static_cast<size_t>(depth)];
    // candidates: neighbors of the first anchor's image (or all atoms)
    if (req.empty()) {
      for (int m = 0; m < nm; ++m) {
        if (used[static_cast<size_t>(m)] ||
            !atom_matches(pattern.atoms[static_cast<size_t>(p)], mol, m))
          continue;
        image[static_cast<size_t>(p)] = m;
        used[static_cast<size_t>(m)] = 1;
        self(self, depth + 1);
        used[static_cast<size_t>(m)] = 0;
        image[static_cast<size_t>(p)] = -1;
      }
      return;
    }
    int anchor_img = image[static_cast<size_t>(req[0].first)];
    for (int bi : mol.bonds_of(anchor_img)) {
      int m = mol.bond(bi).other(anchor_img);
      if (used[static_cast<size_t>(m)] ||
          !atom_matches(pattern.atoms[static_cast<size_t>(p)], mol, m))
        continue;
      bool ok = true;
      for (const auto &[q_nb, q_bond] : req) {
        int mb = mol.bond_between(image[static_cast<size_t>(q_nb)], m);
        if (mb < 0 || !bond_matches(q_bond, mol, mb)) {
          ok = false;
          break;
        }
      }
      if (!ok)
        continue;
      image[static_cast<size_t>(p)] = m;
      used[static_cast<size_t>(m)] = 1;
      self(self, depth + 1);
      used[static_cast<size_t>(m)] = 0;
      image[static_cast<size_t>(p)] = -1;
    }
  };
  backtrack(backtrack, 0);

  // dedup by matched atom set, deterministic order
  std::sort(results.begin(), results.end());
  std::vector<std::vector<int>> unique;
  std::set<std::vector<int>> seen_sets;
  for (auto &r : results) {
    std::vector<int> key = r;
    std::sort(key.begin(), key.end());
    if (seen_sets.insert(std::move(key)).second)
      unique.push_back(std::move(r));
  }
  return unique;
}

PatternScreen compute_screen(const QueryPattern &pattern) {
  PatternScreen screen;
  screen.min_atoms = pattern.num_atoms();

  // an atom expression "requires" element z when every OR branch pins z
  auto required_of = [](const AtomExpr &e, auto &&self) -> int {
    switch (e.kind) {
    case AtomExpr::Kind::kPrim:
      if (e.prim == AtomExpr::Prim::kElement ||
          e.prim == AtomExpr::Prim::kAromElement ||
          e.prim == AtomExpr::Prim::kAliphElement)
        return e.value;
      return -1;
    case AtomExpr::Kind::kAnd:
      for (const AtomExpr &c : e.children) {
        int z = self(c, self);
        if (z >= 0)
          return z;
      }
      return -1;
    case AtomExpr::Kind::kOr: {
      int common = -2;
      for (const AtomExpr &c : e.children) {
        int z = self(c, self);
        if (common == -2)
          common = z;
        else if (common != z)
          return -1;
      }
      return common == -2 ? -1 : common;
    }
    case AtomExpr::Kind::kNot:
      return -1;
    }
    return -1;
  };
  auto requires_flag = [](const AtomExpr &e, AtomExpr::Prim flag,
                          auto &&self) -> bool {
    switch (e.kind) {
    case AtomExpr::Kind::kPrim:
      if (flag == AtomExpr::Prim::kAromatic)
        return e.prim == AtomExpr::Prim::kAromatic ||
               e.prim == AtomExpr::Prim::kAromElement;
      if (flag == AtomExpr::Prim::kRingCount)
        return e.prim == AtomExpr::Prim::kRingCount && e.value != 0;
      return e.prim == flag;
    case AtomExpr::Kind::kAnd:
      for (const AtomExpr &c : e.children)
        if (self(c, flag, self))
          return true;
      return false;
    case AtomExpr::Kind::kOr:
      for (const AtomExpr &c : e.children)
        if (!self(c, flag, self))
          return false;
      return !e.children.empty();
    case AtomExpr::Kind::kNot:
      return false;
    }
    return false;
  };

  std::map<int, int> counts;
  for (const AtomExpr &e : pattern.atoms) {
    int z = required_of(e, required_of);
    if (z >= 1)
      ++counts[z];
    if (requires_flag(e, AtomExpr::Prim::kAromatic, requires_flag))
      screen.needs_aromatic = true;
    if (requires_flag(e, AtomExpr::Prim::kRingCount, requires_flag))
      screen.needs_ring = true;
  }
  for (const QueryBond &qb : pattern.bonds)
    if (qb.query == BondQuery::kAromatic)
      screen.needs_aromatic = true;
  screen.required_elements.assign(counts.begin(), counts.end());
  return screen;
}

MoleculeProfile profile_molecule(const Molecule &mol) {
  MoleculeProfile prof;
  prof.element_counts.assign(static_cast<size_t>(kMaxAtomicNum) + 1, 0);
  prof.num_atoms = mol.num_atoms();
  for (const Atom &a : mol.atoms()) {
    if (a.atomic_num >= 0 && a.atomic_num <= kMaxAtomicNum)
      ++prof.element_counts[static_cast<size_t>(a.atomic_num)];
    prof.has_aromatic = prof.has_aromatic || a.aromatic;
    prof.has_ring = prof.has_ring || a.in_ring;
  }
  return prof;
}

bool screen_passes(const PatternScreen &screen, const MoleculeProfile &prof) {
  if (screen.min_atoms > prof.num_atoms)
    return false;
  if (screen.needs_aromatic && !prof.has_aromatic)
    return false;
  if (screen.needs_ring && !prof.has_ring)
    return false;
  for (auto [z, count] : screen.required_elements)
    if (prof.element_counts[static_cast<size_t>(z)] < count)
      return false;
  return true;
}

}  // namespace chemcensor
