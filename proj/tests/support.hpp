//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_TESTS_SUPPORT_HPP_
#define CHEMCENSOR_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chemcensor/molecule.hpp"
#include "chemcensor/smarts.hpp"
#include "chemcensor/smiles.hpp"

namespace cctest {

using namespace chemcensor;

// ---- diverse SMILES fixtures ----------------------------------------------

inline const std::vector<std::string> &fixture_smiles() {
  static const std::vector<std::string> fixtures = {
      "C",
      "CC",
      "CCO",
      "OCC",
      "CC(=O)O",
      "OC(C)=O",
      "CC(=O)OCC",
      "c1ccccc1",
      "c1ccccc1C(=O)O",
      "c1ccc2ccccc2c1",
      "C1CC1",
      "C1CCCCC1",
      "C1CCOC1",
      "c1ccncc1",
      "c1cc[nH]c1",
      "c1ccoc1",
      "c1ccsc1",
      "Cc1ccccc1",
      "Cc1ccc(C)cc1",
      "Clc1ccccc1",
      "Brc1ccc(N)cc1",
      "CC(C)C",
      "CC(C)(C)C",
      "CCN(CC)CC",
      "CN1CCCC1",
      "O=C(O)c1ccc(Cl)cc1",
      "N#Cc1ccccc1",
      "CC#N",
      "C=C",
      "CC=CC",
      "C/C=C/C",
      "C/C=C\\C",
      "F/C=C/F",
      "F/C=C\\F",
      "C[C@H](N)C(=O)O",
      "C[C@@H](N)C(=O)O",
      "N[C@@H](Cc1ccccc1)C(=O)O",
      "CS(=O)(=O)Cl",
      "CS(=O)(=O)Nc1ccccc1",
      "CCOC(=O)C",
      "CC(=O)NC",
      "CC(=O)Cl",
      "[NH4+].[Cl-]",
      "C[N+](C)(C)C",
      "CC(=O)[O-]",
      "O=[N+]([O-])c1ccccc1",
      "OB(O)c1ccccc1",
      "CSC",
      "CCSSCC",
      "OCC(O)CO",
      "C1COCCN1",
      "C1CCNCC1",
      "c1cnc2[nH]ccc2c1",
      "COc1ccc(CCN)cc1",
      "CC(C)Oc1ccccc1C(=O)O",
      "FC(F)(F)c1ccccc1",
      "C#Cc1ccccc1",
      "O=C1CCCCC1",
      "OC1CCCCC1",
      "C1=CC2CC1CC2",
      "CC1(C)CC(=O)CC(=O)C1",
      "[13CH4]",
      "[2H]OC",
      "Ic1ccccc1",
      "CCCCCCCCCC",
      "C1=CCCCC1",
      "C/C=C/C=C/C",
      "C(/F)=C\\Cl",
      "[O-][n+]1ccccc1",
      "c1ccc2c(c1)cc[nH]2",
      "C1[C@H]2CC[C@@H]1CC2",
      "CC(=O)O[C@@H]1CC[C@H](N)CC1",
      "O=S(=O)(c1ccccc1)N1CCOCC1",
  };
  return fixtures;
}

// Expanded pool used for the 1000-molecule round-trip oracle.
inline std::vector<std::string> fixture_smiles_large(size_t count) {
  const std::vector<std::string> cores = {
      "c1ccccc1", "c1ccncc1", "C1CCCCC1", "C1CCOC1", "c1ccoc1", "c1ccsc1",
      "c1ccc2ccccc2c1", "C1CCNCC1",
  };
  const std::vector<std::string> suffixes = {
      "C",  "CC", "O",  "N",    "Cl",     "Br",      "F",
      "OC", "CN", "C#N", "C(=O)O", "C(=O)N", "S(=O)(=O)N", "OC(=O)C",
  };
  // fragments whose last atom can take one more single bond
  const std::vector<std::string> prefixes = {
      "C", "CC", "OC", "CN", "CCO", "C(=O)O", "CS", "CCC(=O)N",
  };
  std::vector<std::string> out = fixture_smiles();
  for (size_t i = 0; out.size() < count; ++i) {
    const std::string &core = cores[i % cores.size()];
    const std::string &s1 = suffixes[(i / cores.size()) % suffixes.size()];
    const std::string &s2 =
        prefixes[(i / (cores.size() * suffixes.size())) % prefixes.size()];
    out.push_back(core + s1);
    if (out.size() < count)
      out.push_back(s2 + core + s1);
  }
  out.resize(count);
  return out;
}

// ---- brute-force graph isomorphism (small molecules) -----------------------

inline bool atoms_compatible(const Atom &a, const Atom &b) {
  return a.atomic_num == b.atomic_num && a.formal_charge == b.formal_charge &&
         a.aromatic == b.aromatic && a.explicit_h == b.explicit_h &&
         a.isotope == b.isotope;
}

inline bool graphs_isomorphic(const Molecule &a, const Molecule &b) {
  if (a.num_atoms() != b.num_atoms() || a.num_bonds() != b.num_bonds())
    return false;
  int n = a.num_atoms();
  std::vector<int> image(static_cast<size_t>(n), -1);
  std::vector<char> used(static_cast<size_t>(n), 0);

  auto extend = [&](auto &&self, int i) -> bool {
    if (i == n)
      return true;
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<size_t>(j)] ||
          !atoms_compatible(a.atom(i), b.atom(j)) ||
          a.degree(i) != b.degree(j))
        continue;
      bool ok = true;
      for (int k = 0; k < i; ++k) {
        int ab = a.bond_between(i, k);
        int bb = b.bond_between(j, image[static_cast<size_t>(k)]);
        if ((ab < 0) != (bb < 0)) {
          ok = false;
          break;
        }
        if (ab >= 0 && a.bond(ab).order != b.bond(bb).order) {
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
      image[static_cast<size_t>(i)] = -1;
    }
    return false;
  };
  return extend(extend, 0);
}

inline std::multiset<int> element_multiset(const Molecule &m) {
  std::multiset<int> out;
  for (const Atom &a : m.atoms())
    out.insert(a.atomic_num);
  return out;
}

inline std::multiset<int> degree_sequence(const Molecule &m) {
  std::multiset<int> out;
  for (int i = 0; i < m.num_atoms(); ++i)
    out.insert(m.degree(i));
  return out;
}

// ---- brute-force substructure enumeration ----------------------------------

inline std::vector<std::vector<int>> brute_force_matches(
    const QueryPattern &pattern, const Molecule &mol) {
  int np = pattern.num_atoms();
  int nm = mol.num_atoms();
  std::vector<std::vector<int>> all;
  std::vector<int> image(static_cast<size_t>(np), -1);
  std::vector<char> used(static_cast<size_t>(nm), 0);

  auto extend = [&](auto &&self, int i) -> void {
    if (i == np) {
      for (const QueryBond &qb : pattern.bonds) {
        int mb = mol.bond_between(image[static_cast<size_t>(qb.a)],
                                  image[static_cast<size_t>(qb.b)]);
        if (mb < 0 || !bond_matches(qb.query, mol, mb))
          return;
      }
      all.push_back(image);
      return;
    }
    for (int j = 0; j < nm; ++j) {
      if (used[static_cast<size_t>(j)] ||
          !atom_matches(pattern.atoms[static_cast<size_t>(i)], mol, j))
        continue;
      image[static_cast<size_t>(i)] = j;
      used[static_cast<size_t>(j)] = 1;
      self(self, i + 1);
      used[static_cast<size_t>(j)] = 0;
      image[static_cast<size_t>(i)] = -1;
    }
  };
  extend(extend, 0);

  std::sort(all.begin(), all.end());
  std::vector<std::vector<int>> unique;
  std::set<std::vector<int>> seen;
  for (auto &m : all) {
    std::vector<int> key = m;
    std::sort(key.begin(), key.end());
    if (seen.insert(std::move(key)).second)
      unique.push_back(std::move(m));
  }
  return unique;
}

// ---- synthetic mapped-reaction corpus ---------------------------------------

// Substituent fragments written attach-last, with %d placeholders for map
// numbers (renumbered per slot).
inline std::string renumber_fragment(const std::string &fragment, int base) {
  std::string out;
  for (size_t i = 0; i < fragment.size(); ++i) {
    if (fragment[i] == ':' && i + 1 < fragment.size() &&
        std::isdigit(static_cast<unsigned char>(fragment[i + 1]))) {
      size_t j = i + 1;
      int v = 0;
      while (j < fragment.size() &&
             std::isdigit(static_cast<unsigned char>(fragment[j]))) {
        v = v * 10 + (fragment[j] - '0');
        ++j;
      }
      out += ":" + std::to_string(v + base);
      i = j - 1;
    } else {
      out += fragment[i];
    }
  }
  return out;
}

struct ReactionTemplate {
  std::string name;
  std::string pattern;  // with {A} and optional {B} slots
};

inline const std::vector<ReactionTemplate> &reaction_templates() {
  static const std::vector<ReactionTemplate> templates = {
      {"esterification",
       "{A}[C:1](=[O:2])[OH:3].{B}[OH:4]>>{A}[C:1](=[O:2])[O:4]{B}"},
      {"amide_coupling",
       "{A}[C:1](=[O:2])[OH:3].{B}[NH2:4]>>{A}[C:1](=[O:2])[NH:4]{B}"},
      {"acyl_chloride_amide",
       "{A}[C:1](=[O:2])[Cl:3].{B}[NH2:4]>>{A}[C:1](=[O:2])[NH:4]{B}"},
      {"sn2_amine",
       "{A}[CH2:1][Br:2].{B}[NH2:3]>>{A}[CH2:1][NH:3]{B}"},
      {"williamson_ether",
       "{A}[CH2:1][Br:2].{B}[OH:3]>>{A}[CH2:1][O:3]{B}"},
      {"nitrile_displacement",
       "{A}[CH2:1][Br:2].[C-:3]#[N:4]>>{A}[CH2:1][C:3]#[N:4]"},
      {"alcohol_oxidation", "{A}[CH2:1][OH:2]>>{A}[CH:1]=[O:2]"},
      {"alkene_hydrogenation",
       "{A}[CH:1]=[CH:2]{B}>>{A}[CH2:1][CH2:2]{B}"},
      {"sulfonamide",
       "{A}[S:1](=[O:2])(=[O:3])[Cl:4].{B}[NH2:5]>>"
       "{A}[S:1](=[O:2])(=[O:3])[NH:5]{B}"},
      {"reductive_amination",
       "{A}[C:1](=[O:2])[CH3:5].{B}[NH2:3]>>{A}[CH:1]([CH3:5])[NH:3]{B}"},
  };
  return templates;
}

inline const std::vector<std::string> &substituent_pool() {
  static const std::vector<std::string> pool = {
      "[CH3:90]",
      "[CH3:90][CH2:91]",
      "[CH3:90][CH2:91][CH2:92]",
      "[CH3:90][CH:91]([CH3:92])",
      "[cH:90]1[cH:91][cH:92][cH:93][cH:94][c:95]1",
      "[CH3:90][c:91]1[cH:92][cH:93][c:94]([cH:95][cH:96]1)",
      "[Cl:90][c:91]1[cH:92][cH:93][c:94]([cH:95][cH:96]1)",
      "[cH:90]1[cH:91][cH:92][cH:93][cH:94][c:95]1[CH2:96]",
      "[CH3:90][O:91][CH2:92][CH2:93]",
      "[N:90]#[C:91][CH2:92][CH2:93]",
      "[CH3:90][S:91][CH2:92][CH2:93]",
      "[F:90][C:91]([F:92])([F:93])[CH2:94]",
  };
  return pool;
}

inline std::string instantiate_template(const ReactionTemplate &tpl,
                                        const std::string &frag_a,
                                        const std::string &frag_b) {
  std::string text = tpl.pattern;
  auto replace_all = [&](const std::string &slot, const std::string &frag) {
    size_t pos;
    while ((pos = text.find(slot)) != std::string::npos)
      text.replace(pos, slot.size(), frag);
  };
  replace_all("{A}", renumber_fragment(frag_a, 10));
  replace_all("{B}", renumber_fragment(frag_b, 30));
  return text;
}

// count fully-mapped synthetic reactions, optionally tab-joined with a doc
// reference column
inline std::vector<std::string> synthetic_corpus(size_t count,
                                                 bool with_doc_refs) {
  const auto &templates = reaction_templates();
  const auto &pool = substituent_pool();
  std::vector<std::string> out;
  size_t i = 0;
  while (out.size() < count) {
    const ReactionTemplate &tpl = templates[i % templates.size()];
    const std::string &a = pool[(i / templates.size()) % pool.size()];
    const std::string &b =
        pool[(i / (templates.size() * pool.size())) % pool.size()];
    std::string rxn = instantiate_template(tpl, a, b);
    if (with_doc_refs)
      rxn += "\tDOC-" + std::to_string(i % 37);
    out.push_back(std::move(rxn));
    ++i;
  }
  return out;
}

// ---- compact FG library for unit fixtures -----------------------------------

inline std::vector<std::pair<std::string, std::string>> mini_fg_entries() {
  return {
      {"carbonyl", "C=O"},
      {"hydroxyl", "[OH]"},
      {"primary amine", "[NH2]"},
      {"nitrile", "N#C"},
      {"ether", "[C;!R][O;D2][C;!R]"},
      {"aryl chloride", "Clc"},
      {"sulfonyl", "S(=O)=O"},
      {"trifluoromethyl", "FC(F)F"},
  };
}

}  // namespace cctest

#endif  // CHEMCENSOR_TESTS_SUPPORT_HPP_
