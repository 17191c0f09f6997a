//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/scorer.hpp"

#include <doctest.h>

#include <random>

#include "chemcensor/errors.hpp"
#include "chemcensor/smiles.hpp"
#include "support.hpp"

using namespace chemcensor;

namespace {

FGLibrary mini_library() {
  return FGLibrary::from_definitions(cctest::mini_fg_entries());
}

std::vector<CorpusRecord> records_from(const std::vector<std::string> &lines) {
  std::vector<CorpusRecord> out;
  for (const std::string &line : lines) {
    CorpusRecord rec;
    size_t tab = line.find('\t');
    rec.reaction = tab == std::string::npos ? line : line.substr(0, tab);
    if (tab != std::string::npos)
      rec.doc_ref = line.substr(tab + 1);
    out.push_back(rec);
  }
  return out;
}

const char *kEster1 =
    "[CH3:1][OH:2].[CH3:5][C:3](=[O:4])O>>[CH3:1][O:2][C:3](=[O:4])[CH3:5]";

// heptyl ester: the KB side of the distant-nitrile pair
const char *kHeptylEster =
    "[CH3:11][CH2:12][CH2:13][CH2:14][CH2:15][CH2:16][CH2:17]"
    "[C:3](=[O:4])[OH:18].[CH3:1][OH:2]>>"
    "[CH3:11][CH2:12][CH2:13][CH2:14][CH2:15][CH2:16][CH2:17]"
    "[C:3](=[O:4])[O:2][CH3:1]";

// same transformation with a terminal nitrile six bonds out: far enough to
// stay outside every level-5 shell
const char *kNitrileEster =
    "[N:10]#[C:11][CH2:12][CH2:13][CH2:14][CH2:15][CH2:16][CH2:17]"
    "[C:3](=[O:4])[OH:18].[CH3:1][OH:2]>>"
    "[N:10]#[C:11][CH2:12][CH2:13][CH2:14][CH2:15][CH2:16][CH2:17]"
    "[C:3](=[O:4])[O:2][CH3:1]";

}  // namespace

TEST_CASE("self consistency: a kb scores its own reaction 5") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({std::string(kEster1) + "\tUS-1"}), lib,
               BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);
  CCResult r = scorer.score(kEster1);
  CHECK(r.score == 5);
  CHECK(r.category == Category::kPass);
  CHECK(r.matched_level == 5);
  REQUIRE(r.doc_refs.size() == 1);
  CHECK(r.doc_refs[0] == "US-1");
}

TEST_CASE("unknown reaction center scores zero") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({kEster1}), lib, BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);
  // a sulfonamide bond formation has no precedent in this KB
  CCResult r = scorer.score(
      "[CH3:1][S:2](=[O:3])(=[O:4])[Cl:5].[CH3:6][NH2:7]>>"
      "[CH3:1][S:2](=[O:3])(=[O:4])[NH:7][CH3:6]");
  CHECK(r.score == 0);
  CHECK(r.category == Category::kNoRcPrecedent);
  CHECK(r.matched_level == 0);
  CHECK_FALSE(r.matched_key.has_value());
}

TEST_CASE("distant unprecedented nitrile fails the fg check") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({kHeptylEster}), lib, BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);

  // control: the kb reaction itself passes
  CHECK(scorer.score(kHeptylEster).score == 5);

  CCResult r = scorer.score(kNitrileEster);
  CHECK(r.score == 0);
  CHECK(r.category == Category::kFgIncompatible);
  REQUIRE(r.violating_fgs.size() == 1);
  CHECK(lib.def(r.violating_fgs[0]).name == "nitrile");
  CHECK(r.matched_key.has_value());
}

TEST_CASE("invalid input is a category not an exception") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({kEster1}), lib, BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);
  CHECK(scorer.score("C(>>").category == Category::kInvalidInput);
  CHECK(scorer.score("").category == Category::kInvalidInput);
  CHECK(scorer.score("[CH4:1]>>[CH4:1]").category ==
        Category::kInvalidInput);  // identity = empty center
  CHECK(scorer.score("C(>>").score == 0);
}

TEST_CASE("unmappable inputs land in the mapping-failed category") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({kEster1}), lib, BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);
  CCResult r = scorer.score("C>>c1ccccc1C(=O)O");
  CHECK(r.category == Category::kMappingFailed);
  CHECK(r.score == 0);
}

TEST_CASE("unmapped candidate is mapped and scored") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({kEster1}), lib, BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);
  CCResult r = scorer.score("CO.CC(=O)O>>COC(C)=O");
  CHECK(r.category == Category::kPass);
  CHECK(r.score == 5);
}

TEST_CASE("digest mismatch fails at construction") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({kEster1}), lib, BuildOptions{}, nullptr);
  auto entries = cctest::mini_fg_entries();
  entries.emplace_back("azide", "N=[N+]=[N-]");
  FGLibrary other = FGLibrary::from_definitions(entries);
  CHECK_THROWS_AS(Scorer(kb, other), ConfigError);
}

TEST_CASE("scoring is deterministic and permutation invariant") {
  FGLibrary lib = mini_library();
  auto corpus = cctest::synthetic_corpus(60, true);
  KnowledgeBase kb = build_kb(records_from(corpus), lib, BuildOptions{},
                              nullptr);
  Scorer scorer(kb, lib);

  std::mt19937_64 rng(7);
  for (size_t i = 0; i < 10; ++i) {
    const std::string &text = corpus[i * 5];
    std::string rxn_text = text.substr(0, text.find('\t'));
    CCResult base = scorer.score(rxn_text);
    CCResult again = scorer.score(rxn_text);
    CHECK(base.score == again.score);
    CHECK(base.category == again.category);
    CHECK(base.matched_key == again.matched_key);

    // atom-order permutation and map relabeling of a pre-mapped reaction
    Reaction rxn = parse_reaction(rxn_text);
    std::vector<int> maps;
    for (const auto &[m, ref] : rxn.reactant_map_index)
      maps.push_back(m);
    std::vector<int> shuffled = maps;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::map<int, int> relabel;
    for (size_t k = 0; k < maps.size(); ++k)
      relabel[maps[k]] = shuffled[k];
    auto rewrite = [&](const std::vector<Molecule> &mols) {
      std::string out;
      for (size_t m = 0; m < mols.size(); ++m) {
        Molecule copy = mols[m];
        for (int a = 0; a < copy.num_atoms(); ++a)
          if (copy.atom(a).map_number > 0 &&
              relabel.count(copy.atom(a).map_number) != 0)
            copy.atom(a).map_number = relabel[copy.atom(a).map_number];
        if (m > 0)
          out += ".";
        out += randomize_traversal(copy, rng());
      }
      return out;
    };
    std::string permuted =
        rewrite(rxn.reactants) + ">>" + rewrite(rxn.products);
    CCResult perm = scorer.score(permuted);
    CHECK_MESSAGE(perm.score == base.score, rxn_text, " vs ", permuted);
    CHECK(perm.category == base.category);
    CHECK(perm.matched_key == base.matched_key);
  }
}

TEST_CASE("level coherence: returned level is the maximum passing level") {
  FGLibrary lib = mini_library();
  auto corpus = cctest::synthetic_corpus(40, false);
  KnowledgeBase kb =
      build_kb(records_from(corpus), lib, BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);
  for (size_t i = 0; i < corpus.size(); i += 7) {
    Reaction rxn = parse_reaction(corpus[i]);
    RCLevels levels = extract_all_levels(rxn, lib);
    CCResult r = scorer.score(corpus[i]);
    int expected = 0;
    for (int lvl = 1; lvl <= 5; ++lvl) {
      const PrecedentEntry *e =
          kb.lookup(lvl, levels.levels[static_cast<size_t>(lvl - 1)].canonical_key);
      if (e != nullptr &&
          levels.signatures[static_cast<size_t>(lvl - 1)].is_subset_of(
              e->aggregated_signature))
        expected = lvl;
    }
    CHECK(r.score == expected);
  }
}

TEST_CASE("kb growth never lowers a score") {
  FGLibrary lib = mini_library();
  auto corpus = cctest::synthetic_corpus(80, false);
  std::vector<std::string> base_lines(corpus.begin(), corpus.begin() + 40);
  KnowledgeBase small =
      build_kb(records_from(base_lines), lib, BuildOptions{}, nullptr);
  KnowledgeBase big = build_kb(records_from(corpus), lib, BuildOptions{},
                               nullptr);
  Scorer s_small(small, lib);
  Scorer s_big(big, lib);
  for (size_t i = 0; i < corpus.size(); i += 8)
    CHECK(s_big.score(corpus[i]).score >= s_small.score(corpus[i]).score);
}

TEST_CASE("categorize_samples partitions the sample count") {
  std::vector<CCResult> results(13);
  for (int i = 0; i < 9; ++i)
    results[static_cast<size_t>(i)].category = Category::kPass;
  results[9].category = Category::kNoRcPrecedent;
  results[10].category = Category::kNoRcPrecedent;
  results[11].category = Category::kFgIncompatible;
  results[12].category = Category::kInvalidInput;
  CategoryHistogram h = categorize_samples(results, 2);
  CHECK(h.pass == 9);
  CHECK(h.no_rc_precedent == 2);
  CHECK(h.fg_incompatible == 1);
  CHECK(h.invalid_input == 1);
  CHECK(h.duplicate == 2);
  CHECK(h.total() == 15);

  CategoryHistogram zero = categorize_samples({}, 0);
  CHECK(zero.total() == 0);
}

TEST_CASE("explain renders category-specific reports") {
  FGLibrary lib = mini_library();
  KnowledgeBase kb =
      build_kb(records_from({std::string(kHeptylEster) + "\tUS-77"}), lib,
               BuildOptions{}, nullptr);
  Scorer scorer(kb, lib);

  std::string pass_text = explain(scorer.score(kHeptylEster), lib);
  CHECK(pass_text.find("5") != std::string::npos);
  CHECK(pass_text.find("US-77") != std::string::npos);

  std::string fg_text = explain(scorer.score(kNitrileEster), lib);
  CHECK(fg_text.find("nitrile") != std::string::npos);

  CCResult no_rc = scorer.score(
      "[CH3:1][S:2](=[O:3])(=[O:4])[Cl:5].[CH3:6][NH2:7]>>"
      "[CH3:1][S:2](=[O:3])(=[O:4])[NH:7][CH3:6]");
  std::string no_rc_text = explain(no_rc, lib);
  CHECK(no_rc_text.find("No synthetic precedents") != std::string::npos);
  CHECK(no_rc_text.find("RC1|") != std::string::npos);
}
