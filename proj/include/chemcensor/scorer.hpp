//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_SCORER_HPP_
#define CHEMCENSOR_SCORER_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemcensor/kb.hpp"
#include "chemcensor/rc.hpp"

namespace chemcensor {

enum class Category {
  kPass,
  kNoRcPrecedent,
  kFgIncompatible,
  kInvalidInput,
  kMappingFailed,
};

std::string_view category_name(Category c);

struct CCResult {
  int score = 0;  // 0..5; >=1 iff category == kPass, then == matched_level
  Category category = Category::kInvalidInput;
  int matched_level = 0;
  std::optional<std::string> matched_key;
  std::vector<int> violating_fgs;  // nonempty iff kFgIncompatible
  std::vector<std::string> doc_refs;
  std::string detail;
};

// Stateless over an immutable KB + library pair; safe to share across
// threads. Construction fails with ConfigError when the library digest does
// not match the KB metadata.
class Scorer {
public:
  Scorer(const KnowledgeBase &kb, const FGLibrary &library,
         double min_map_coverage = 0.9);

  // Never throws on bad input: every reaction text yields a CCResult.
  CCResult score(std::string_view reaction_text) const;
  // Pre-parsed variant; maps the reaction first when unmapped.
  CCResult score(const Reaction &rxn) const;

  const KnowledgeBase &kb() const { return kb_; }
  const FGLibrary &library() const { return library_; }

private:
  CCResult score_mapped(const Reaction &rxn) const;
  const KnowledgeBase &kb_;
  const FGLibrary &library_;
  double min_map_coverage_;
};

struct CategoryHistogram {
  std::int64_t pass = 0;
  std::int64_t no_rc_precedent = 0;
  std::int64_t fg_incompatible = 0;
  std::int64_t invalid_input = 0;
  std::int64_t mapping_failed = 0;
  std::int64_t duplicate = 0;
  std::int64_t empty = 0;

  std::int64_t total() const {
    return pass + no_rc_precedent + fg_incompatible + invalid_input +
           mapping_failed + duplicate + empty;
  }
  CategoryHistogram &operator+=(const CategoryHistogram &o);
};

CategoryHistogram categorize_samples(const std::vector<CCResult> &results,
                                     std::int64_t duplicates,
                                     std::int64_t empties = 0);

// Human-readable report: matched key/level/refs on a pass, violating FG
// names on an incompatibility, a no-precedent message otherwise.
std::string explain(const CCResult &result, const FGLibrary &library);

}  // namespace chemcensor

#endif  // CHEMCENSOR_SCORER_HPP_
