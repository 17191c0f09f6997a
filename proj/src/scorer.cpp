//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/scorer.hpp"

#include <sstream>

#include "chemcensor/errors.hpp"

namespace chemcensor {

std::string_view category_name(Category c) {
  switch (c) {
  case Category::kPass:
    return "PASS";
  case Category::kNoRcPrecedent:
    return "NO_RC_PRECEDENT";
  case Category::kFgIncompatible:
    return "FG_INCOMPATIBLE";
  case Category::kInvalidInput:
    return "INVALID_INPUT";
  case Category::kMappingFailed:
    return "MAPPING_FAILED";
  }
  return "UNKNOWN";
}

Scorer::Scorer(const KnowledgeBase &kb, const FGLibrary &library,
               double min_map_coverage)
    : kb_(kb), library_(library), min_map_coverage_(min_map_coverage) {
  if (kb_.metadata.fg_digest != library_.digest())
    throw ConfigError("FG library digest " + library_.digest() +
                      " does not match KB digest " + kb_.metadata.fg_digest);
  if (kb_.metadata.library_size != library_.size())
    throw ConfigError("FG library size mismatch against KB metadata");
}

CCResult Scorer::score(std::string_view reaction_text) const {
  Reaction rxn;
  try {
    rxn = parse_reaction(reaction_text);
  } catch (const ChemError &e) {
    CCResult r;
    r.category = Category::kInvalidInput;
    r.detail = e.what();
    return r;
  }
  return score(rxn);
}

CCResult Scorer::score(const Reaction &rxn) const {
  if (rxn.mapped)
    return score_mapped(rxn);
  try {
    double coverage = 0.0;
    Reaction mapped = map_reaction(rxn, min_map_coverage_, &coverage);
    return score_mapped(mapped);
  } catch (const MappingFailedError &e) {
    CCResult r;
    r.category = Category::kMappingFailed;
    r.detail = e.what();
    return r;
  } catch (const ChemError &e) {
    CCResult r;
    r.category = Category::kInvalidInput;
    r.detail = e.what();
    return r;
  }
}

CCResult Scorer::score_mapped(const Reaction &rxn) const {
  RCLevels levels;
  try {
    levels = extract_all_levels(rxn, library_);
  } catch (const ChemError &e) {
    CCResult r;
    r.category = Category::kInvalidInput;
    r.detail = e.what();
    return r;
  }

  int best_present = 0;  // highest level whose key exists in the KB
  const PrecedentEntry *best_present_entry = nullptr;
  for (int lvl = 5; lvl >= 1; --lvl) {
    const RCPattern &rc = levels.levels[static_cast<size_t>(lvl - 1)];
    const FGSignature &sig = levels.signatures[static_cast<size_t>(lvl - 1)];
    const PrecedentEntry *entry = kb_.lookup(lvl, rc.canonical_key);
    if (entry == nullptr)
      continue;
    if (best_present == 0) {
      best_present = lvl;
      best_present_entry = entry;
    }
    if (sig.is_subset_of(entry->aggregated_signature)) {
      CCResult r;
      r.score = lvl;
      r.category = Category::kPass;
      r.matched_level = lvl;
      r.matched_key = rc.canonical_key;
      r.doc_refs = entry->doc_refs;
      std::ostringstream os;
      os << "precedented at level " << lvl << " with "
         << entry->precedent_count << " precedent(s)";
      r.detail = os.str();
      return r;
    }
  }

  if (best_present == 0) {
    CCResult r;
    r.category = Category::kNoRcPrecedent;
    r.matched_key = std::nullopt;
    r.detail = "no synthetic precedents for the reaction center; L1 key: " +
               levels.levels[0].canonical_key;
    return r;
  }

  CCResult r;
  r.category = Category::kFgIncompatible;
  r.matched_level = 0;
  r.matched_key =
      levels.levels[static_cast<size_t>(best_present - 1)].canonical_key;
  r.doc_refs = best_present_entry->doc_refs;
  r.violating_fgs =
      levels.signatures[static_cast<size_t>(best_present - 1)].difference(
          best_present_entry->aggregated_signature);
  std::ostringstream os;
  os << "reaction center precedented at level " << best_present
     << " but incompatible with " << r.violating_fgs.size()
     << " functional group(s)";
  r.detail = os.str();
  return r;
}

CategoryHistogram &CategoryHistogram::operator+=(const CategoryHistogram &o) {
  pass += o.pass;
  no_rc_precedent += o.no_rc_precedent;
  fg_incompatible += o.fg_incompatible;
  invalid_input += o.invalid_input;
  mapping_failed += o.mapping_failed;
  duplicate += o.duplicate;
  empty += o.empty;
  return *this;
}

CategoryHistogram categorize_samples(const std::vector<CCResult> &results,
                                     std::int64_t duplicates,
                                     std::int64_t empties) {
  CategoryHistogram h;
  h.duplicate = duplicates;
  h.empty = empties;
  for (const CCResult &r : results) {
    switch (r.category) {
    case Category::kPass:
      ++h.pass;
      break;
    case Category::kNoRcPrecedent:
      ++h.no_rc_precedent;
      break;
    case Category::kFgIncompatible:
      ++h.fg_incompatible;
      break;
    case Category::kInvalidInput:
      ++h.invalid_input;
      break;
    case Category::kMappingFailed:
      ++h.mapping_failed;
      break;
    }
  }
  return h;
}

std::string explain(const CCResult &result, const FGLibrary &library) {
  std::ostringstream os;
  os << "ChemCensor score: " << result.score << " ["
     << category_name(result.category) << "]\n";
  switch (result.category) {
  case Category::kPass:
    os << "Confidence level " << result.matched_level
       << "; reaction-center precedent matched.\n";
    os << "Matched key: " << result.matched_key.value_or("") << "\n";
    if (!result.doc_refs.empty()) {
      os << "References:";
      for (const std::string &ref : result.doc_refs)
        os << " " << ref;
      os << "\n";
    }
    break;
  case Category::kFgIncompatible: {
    os << "Reaction center is precedented, but these functional groups have "
          "no compatibility precedent at that context:\n";
    for (int fg : result.violating_fgs) {
      os << "  - ";
      if (fg >= 0 && fg < library.size())
        os << library.def(fg).name << " (" << library.def(fg).smarts << ")";
      else
        os << "fg_id " << fg;
      os << "\n";
    }
    if (result.matched_key.has_value())
      os << "Matched key: " << *result.matched_key << "\n";
    break;
  }
  case Category::kNoRcPrecedent:
    os << "No synthetic precedents found for the extracted reaction "
          "center.\n";
    os << result.detail << "\n";
    break;
  case Category::kInvalidInput:
  case Category::kMappingFailed:
    os << result.detail << "\n";
    break;
  }
  return os.str();
}

}  // namespace chemcensor
