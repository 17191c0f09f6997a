//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_KB_HPP_
#define CHEMCENSOR_KB_HPP_

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "chemcensor/fglib.hpp"

namespace chemcensor {

struct PrecedentEntry {
  FGSignature aggregated_signature;  // bitwise OR over all precedents
  std::int64_t precedent_count = 0;
  std::vector<std::string> doc_refs;  // bounded, first-come
};

struct KBMetadata {
  int format_version = 1;
  std::string fg_digest;
  int library_size = 0;
  std::string source_id;
  std::int64_t reaction_count = 0;
  std::string built;

  bool merge_compatible(const KBMetadata &o) const {
    return format_version == o.format_version && fg_digest == o.fg_digest &&
           library_size == o.library_size;
  }
};

class KnowledgeBase {
public:
  KBMetadata metadata;

  const PrecedentEntry *lookup(int level, const std::string &key) const;
  // ORs the signature into the keyed entry, bumps the count, appends the
  // doc ref while under the cap.
  void add(int level, const std::string &key, const FGSignature &signature,
           const std::string &doc_ref_raw, int doc_ref_cap);

  const std::unordered_map<std::string, PrecedentEntry> &level_map(
      int level) const {
    return levels_[static_cast<size_t>(level - 1)];
  }
  std::unordered_map<std::string, PrecedentEntry> &level_map(int level) {
    return levels_[static_cast<size_t>(level - 1)];
  }
  std::int64_t total_entries() const;

private:
  std::array<std::unordered_map<std::string, PrecedentEntry>, 5> levels_;
};

struct BuildOptions {
  int doc_ref_cap = 5;
  int jobs = 1;
  std::string source_id = "corpus";
  std::string timestamp;  // empty = current UTC time
};

struct BuildStats {
  std::int64_t total_records = 0;
  std::int64_t built = 0;
  std::int64_t skipped_parse = 0;
  std::int64_t skipped_unmapped = 0;
  std::int64_t skipped_empty_center = 0;

  BuildStats &operator+=(const BuildStats &o);
  std::string summary() const;
};

// One corpus line: reaction SMILES with an optional tab-separated document
// reference. '#'-prefixed and blank lines are skipped.
struct CorpusRecord {
  std::string reaction;
  std::string doc_ref;
};

std::vector<CorpusRecord> read_corpus_lines(std::istream &in);

// Builds the per-level precedent maps from a mapped reference corpus.
// Unmapped or malformed records are counted and skipped; the build never
// aborts on a bad line. jobs > 1 partitions the corpus and merges shards.
KnowledgeBase build_kb(const std::vector<CorpusRecord> &corpus,
                       const FGLibrary &library, const BuildOptions &options,
                       BuildStats *stats = nullptr);

KnowledgeBase build_kb(std::istream &corpus, const FGLibrary &library,
                       const BuildOptions &options,
                       BuildStats *stats = nullptr);

// Requires identical (format version, FG digest, library size).
KnowledgeBase merge_kb(const KnowledgeBase &a, const KnowledgeBase &b);

void save_kb(const KnowledgeBase &kb, const std::string &path);
KnowledgeBase load_kb(const std::string &path);

}  // namespace chemcensor

#endif  // CHEMCENSOR_KB_HPP_
