//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/kb.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "chemcensor/errors.hpp"
#include "chemcensor/rc.hpp"

namespace chemcensor {

const PrecedentEntry *KnowledgeBase::lookup(int level,
                                            const std::string &key) const {
  if (level < 1 || level > 5)
    return nullptr;
  const auto &map = levels_[static_cast<size_t>(level - 1)];
  auto it = map.find(key);
  return it == map.end() ? nullptr : &it->second;
}

void KnowledgeBase::add(int level, const std::string &key,
                        const FGSignature &signature,
                        const std::string &doc_ref_raw, int doc_ref_cap) {
  // refs land in a tab/semicolon-delimited file
  std::string doc_ref = doc_ref_raw;
  for (char &c : doc_ref)
    if (c == '\t' || c == '\n' || c == '\r' || c == ';')
      c = '_';
  auto &map = levels_[static_cast<size_t>(level - 1)];
  auto it = map.find(key);
  if (it == map.end()) {
    PrecedentEntry entry;
    entry.aggregated_signature = signature;
    entry.precedent_count = 1;
    if (!doc_ref.empty() && doc_ref_cap > 0)
      entry.doc_refs.push_back(doc_ref);
    map.emplace(key, std::move(entry));
    return;
  }
  it->second.aggregated_signature |= signature;
  ++it->second.precedent_count;
  if (!doc_ref.empty() &&
      static_cast<int>(it->second.doc_refs.size()) < doc_ref_cap)
    it->second.doc_refs.push_back(doc_ref);
}

std::int64_t KnowledgeBase::total_entries() const {
  std::int64_t n = 0;
  for (const auto &m : levels_)
    n += static_cast<std::int64_t>(m.size());
  return n;
}

BuildStats &BuildStats::operator+=(const BuildStats &o) {
  total_records += o.total_records;
  built += o.built;
  skipped_parse += o.skipped_parse;
  skipped_unmapped += o.skipped_unmapped;
  skipped_empty_center += o.skipped_empty_center;
  return *this;
}

std::string BuildStats::summary() const {
  std::ostringstream os;
  os << "records=" << total_records << " built=" << built
     << " skipped_parse=" << skipped_parse
     << " skipped_unmapped=" << skipped_unmapped
     << " skipped_empty_center=" << skipped_empty_center;
  return os.str();
}

std::vector<CorpusRecord> read_corpus_lines(std::istream &in) {
  std::vector<CorpusRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    CorpusRecord rec;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      rec.reaction = line;
    } else {
      rec.reaction = line.substr(0, tab);
      size_t tab2 = line.find('\t', tab + 1);
      rec.doc_ref = tab2 == std::string::npos
                        ? line.substr(tab + 1)
                        : line.substr(tab + 1, tab2 - tab - 1);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void build_into(KnowledgeBase &kb, const CorpusRecord *records, size_t count,
                const FGLibrary &library, int doc_ref_cap,
                BuildStats &stats) {
  for (size_t i = 0; i < count; ++i) {
    const CorpusRecord &rec = records[i];
    ++stats.total_records;
    try {
      Reaction rxn = parse_reaction(rec.reaction);
      if (!rxn.mapped) {
        ++stats.skipped_unmapped;
        continue;
      }
      RCLevels levels = extract_all_levels(rxn, library);
      for (int lvl = 1; lvl <= 5; ++lvl) {
        kb.add(lvl, levels.levels[static_cast<size_t>(lvl - 1)].canonical_key,
               levels.signatures[static_cast<size_t>(lvl - 1)], rec.doc_ref,
               doc_ref_cap);
      }
      ++stats.built;
      ++kb.metadata.reaction_count;
    } catch (const EmptyCenterError &) {
      ++stats.skipped_empty_center;
    } catch (const ChemError &) {
      ++stats.skipped_parse;
    }
  }
}

}  // namespace

KnowledgeBase build_kb(const std::vector<CorpusRecord> &corpus,
                       const FGLibrary &library, const BuildOptions &options,
                       BuildStats *stats) {
  KBMetadata meta;
  meta.fg_digest = library.digest();
  meta.library_size = library.size();
  meta.source_id = options.source_id;
  meta.built = options.timestamp.empty() ? utc_now() : options.timestamp;

  int jobs = std::max(1, options.jobs);
  BuildStats total;

  if (jobs == 1 || corpus.size() < 2 * static_cast<size_t>(jobs)) {
    KnowledgeBase kb;
    kb.metadata = meta;
    build_into(kb, corpus.data(), corpus.size(), library,
               options.doc_ref_cap, total);
    if (stats != nullptr)
      *stats = total;
    return kb;
  }

  std::vector<KnowledgeBase> shards(static_cast<size_t>(jobs));
  std::vector<BuildStats> shard_stats(static_cast<size_t>(jobs));
  std::vector<std::thread> workers;
  size_t chunk = (corpus.size() + static_cast<size_t>(jobs) - 1) /
                 static_cast<size_t>(jobs);
  for (int j = 0; j < jobs; ++j) {
    size_t begin = static_cast<size_t>(j) * chunk;
    if (begin >= corpus.size())
      break;
    size_t len = std::min(chunk, corpus.size() - begin);
    shards[static_cast<size_t>(j)].metadata = meta;
    workers.emplace_back([&, j, begin, len] {
      build_into(shards[static_cast<size_t>(j)], corpus.data() + begin, len,
                 library, options.doc_ref_cap,
                 shard_stats[static_cast<size_t>(j)]);
    });
  }
  for (auto &w : workers)
    w.join();

  KnowledgeBase kb = std::move(shards[0]);
  total = shard_stats[0];
  for (size_t j = 1; j < shards.size(); ++j) {
    kb = merge_kb(kb, shards[j]);
    total += shard_stats[j];
  }
  kb.metadata.source_id = meta.source_id;
  if (stats != nullptr)
    *stats = total;
  return kb;
}

KnowledgeBase build_kb(std::istream &corpus, const FGLibrary &library,
                       const BuildOptions &options, BuildStats *stats) {
  if (!corpus)
    throw IOError("unreadable corpus stream");
  std::vector<CorpusRecord> records = read_corpus_lines(corpus);
  return build_kb(records, library, options, stats);
}

KnowledgeBase merge_kb(const KnowledgeBase &a, const KnowledgeBase &b) {
  if (!a.metadata.merge_compatible(b.metadata))
    throw MetadataMismatchError(
        "cannot merge knowledge bases built with different libraries or "
        "format versions");
  KnowledgeBase out;
  out.metadata = a.metadata;
  out.metadata.reaction_count =
      a.metadata.reaction_count + b.metadata.reaction_count;
  if (a.metadata.source_id != b.metadata.source_id)
    out.metadata.source_id = a.metadata.source_id + "+" + b.metadata.source_id;
  out.metadata.built = std::max(a.metadata.built, b.metadata.built);

  // doc_ref cap is not stored per entry; keep the conventional default
  constexpr int kCap = 5;
  for (int lvl = 1; lvl <= 5; ++lvl) {
    auto &map = out.level_map(lvl);
    map = a.level_map(lvl);
    for (const auto &[key, entry] : b.level_map(lvl)) {
      auto it = map.find(key);
      if (it == map.end()) {
        map[key] = entry;
        continue;
      }
      it->second.aggregated_signature |= entry.aggregated_signature;
      it->second.precedent_count += entry.precedent_count;
      for (const std::string &ref : entry.doc_refs) {
        if (static_cast<int>(it->second.doc_refs.size()) >= kCap)
          break;
        it->second.doc_refs.push_back(ref);
      }
    }
  }
  return out;
}

void save_kb(const KnowledgeBase &kb, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw IOError("cannot open '" + path + "' for writing");
  out << "CCKB " << kb.metadata.format_version << "\n";
  out << "fg_digest\t" << kb.metadata.fg_digest << "\n";
  out << "library_size\t" << kb.metadata.library_size << "\n";
  out << "source\t" << kb.metadata.source_id << "\n";
  out << "reactions\t" << kb.metadata.reaction_count << "\n";
  out << "built\t" << kb.metadata.built << "\n";
  for (int lvl = 1; lvl <= 5; ++lvl) {
    const auto &map = kb.level_map(lvl);
    out << "level\t" << lvl << "\t" << map.size() << "\n";
    std::vector<const std::string *> keys;
    keys.reserve(map.size());
    for (const auto &[key, entry] : map)
      keys.push_back(&key);
    std::sort(keys.begin(), keys.end(),
              [](const std::string *x, const std::string *y) {
                return *x < *y;
              });
    for (const std::string *key : keys) {
      const PrecedentEntry &entry = map.at(*key);
      out << *key << "\t" << entry.precedent_count << "\t"
          << entry.aggregated_signature.to_hex() << "\t";
      for (size_t i = 0; i < entry.doc_refs.size(); ++i) {
        if (i > 0)
          out << ";";
        out << entry.doc_refs[i];
      }
      out << "\n";
    }
  }
  out << "end\n";
  if (!out)
    throw IOError("write failure on '" + path + "'");
}

KnowledgeBase load_kb(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("empty knowledge-base file");
  {
    std::istringstream hs(line);
    std::string magic;
    int version = -1;
    hs >> magic >> version;
    if (magic != "CCKB")
      throw FormatError("not a knowledge-base file: bad magic");
    if (version != 1)
      throw VersionError("unsupported knowledge-base format version " +
                         std::to_string(version));
  }

  KnowledgeBase kb;
  auto header_field = [&](const std::string &name) {
    if (!std::getline(in, line))
      throw FormatError("truncated header: missing " + name);
    size_t tab = line.find('\t');
    if (tab == std::string::npos || line.substr(0, tab) != name)
      throw FormatError("bad header line, expected '" + name + "'");
    return line.substr(tab + 1);
  };
  kb.metadata.format_version = 1;
  kb.metadata.fg_digest = header_field("fg_digest");
  kb.metadata.library_size = std::stoi(header_field("library_size"));
  kb.metadata.source_id = header_field("source");
  kb.metadata.reaction_count = std::stoll(header_field("reactions"));
  kb.metadata.built = header_field("built");

  for (int lvl = 1; lvl <= 5; ++lvl) {
    if (!std::getline(in, line))
      throw FormatError("truncated file: missing level " +
                        std::to_string(lvl));
    std::istringstream ls(line);
    std::string word;
    int got_level = -1;
    std::int64_t count = -1;
    std::getline(ls, word, '\t');
    if (word != "level")
      throw FormatError("expected level marker, got '" + word + "'");
    std::getline(ls, word, '\t');
    got_level = std::stoi(word);
    std::getline(ls, word, '\t');
    count = std::stoll(word);
    if (got_level != lvl || count < 0)
      throw FormatError("bad level header");
    for (std::int64_t i = 0; i < count; ++i) {
      if (!std::getline(in, line))
        throw FormatError("truncated file inside level " +
                          std::to_string(lvl));
      std::istringstream es(line);
      std::string key, count_str, hex, refs;
      if (!std::getline(es, key, '\t') || !std::getline(es, count_str, '\t') ||
          !std::getline(es, hex, '\t'))
        throw FormatError("bad entry line in level " + std::to_string(lvl));
      std::getline(es, refs, '\t');
      PrecedentEntry entry;
      entry.precedent_count = std::stoll(count_str);
      entry.aggregated_signature =
          FGSignature::from_hex(hex, kb.metadata.library_size);
      if (!refs.empty()) {
        std::istringstream rs(refs);
        std::string ref;
        while (std::getline(rs, ref, ';'))
          if (!ref.empty())
            entry.doc_refs.push_back(ref);
      }
      if (entry.precedent_count < 1)
        throw FormatError("precedent count below 1 in level " +
                          std::to_string(lvl));
      kb.level_map(lvl)[key] = std::move(entry);
    }
  }
  if (!std::getline(in, line) || line != "end")
    throw FormatError("truncated file: missing end marker");
  return kb;
}

}  // namespace chemcensor
