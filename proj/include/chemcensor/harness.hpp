//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_HARNESS_HPP_
#define CHEMCENSOR_HARNESS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemcensor/metrics.hpp"
#include "chemcensor/scorer.hpp"

namespace chemcensor {

// Retrosynthesis question templates; {{source}} is replaced by the product
// SMILES. Indexed 1..15.
int num_prompt_templates();
std::string render_template(int template_id, std::string_view product);

struct FewshotExample {
  std::string product;
  std::string reactants;
};

struct PromptSpec {
  int template_id = 0;  // template of the final question
  std::vector<std::pair<std::string, std::string>> fewshot;  // (query, answer)
  std::string target_smiles;
  std::string rendered;
};

// Deterministic given (target, seed): template choices and the 5 few-shot
// picks come from a generator seeded by both. Throws PoolTooSmallError.
PromptSpec build_prompt(std::string_view target,
                        const std::vector<FewshotExample> &pool,
                        std::uint64_t seed);

// Pool file shares the corpus line format: the product side becomes the
// example query, the reactant side the example answer.
std::vector<FewshotExample> read_fewshot_pool(const std::string &path);

// Answer extraction: last <smiles>...</smiles> pair (whitespace inside the
// content is stripped); falls back to a <reactants> wrapper, then to the
// last line token that parses as a molecule set.
std::optional<std::string> extract_answer(std::string_view completion);

struct CompletionRecord {
  std::string target_id;
  std::string target_smiles;
  std::string model_id;
  std::vector<std::string> samples;
  std::string provenance;
};

std::vector<CompletionRecord> read_completions_jsonl(const std::string &path);
void write_completions_jsonl(const std::string &path,
                             const std::vector<CompletionRecord> &records);

struct TargetEntry {
  std::string id;
  std::string smiles;
};

// One record per line: id <delim> SMILES. '#' lines skipped.
std::vector<TargetEntry> read_targets_file(const std::string &path,
                                           char delimiter = '\t');

struct BenchConfig {
  std::vector<int> k_list{3, 5, 10};
  int n_samples = 15;
  std::uint64_t seed = 0;
  int jobs = 1;  // data-parallel target scoring
};

struct ModelReport {
  std::string model_id;
  std::vector<TargetRecord> targets;
  CategoryHistogram histogram;
  std::map<int, std::int64_t> fg_errors;  // fg_id -> violation mentions
  Rational av_pt_max;
  std::map<int, Rational> av_pt_top_k;
  Rational unique_pooled;
  Rational unique_macro;
  std::vector<std::string> issues;
};

struct BenchmarkReport {
  BenchConfig config;
  std::string kb_digest;
  int library_size = 0;
  std::vector<std::string> fg_names;
  std::vector<ModelReport> models;  // sorted by model id
};

// Scores every completion record against the target list. Missing or short
// sample lists are padded as empty samples and flagged; the run always
// completes. Throws EmptyBenchmarkError on an empty target list and
// ConfigError on inconsistent inputs.
BenchmarkReport run_benchmark(const std::vector<TargetEntry> &targets,
                              const std::vector<CompletionRecord> &completions,
                              const Scorer &scorer, const BenchConfig &config);

enum class ReportFormat { kJson, kTsv, kBoth };

// Writes report.json / summary.tsv / categories.tsv / fg_matrix.tsv under
// out_dir. Byte-stable for identical inputs.
std::vector<std::string> emit_report(const BenchmarkReport &report,
                                     const std::string &out_dir,
                                     ReportFormat format);

}  // namespace chemcensor

#endif  // CHEMCENSOR_HARNESS_HPP_
