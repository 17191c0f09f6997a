//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "chemcensor/errors.hpp"
#include "support.hpp"

using namespace chemcensor;

namespace {

std::vector<FewshotExample> small_pool() {
  return {
      {"CC(=O)OCC", "CCO.CC(=O)O"}, {"CCNC", "CCBr.CN"},
      {"CC=O", "CCO"},              {"CC(=O)NC", "CC(=O)O.CN"},
      {"CCOC", "CCBr.CO"},          {"c1ccccc1C(=O)NC", "c1ccccc1C(=O)O.CN"},
  };
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("template rendering substitutes the product") {
  CHECK(num_prompt_templates() == 15);
  std::string t1 = render_template(1, "CCO");
  CHECK(t1.find("<smiles>CCO</smiles>") != std::string::npos);
  CHECK(t1.find("{{source}}") == std::string::npos);
  CHECK_THROWS_AS(render_template(0, "C"), ConfigError);
  CHECK_THROWS_AS(render_template(16, "C"), ConfigError);
}

TEST_CASE("prompt building is deterministic and uses five examples") {
  auto pool = small_pool();
  PromptSpec a = build_prompt("CC(=O)OC", pool, 11);
  PromptSpec b = build_prompt("CC(=O)OC", pool, 11);
  CHECK(a.rendered == b.rendered);
  CHECK(a.fewshot.size() == 5);
  CHECK(a.template_id >= 1);
  CHECK(a.template_id <= 15);
  CHECK(a.rendered.find("CC(=O)OC") != std::string::npos);
  // answers carry the smiles tags
  for (const auto &[q, ans] : a.fewshot) {
    CHECK(ans.rfind("<smiles>", 0) == 0);
    CHECK(ans.find("</smiles>") != std::string::npos);
  }

  PromptSpec c = build_prompt("CC(=O)OC", pool, 12);
  CHECK(a.rendered != c.rendered);
  PromptSpec d = build_prompt("CCOC", pool, 11);
  CHECK(a.rendered != d.rendered);
}

TEST_CASE("a pool of exactly five is used in full") {
  auto pool = small_pool();
  pool.resize(5);
  PromptSpec spec = build_prompt("CCO", pool, 3);
  std::set<std::string> used;
  for (const auto &[q, ans] : spec.fewshot)
    used.insert(ans);
  CHECK(used.size() == 5);
  pool.resize(4);
  CHECK_THROWS_AS(build_prompt("CCO", pool, 3), PoolTooSmallError);
}

TEST_CASE("template ids vary across targets") {
  auto pool = small_pool();
  std::set<int> ids;
  for (int i = 0; i < 100; ++i)
    ids.insert(
        build_prompt("C" + std::string(static_cast<size_t>(i % 7), 'C'),
                     pool, static_cast<std::uint64_t>(i))
            .template_id);
  CHECK(ids.size() > 1);
}

TEST_CASE("answer extraction from tags") {
  CHECK(extract_answer("blah <smiles>CCO.CBr</smiles>") == "CCO.CBr");
  CHECK(extract_answer("<smiles>CC</smiles> then <smiles>OO</smiles>") ==
        "OO");
  CHECK(extract_answer("< smiles >CCO< /smiles >") == "CCO");
  // whitespace inside the tagged content is stripped
  CHECK(extract_answer("<smiles>CCO.\nCBr</smiles>") == "CCO.CBr");
  CHECK(extract_answer("<smiles>\n\nCC(=O)O\n</smiles>") == "CC(=O)O");
}

TEST_CASE("answer extraction falls back to reactants tags") {
  CHECK(extract_answer("<reactants>CCO.CC(=O)O</reactants>") ==
        "CCO.CC(=O)O");
  CHECK(extract_answer("pre <reactants>CC</reactants> post") == "CC");
}

TEST_CASE("answer extraction falls back to a trailing molecule token") {
  CHECK(extract_answer("The answer is:\nCCO.CC(=O)O") == "CCO.CC(=O)O");
  CHECK(extract_answer("I think `CCO` fits.") == "CCO");
  CHECK(extract_answer("nothing here") == std::nullopt);
  CHECK(extract_answer("") == std::nullopt);
  // full reaction strings are not molecule sets
  CHECK(extract_answer("CCO>>CC=O") == std::nullopt);
  // bare one-letter tokens read as prose, not as molecules
  CHECK(extract_answer("I cannot answer") == std::nullopt);
  CHECK(extract_answer("O I see, no answer") == std::nullopt);
}

TEST_CASE("jsonl round trip") {
  std::vector<CompletionRecord> records(2);
  records[0].target_id = "t1";
  records[0].target_smiles = "CC(=O)OCC";
  records[0].model_id = "mock";
  records[0].samples = {"<smiles>CCO.CC(=O)O</smiles>", "junk"};
  records[1].target_id = "t2";
  records[1].target_smiles = "CCNC";
  records[1].model_id = "mock";
  records[1].samples = {"<smiles>CCBr.CN</smiles>"};

  std::string path = "/tmp/cc_completions_test.jsonl";
  write_completions_jsonl(path, records);
  auto loaded = read_completions_jsonl(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].target_id == "t1");
  CHECK(loaded[0].samples.size() == 2);
  CHECK(loaded[1].samples[0] == "<smiles>CCBr.CN</smiles>");
  std::remove(path.c_str());
}

TEST_CASE("targets file parsing with delimiters") {
  std::string path = "/tmp/cc_targets_test.tsv";
  {
    std::ofstream out(path);
    out << "# comment\n";
    out << "t1\tCC(=O)OCC\n";
    out << "t2\tCCNC\n";
  }
  auto targets = read_targets_file(path);
  REQUIRE(targets.size() == 2);
  CHECK(targets[0].id == "t1");
  CHECK(targets[1].smiles == "CCNC");
  {
    std::ofstream out(path);
    out << "t1,CC(=O)OCC,extra\n";
  }
  auto csv = read_targets_file(path, ',');
  REQUIRE(csv.size() == 1);
  CHECK(csv[0].smiles == "CC(=O)OCC");
  std::remove(path.c_str());
}

TEST_CASE("benchmark accounting and byte-stable reports") {
  FGLibrary lib = FGLibrary::from_definitions(cctest::mini_fg_entries());
  auto corpus = cctest::synthetic_corpus(60, true);
  std::vector<CorpusRecord> records;
  for (const std::string &line : corpus) {
    CorpusRecord rec;
    size_t tab = line.find('\t');
    rec.reaction = line.substr(0, tab);
    rec.doc_ref = line.substr(tab + 1);
    records.push_back(rec);
  }
  BuildOptions opts;
  opts.timestamp = "2026-01-01T00:00:00Z";
  KnowledgeBase kb = build_kb(records, lib, opts, nullptr);
  Scorer scorer(kb, lib);

  std::vector<TargetEntry> targets = {{"t1", "COC(C)=O"}, {"t2", "CCNC"}};
  std::vector<CompletionRecord> completions(2);
  completions[0].target_id = "t1";
  completions[0].target_smiles = "COC(C)=O";
  completions[0].model_id = "mock";
  completions[0].samples = {
      "<smiles>CO.CC(=O)O</smiles>",      // pass candidate
      "<smiles>CO.CC(=O)O</smiles>",      // duplicate
      "<smiles>OC.OC(C)=O</smiles>",      // same set, different rendering
      "<smiles>C(</smiles>",              // invalid
      "no answer at all",                 // empty
  };
  completions[1].target_id = "t2";
  completions[1].target_smiles = "CCNC";
  completions[1].model_id = "mock";
  completions[1].samples = {
      "<smiles>CCBr.CN</smiles>",
      "<smiles>CCI.CN</smiles>",  // unknown halide: no precedent in this KB
      "garbage",
  };

  BenchConfig config;
  config.n_samples = 5;
  BenchmarkReport report =
      run_benchmark(targets, completions, scorer, config);
  REQUIRE(report.models.size() == 1);
  const ModelReport &mr = report.models[0];
  REQUIRE(mr.targets.size() == 2);

  // accounting: every target partitions n_samples
  for (const TargetRecord &t : mr.targets) {
    std::vector<CCResult> results;
    for (const ScoredPrediction &p : t.unique_predictions)
      results.push_back(p.result);
    CategoryHistogram h =
        categorize_samples(results, t.n_duplicates, t.n_empty);
    CHECK(h.total() == config.n_samples);
  }

  const TargetRecord &t1 = mr.targets[0];
  CHECK(t1.n_duplicates == 2);  // exact repeat + permuted rendering
  CHECK(t1.n_empty == 1);
  CHECK(t1.n_unique_valid == 1);
  CHECK(t1.unique_predictions.size() == 2);  // one valid, one invalid
  CHECK(max_cc(t1) == 5);

  const TargetRecord &t2 = mr.targets[1];
  CHECK(t2.n_empty == 3);  // one garbage sample + two missing slots
  CHECK(t2.n_unique_valid == 2);

  // byte-stable emission
  std::string dir1 = "/tmp/cc_report_a";
  std::string dir2 = "/tmp/cc_report_b";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  emit_report(report, dir1, ReportFormat::kBoth);
  emit_report(report, dir2, ReportFormat::kBoth);
  for (const char *name :
       {"report.json", "summary.tsv", "categories.tsv", "fg_matrix.tsv"}) {
    CHECK_MESSAGE(slurp(dir1 + "/" + std::string(name)) ==
                      slurp(dir2 + "/" + std::string(name)),
                  name);
  }
  // all-zero fg matrix is still emitted
  std::string matrix = slurp(dir1 + "/fg_matrix.tsv");
  CHECK(matrix.find("mock") != std::string::npos);
  // one summary row per model plus the header
  std::string summary = slurp(dir1 + "/summary.tsv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 2);
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("empty benchmarks are rejected") {
  FGLibrary lib = FGLibrary::from_definitions(cctest::mini_fg_entries());
  KnowledgeBase kb;
  kb.metadata.fg_digest = lib.digest();
  kb.metadata.library_size = lib.size();
  Scorer scorer(kb, lib);
  CHECK_THROWS_AS(
      run_benchmark({}, {}, scorer, BenchConfig{}),
      EmptyBenchmarkError);
  CHECK_THROWS_AS(
      run_benchmark({{"t", "C"}}, {}, scorer, BenchConfig{}),
      EmptyBenchmarkError);
}
