//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemcensor/endpoint.hpp"
#include "chemcensor/errors.hpp"
#include "chemcensor/harness.hpp"
#include "chemcensor/kb.hpp"
#include "chemcensor/metrics.hpp"
#include "chemcensor/scorer.hpp"

namespace cc = chemcensor;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json result_record(const cc::CCResult &r) {
  ordered_json j;
  j["score"] = r.score;
  j["category"] = std::string(cc::category_name(r.category));
  j["matched_level"] = r.matched_level;
  if (r.matched_key.has_value())
    j["matched_key"] = *r.matched_key;
  if (!r.violating_fgs.empty())
    j["violating_fgs"] = r.violating_fgs;
  if (!r.doc_refs.empty())
    j["doc_refs"] = r.doc_refs;
  j["detail"] = r.detail;
  return j;
}

cc::ReportFormat parse_format(const std::string &format) {
  if (format == "json")
    return cc::ReportFormat::kJson;
  if (format == "tsv")
    return cc::ReportFormat::kTsv;
  if (format == "both")
    return cc::ReportFormat::kBoth;
  throw cc::ConfigError("unknown format '" + format + "' (json|tsv|both)");
}

int cmd_build_kb(const std::string &corpus_path, const std::string &lib_path,
                 const std::string &out_path, int jobs,
                 const std::string &source) {
  cc::FGLibrary library = cc::FGLibrary::load_file(lib_path);
  std::ifstream corpus(corpus_path);
  if (!corpus)
    throw cc::IOError("cannot open corpus '" + corpus_path + "'");
  cc::BuildOptions options;
  options.jobs = jobs;
  options.source_id = source.empty() ? corpus_path : source;
  cc::BuildStats stats;
  cc::KnowledgeBase kb = cc::build_kb(corpus, library, options, &stats);
  cc::save_kb(kb, out_path);
  std::cerr << "build: " << stats.summary() << "\n";
  std::cerr << "entries: " << kb.total_entries() << " across 5 levels\n";
  std::cout << out_path << "\n";
  return 0;
}

int cmd_score(const std::string &kb_path, const std::string &lib_path,
              const std::string &reaction, const std::string &in_path,
              const std::string &out_path) {
  cc::FGLibrary library = cc::FGLibrary::load_file(lib_path);
  cc::KnowledgeBase kb = cc::load_kb(kb_path);
  cc::Scorer scorer(kb, library);

  if (!reaction.empty()) {
    cc::CCResult r = scorer.score(reaction);
    std::cout << cc::explain(r, library);
    std::cout << result_record(r).dump() << "\n";
    return 0;
  }

  std::ifstream in(in_path);
  if (!in)
    throw cc::IOError("cannot open '" + in_path + "'");
  std::ostream *out = &std::cout;
  std::ofstream out_file;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file)
      throw cc::IOError("cannot open '" + out_path + "' for writing");
    out = &out_file;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::string rxn = line.substr(0, line.find('\t'));
    cc::CCResult r = scorer.score(rxn);
    ordered_json j = result_record(r);
    j["reaction"] = rxn;
    *out << j.dump() << "\n";
  }
  return 0;
}

int cmd_prompts(const std::string &targets_path, const std::string &pool_path,
                std::uint64_t seed, const std::string &out_path,
                char delimiter) {
  auto targets = cc::read_targets_file(targets_path, delimiter);
  auto pool = cc::read_fewshot_pool(pool_path);
  std::ofstream out(out_path);
  if (!out)
    throw cc::IOError("cannot open '" + out_path + "' for writing");
  for (const cc::TargetEntry &t : targets) {
    cc::PromptSpec spec = cc::build_prompt(t.smiles, pool, seed);
    ordered_json j;
    j["target_id"] = t.id;
    j["target_smiles"] = t.smiles;
    j["template_id"] = spec.template_id;
    j["prompt"] = spec.rendered;
    out << j.dump() << "\n";
  }
  std::cerr << "wrote " << targets.size() << " prompts to " << out_path
            << "\n";
  return 0;
}

int cmd_generate(const std::string &prompts_path,
                 const std::string &endpoint_path, int n,
                 const std::string &out_path) {
  cc::EndpointConfig config = cc::load_endpoint_config(endpoint_path);
  std::ifstream in(prompts_path);
  if (!in)
    throw cc::IOError("cannot open '" + prompts_path + "'");
  std::vector<cc::CompletionRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    ordered_json j = ordered_json::parse(line);
    cc::PromptSpec spec;
    spec.rendered = j.value("prompt", "");
    spec.target_smiles = j.value("target_smiles", "");
    cc::CompletionRecord rec;
    rec.target_id = j.value("target_id", "");
    rec.target_smiles = spec.target_smiles;
    rec.model_id = config.model;
    rec.provenance = config.base_url;
    rec.samples = cc::query_model(config, spec, n);
    records.push_back(std::move(rec));
    std::cerr << "completed " << rec.target_id << "\n";
  }
  cc::write_completions_jsonl(out_path, records);
  std::cerr << "wrote " << records.size() << " records to " << out_path
            << "\n";
  return 0;
}

int cmd_bench(const std::string &targets_path,
              const std::string &completions_path, const std::string &kb_path,
              const std::string &lib_path, const std::vector<int> &k_list,
              int samples, std::uint64_t seed, int jobs,
              const std::string &out_dir, const std::string &format,
              char delimiter) {
  cc::FGLibrary library = cc::FGLibrary::load_file(lib_path);
  cc::KnowledgeBase kb = cc::load_kb(kb_path);
  cc::Scorer scorer(kb, library);
  auto targets = cc::read_targets_file(targets_path, delimiter);
  auto completions = cc::read_completions_jsonl(completions_path);

  cc::BenchConfig config;
  if (!k_list.empty())
    config.k_list = k_list;
  config.n_samples = samples;
  config.seed = seed;
  config.jobs = jobs;

  cc::BenchmarkReport report =
      cc::run_benchmark(targets, completions, scorer, config);
  auto files = cc::emit_report(report, out_dir, parse_format(format));
  for (const std::string &f : files)
    std::cout << f << "\n";
  for (const cc::ModelReport &mr : report.models) {
    std::cerr << mr.model_id << ": unique=" << mr.unique_pooled.str()
              << " av_pt_max=" << mr.av_pt_max.str();
    for (const auto &[k, v] : mr.av_pt_top_k)
      std::cerr << " top" << k << "=" << v.str();
    std::cerr << "\n";
  }
  return 0;
}

int cmd_report(const std::string &report_path, const std::string &out_dir,
               const std::string &format) {
  std::ifstream in(report_path);
  if (!in)
    throw cc::IOError("cannot open '" + report_path + "'");
  ordered_json root;
  in >> root;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  cc::ReportFormat fmt = parse_format(format);

  if (fmt == cc::ReportFormat::kJson || fmt == cc::ReportFormat::kBoth) {
    std::ofstream out(out_dir + "/report.json");
    out << root.dump(2) << "\n";
  }
  if (fmt == cc::ReportFormat::kTsv || fmt == cc::ReportFormat::kBoth) {
    std::vector<int> k_list;
    for (const auto &k : root["config"]["k_list"])
      k_list.push_back(k.get<int>());
    int library_size = root["config"]["library_size"].get<int>();
    {
      std::ofstream out(out_dir + "/summary.tsv");
      out << "model\tunique\tunique_macro\tav_pt_max_cc";
      for (int k : k_list)
        out << "\tav_pt_top_" << k;
      out << "\n";
      for (const auto &[model, m] : root["models"].items()) {
        const auto &agg = m["aggregate"];
        out << model << "\t" << agg["unique_fraction"]["value"].get<std::string>()
            << "\t" << agg["unique_fraction_macro"]["value"].get<std::string>()
            << "\t" << agg["av_pt_max_cc"]["value"].get<std::string>();
        for (int k : k_list)
          out << "\t"
              << agg["av_pt_top_k"][std::to_string(k)]["value"]
                     .get<std::string>();
        out << "\n";
      }
    }
    {
      std::ofstream out(out_dir + "/categories.tsv");
      out << "model\tPASS\tNO_RC_PRECEDENT\tFG_INCOMPATIBLE\tINVALID_INPUT\t"
             "MAPPING_FAILED\tDUPLICATE\tEMPTY\ttotal\n";
      for (const auto &[model, m] : root["models"].items()) {
        const auto &c = m["aggregate"]["categories"];
        long long total = 0;
        for (const char *key :
             {"PASS", "NO_RC_PRECEDENT", "FG_INCOMPATIBLE", "INVALID_INPUT",
              "MAPPING_FAILED", "DUPLICATE", "EMPTY"})
          total += c[key].get<long long>();
        out << model;
        for (const char *key :
             {"PASS", "NO_RC_PRECEDENT", "FG_INCOMPATIBLE", "INVALID_INPUT",
              "MAPPING_FAILED", "DUPLICATE", "EMPTY"})
          out << "\t" << c[key].get<long long>();
        out << "\t" << total << "\n";
      }
    }
    {
      std::ofstream out(out_dir + "/fg_matrix.tsv");
      out << "model";
      for (int fg = 0; fg < library_size; ++fg)
        out << "\t" << fg;
      out << "\n";
      for (const auto &[model, m] : root["models"].items()) {
        out << model;
        const auto &fg_errors = m["fg_errors"];
        for (int fg = 0; fg < library_size; ++fg) {
          std::string key = std::to_string(fg);
          out << "\t"
              << (fg_errors.contains(key)
                      ? fg_errors[key]["count"].get<long long>()
                      : 0);
        }
        out << "\n";
      }
    }
  }
  std::cerr << "re-emitted report into " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ChemCensor: reaction-plausibility scoring and benchmarking"};
  app.require_subcommand(1);

  std::string kb_path, lib_path, corpus_path, out_path, in_path;
  std::string targets_path, completions_path, pool_path, endpoint_path;
  std::string report_path, out_dir = "reports", format = "both";
  std::string reaction, source;
  std::vector<int> k_list;
  int jobs = 1, samples = 15, n = 15;
  std::uint64_t seed = 0;
  std::string delimiter = "\t";

  auto *build = app.add_subcommand("build-kb", "build a knowledge base");
  build->add_option("--corpus", corpus_path, "mapped reaction corpus file")
      ->required();
  build->add_option("--fg-library", lib_path, "FG library TSV")->required();
  build->add_option("--out", out_path, "output KB path")->required();
  build->add_option("--jobs", jobs, "parallel build shards");
  build->add_option("--source", source, "corpus identifier for metadata");

  auto *score = app.add_subcommand("score", "score reactions against a KB");
  score->add_option("--kb", kb_path, "knowledge base path")->required();
  score->add_option("--fg-library", lib_path, "FG library TSV")->required();
  score->add_option("reaction", reaction, "single reaction SMILES");
  score->add_option("--in", in_path, "batch input, one reaction per line");
  score->add_option("--out", out_path, "batch output JSONL");

  auto *prompts = app.add_subcommand("prompts", "render benchmark prompts");
  prompts->add_option("--targets", targets_path, "targets file")->required();
  prompts->add_option("--pool", pool_path, "few-shot pool (corpus format)")
      ->required();
  prompts->add_option("--seed", seed, "prompt sampling seed");
  prompts->add_option("--out", out_path, "output prompts JSONL")->required();
  prompts->add_option("--delimiter", delimiter, "targets delimiter");

  auto *generate =
      app.add_subcommand("generate", "query a chat-completion endpoint");
  generate->add_option("--prompts", in_path, "prompts JSONL")->required();
  generate->add_option("--endpoint", endpoint_path, "endpoint config JSON")
      ->required();
  generate->add_option("--n", n, "completions per prompt");
  generate->add_option("--out", out_path, "output completions JSONL")
      ->required();

  auto *bench = app.add_subcommand("bench", "run the benchmark pipeline");
  bench->add_option("--targets", targets_path, "targets file")->required();
  bench->add_option("--completions", completions_path, "completions JSONL")
      ->required();
  bench->add_option("--kb", kb_path, "knowledge base path")->required();
  bench->add_option("--fg-library", lib_path, "FG library TSV")->required();
  bench->add_option("--k", k_list, "K values for CC at K");
  bench->add_option("--samples", samples, "samples per target");
  bench->add_option("--jobs", jobs, "parallel target scoring");
  bench->add_option("--seed", seed, "config echo seed");
  bench->add_option("--out-dir", out_dir, "report output directory");
  bench->add_option("--format", format, "json|tsv|both");
  bench->add_option("--delimiter", delimiter, "targets delimiter");

  auto *report = app.add_subcommand("report", "re-emit tables from a report");
  report->add_option("--report", report_path, "report.json path")->required();
  report->add_option("--out-dir", out_dir, "output directory");
  report->add_option("--format", format, "json|tsv|both");

  CLI11_PARSE(app, argc, argv);

  try {
    char delim = delimiter.empty() ? '\t' : delimiter[0];
    if (build->parsed())
      return cmd_build_kb(corpus_path, lib_path, out_path, jobs, source);
    if (score->parsed()) {
      if (reaction.empty() && in_path.empty())
        throw cc::ConfigError("score needs a reaction argument or --in file");
      return cmd_score(kb_path, lib_path, reaction, in_path, out_path);
    }
    if (prompts->parsed())
      return cmd_prompts(targets_path, pool_path, seed, out_path, delim);
    if (generate->parsed())
      return cmd_generate(in_path, endpoint_path, n, out_path);
    if (bench->parsed())
      return cmd_bench(targets_path, completions_path, kb_path, lib_path,
                       k_list, samples, seed, jobs, out_dir, format, delim);
    if (report->parsed())
      return cmd_report(report_path, out_dir, format);
  } catch (const cc::ChemError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
