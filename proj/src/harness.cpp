//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chemcensor/errors.hpp"
#include "chemcensor/smiles.hpp"

namespace chemcensor {
namespace {

using ordered_json = nlohmann::ordered_json;

const char *kTaskHeader =
    "You are a helpful assistant in chemistry and biology. Your task is to "
    "predict the reactants that synthesize the given product. Carefully "
    "study previous conversation to match the exact output format. The "
    "SMILES strings in the final answer should be wrapped in "
    "<smiles>...</smiles> tags.";

const char *kTemplates[] = {
    "Based on the given product, provide some plausible reactants that "
    "might have been utilized to prepare it: <smiles>{{source}}</smiles>.",
    "Can you identify some reactants that might result in the given "
    "product: <smiles>{{source}}</smiles>?",
    "Given the following product <smiles>{{source}}</smiles>, please "
    "provide possible reactants.",
    "Given the product provided <smiles>{{source}}</smiles>, propose some "
    "possible reactants that could have been employed in its formation.",
    "Given these product <smiles>{{source}}</smiles>, can you propose the "
    "corresponding reactants?",
    "Please suggest possible reactants for the given product: "
    "<smiles>{{source}}</smiles>",
    "Please suggest potential reactants for the given product: "
    "<smiles>{{source}}</smiles>",
    "Please suggest potential reactants used in the synthesis of the "
    "provided product: <smiles>{{source}}</smiles>",
    "Provide a list of potential reactants that may have produced the given "
    "product: <smiles>{{source}}</smiles>",
    "Provided the product below, propose some possible reactants that could "
    "have been used in the reaction: <smiles>{{source}}</smiles>",
    "What are the possible reactants that could have formed the following "
    "product <smiles>{{source}}</smiles>?",
    "What reactants could lead to the production of the following product "
    "<smiles>{{source}}</smiles>?",
    "Which reactants could have been used to generate the given product "
    "<smiles>{{source}}</smiles>?",
    "With the given product <smiles>{{source}}</smiles>, suggest some "
    "likely reactants that were used in its synthesis.",
    "With the provided product <smiles>{{source}}</smiles>, recommend some "
    "probable reactants that were likely used in its production.",
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_text(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

int num_prompt_templates() {
  return static_cast<int>(std::size(kTemplates));
}

std::string render_template(int template_id, std::string_view product) {
  if (template_id < 1 || template_id > num_prompt_templates())
    throw ConfigError("template id out of range: " +
                      std::to_string(template_id));
  std::string text = kTemplates[template_id - 1];
  const std::string placeholder = "{{source}}";
  size_t pos = text.find(placeholder);
  text.replace(pos, placeholder.size(), std::string(product));
  return text;
}

PromptSpec build_prompt(std::string_view target,
                        const std::vector<FewshotExample> &pool,
                        std::uint64_t seed) {
  constexpr size_t kFewshot = 5;
  if (pool.size() < kFewshot)
    throw PoolTooSmallError("need at least 5 examples, have " +
                            std::to_string(pool.size()));
  std::mt19937_64 rng(splitmix64(seed) ^ hash_text(target));

  PromptSpec spec;
  spec.target_smiles = std::string(target);

  // 5 distinct pool picks via partial Fisher-Yates
  std::vector<size_t> idx(pool.size());
  for (size_t i = 0; i < idx.size(); ++i)
    idx[i] = i;
  for (size_t i = 0; i < kFewshot; ++i) {
    std::uniform_int_distribution<size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }

  std::uniform_int_distribution<int> pick_template(1, num_prompt_templates());
  std::ostringstream out;
  out << kTaskHeader << "\n";
  for (size_t i = 0; i < kFewshot; ++i) {
    const FewshotExample &ex = pool[idx[i]];
    int tid = pick_template(rng);
    std::string query = render_template(tid, ex.product);
    std::string answer = "<smiles>" + ex.reactants + "</smiles>";
    spec.fewshot.emplace_back(query, answer);
    out << "\n" << query << "\n" << answer << "\n";
  }
  spec.template_id = pick_template(rng);
  out << "\n" << render_template(spec.template_id, target) << "\n";
  spec.rendered = out.str();
  return spec;
}

std::vector<FewshotExample> read_fewshot_pool(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open few-shot pool '" + path + "'");
  std::vector<FewshotExample> pool;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    size_t tab = line.find('\t');
    std::string rxn = tab == std::string::npos ? line : line.substr(0, tab);
    size_t gt1 = rxn.find('>');
    size_t gt2 = rxn.rfind('>');
    if (gt1 == std::string::npos || gt2 <= gt1)
      continue;
    FewshotExample ex;
    ex.reactants = rxn.substr(0, gt1);
    ex.product = rxn.substr(gt2 + 1);
    if (!ex.reactants.empty() && !ex.product.empty())
      pool.push_back(std::move(ex));
  }
  return pool;
}

namespace {

// Finds "<maybe-spaces tag maybe-spaces>"; returns position past '>'.
size_t find_tag(std::string_view text, std::string_view tag, bool closing,
                size_t from, size_t *start_out) {
  for (size_t i = from; i < text.size(); ++i) {
    if (text[i] != '<')
      continue;
    size_t j = i + 1;
    while (j < text.size() && text[j] == ' ')
      ++j;
    if (closing) {
      if (j >= text.size() || text[j] != '/')
        continue;
      ++j;
      while (j < text.size() && text[j] == ' ')
        ++j;
    }
    if (text.compare(j, tag.size(), tag) != 0)
      continue;
    j += tag.size();
    while (j < text.size() && text[j] == ' ')
      ++j;
    if (j < text.size() && text[j] == '>') {
      if (start_out != nullptr)
        *start_out = i;
      return j + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<std::string> last_tag_content(std::string_view text,
                                            std::string_view tag) {
  std::optional<std::string> best;
  size_t from = 0;
  while (true) {
    size_t open_end = find_tag(text, tag, false, from, nullptr);
    if (open_end == std::string_view::npos)
      break;
    size_t close_start = 0;
    size_t close_end = find_tag(text, tag, true, open_end, &close_start);
    if (close_end == std::string_view::npos)
      break;
    std::string content;
    for (char c : text.substr(open_end, close_start - open_end))
      if (!std::isspace(static_cast<unsigned char>(c)))
        content += c;
    if (!content.empty())
      best = content;
    from = close_end;
  }
  return best;
}

bool parses_as_molecule_set(std::string_view token) {
  if (token.empty() || token.find('>') != std::string_view::npos)
    return false;
  try {
    parse_smiles(token);
    return true;
  } catch (const ChemError &) {
    return false;
  }
}

}  // namespace

std::optional<std::string> extract_answer(std::string_view completion) {
  if (auto tagged = last_tag_content(completion, "smiles"))
    return tagged;
  if (auto tagged = last_tag_content(completion, "reactants"))
    return tagged;

  // last line token that parses as a molecule set
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= completion.size()) {
    size_t nl = completion.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(completion.substr(start));
      break;
    }
    lines.push_back(completion.substr(start, nl - start));
    start = nl + 1;
  }
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    std::string_view line = *it;
    std::vector<std::string_view> tokens;
    size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() &&
             std::isspace(static_cast<unsigned char>(line[pos])))
        ++pos;
      size_t end = pos;
      while (end < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[end])))
        ++end;
      if (end > pos)
        tokens.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    for (auto tok = tokens.rbegin(); tok != tokens.rend(); ++tok) {
      std::string_view t = *tok;
      while (!t.empty() && (t.front() == '`' || t.front() == '"' ||
                            t.front() == '\'' || t.front() == '*'))
        t.remove_prefix(1);
      while (!t.empty() && (t.back() == '`' || t.back() == '"' ||
                            t.back() == '\'' || t.back() == '*' ||
                            t.back() == ',' || t.back() == ';' ||
                            t.back() == '.'))
        t.remove_suffix(1);
      // one-letter tokens are indistinguishable from prose ("I", "A", "O")
      if (t.size() < 2)
        continue;
      if (parses_as_molecule_set(t))
        return std::string(t);
    }
  }
  return std::nullopt;
}

std::vector<CompletionRecord> read_completions_jsonl(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open completions file '" + path + "'");
  std::vector<CompletionRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception &e) {
      throw FormatError("completions line " + std::to_string(line_no) + ": " +
                        e.what());
    }
    CompletionRecord rec;
    rec.target_id = j.value("target_id", "");
    rec.target_smiles = j.value("target_smiles", "");
    rec.model_id = j.value("model_id", "");
    rec.provenance = j.value("provenance", path);
    if (j.contains("samples"))
      for (const auto &s : j["samples"])
        rec.samples.push_back(s.get<std::string>());
    if (rec.target_id.empty() || rec.model_id.empty())
      throw FormatError("completions line " + std::to_string(line_no) +
                        ": target_id and model_id are required");
    out.push_back(std::move(rec));
  }
  return out;
}

void write_completions_jsonl(const std::string &path,
                             const std::vector<CompletionRecord> &records) {
  std::ofstream out(path);
  if (!out)
    throw IOError("cannot open '" + path + "' for writing");
  for (const CompletionRecord &rec : records) {
    ordered_json j;
    j["target_id"] = rec.target_id;
    j["target_smiles"] = rec.target_smiles;
    j["model_id"] = rec.model_id;
    j["samples"] = rec.samples;
    if (!rec.provenance.empty())
      j["provenance"] = rec.provenance;
    out << j.dump() << "\n";
  }
}

std::vector<TargetEntry> read_targets_file(const std::string &path,
                                           char delimiter) {
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open targets file '" + path + "'");
  std::vector<TargetEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    size_t sep = line.find(delimiter);
    if (sep == std::string::npos)
      throw FormatError("targets line lacks delimiter: '" + line + "'");
    TargetEntry t;
    t.id = line.substr(0, sep);
    t.smiles = line.substr(sep + 1);
    size_t sep2 = t.smiles.find(delimiter);
    if (sep2 != std::string::npos)
      t.smiles = t.smiles.substr(0, sep2);
    out.push_back(std::move(t));
  }
  return out;
}

BenchmarkReport run_benchmark(const std::vector<TargetEntry> &targets,
                              const std::vector<CompletionRecord> &completions,
                              const Scorer &scorer, const BenchConfig &config) {
  if (targets.empty())
    throw EmptyBenchmarkError("target list is empty");
  if (config.n_samples < 1)
    throw ConfigError("n_samples must be positive");
  for (int k : config.k_list)
    if (k < 1)
      throw ConfigError("K values must be positive");

  BenchmarkReport report;
  report.config = config;
  report.kb_digest = scorer.kb().metadata.fg_digest;
  report.library_size = scorer.library().size();
  for (const FGDefinition &d : scorer.library().definitions())
    report.fg_names.push_back(d.name);

  // (model -> target_id -> record)
  std::map<std::string, std::map<std::string, const CompletionRecord *>>
      by_model;
  std::vector<std::string> dup_issues;
  for (const CompletionRecord &rec : completions) {
    auto &slot = by_model[rec.model_id][rec.target_id];
    if (slot != nullptr)
      dup_issues.push_back("duplicate completions for model " + rec.model_id +
                           " target " + rec.target_id + "; first kept");
    else
      slot = &rec;
  }
  if (by_model.empty())
    throw EmptyBenchmarkError("no completion records");

  for (auto &[model_id, per_target] : by_model) {
    ModelReport mr;
    mr.model_id = model_id;
    mr.issues = dup_issues;

    // per-target scoring is pure over the shared scorer; each worker owns
    // its output slot, issues are merged afterwards
    std::vector<TargetRecord> records(targets.size());
    std::vector<std::vector<std::string>> issue_slots(targets.size());

    auto score_target = [&](size_t ti) {
      const TargetEntry &target = targets[ti];
      TargetRecord record;
      record.target_id = target.id;
      record.target_smiles = target.smiles;
      record.n_samples = config.n_samples;

      std::vector<std::string> samples;
      auto it = per_target.find(target.id);
      if (it == per_target.end()) {
        issue_slots[ti].push_back("no completions for target " + target.id);
      } else {
        samples = it->second->samples;
        if (static_cast<int>(samples.size()) < config.n_samples)
          issue_slots[ti].push_back("incomplete sample list for target " +
                                    target.id + ": " +
                                    std::to_string(samples.size()) + "/" +
                                    std::to_string(config.n_samples));
        if (static_cast<int>(samples.size()) > config.n_samples) {
          issue_slots[ti].push_back("surplus samples for target " +
                                    target.id + " truncated to " +
                                    std::to_string(config.n_samples));
          samples.resize(static_cast<size_t>(config.n_samples));
        }
      }

      std::map<std::string, size_t> seen;  // key -> index in unique list
      for (const std::string &sample : samples) {
        std::optional<std::string> answer = extract_answer(sample);
        if (!answer.has_value()) {
          ++record.n_empty;
          continue;
        }
        std::string key = dedup_key(*answer);
        bool valid = !is_invalid_key(key);
        if (valid)
          ++record.n_valid;
        auto seen_it = seen.find(key);
        if (seen_it != seen.end()) {
          ++record.n_duplicates;
          continue;
        }
        seen.emplace(key, record.unique_predictions.size());
        ScoredPrediction sp;
        sp.key = key;
        sp.raw = *answer;
        if (valid) {
          sp.result = scorer.score(key + ">>" + target.smiles);
        } else {
          sp.result.score = 0;
          sp.result.category = Category::kInvalidInput;
          sp.result.detail = "prediction is not a parseable molecule set";
        }
        record.unique_predictions.push_back(std::move(sp));
      }
      record.n_unique_valid = 0;
      for (const ScoredPrediction &sp : record.unique_predictions)
        if (!is_invalid_key(sp.key))
          ++record.n_unique_valid;
      // samples the model never produced count as empty slots
      record.n_empty += config.n_samples - static_cast<int>(samples.size());
      records[ti] = std::move(record);
    };

    int jobs = std::max(1, config.jobs);
    if (jobs == 1 || targets.size() < 2) {
      for (size_t ti = 0; ti < targets.size(); ++ti)
        score_target(ti);
    } else {
      std::atomic<size_t> next{0};
      std::vector<std::thread> workers;
      int nworkers = std::min<int>(jobs, static_cast<int>(targets.size()));
      for (int w = 0; w < nworkers; ++w)
        workers.emplace_back([&] {
          while (true) {
            size_t ti = next.fetch_add(1);
            if (ti >= targets.size())
              return;
            score_target(ti);
          }
        });
      for (auto &t : workers)
        t.join();
    }

    for (size_t ti = 0; ti < targets.size(); ++ti) {
      for (std::string &issue : issue_slots[ti])
        mr.issues.push_back(std::move(issue));
      TargetRecord &record = records[ti];
      std::vector<CCResult> results;
      results.reserve(record.unique_predictions.size());
      for (const ScoredPrediction &sp : record.unique_predictions)
        results.push_back(sp.result);
      mr.histogram +=
          categorize_samples(results, record.n_duplicates, record.n_empty);
      for (const ScoredPrediction &sp : record.unique_predictions)
        if (sp.result.category == Category::kFgIncompatible)
          for (int fg : sp.result.violating_fgs)
            ++mr.fg_errors[fg];
      mr.targets.push_back(std::move(record));
    }

    mr.av_pt_max = av_pt_max_cc(mr.targets);
    for (int k : config.k_list)
      mr.av_pt_top_k[k] = av_pt_top_k(mr.targets, k);
    mr.unique_pooled = unique_fraction(mr.targets);
    mr.unique_macro = unique_fraction_macro(mr.targets);
    report.models.push_back(std::move(mr));
  }
  return report;
}

namespace {

std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

ordered_json rational_json(const Rational &r) {
  ordered_json j;
  j["exact"] = r.str();
  j["value"] = fixed6(r.value());
  return j;
}

ordered_json histogram_json(const CategoryHistogram &h) {
  ordered_json j;
  j["PASS"] = h.pass;
  j["NO_RC_PRECEDENT"] = h.no_rc_precedent;
  j["FG_INCOMPATIBLE"] = h.fg_incompatible;
  j["INVALID_INPUT"] = h.invalid_input;
  j["MAPPING_FAILED"] = h.mapping_failed;
  j["DUPLICATE"] = h.duplicate;
  j["EMPTY"] = h.empty;
  return j;
}

}  // namespace

std::vector<std::string> emit_report(const BenchmarkReport &report,
                                     const std::string &out_dir,
                                     ReportFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IOError("cannot create output directory '" + out_dir + "'");
  std::vector<std::string> written;

  auto open = [&](const std::string &name) {
    std::ofstream out(out_dir + "/" + name);
    if (!out)
      throw IOError("cannot write '" + out_dir + "/" + name + "'");
    written.push_back(out_dir + "/" + name);
    return out;
  };

  if (format == ReportFormat::kJson || format == ReportFormat::kBoth) {
    ordered_json root;
    ordered_json cfg;
    cfg["k_list"] = report.config.k_list;
    cfg["n_samples"] = report.config.n_samples;
    cfg["seed"] = report.config.seed;
    cfg["kb_digest"] = report.kb_digest;
    cfg["library_size"] = report.library_size;
    root["config"] = cfg;

    ordered_json models = ordered_json::object();
    for (const ModelReport &mr : report.models) {
      ordered_json m;
      ordered_json agg;
      agg["n_targets"] = mr.targets.size();
      agg["unique_fraction"] = rational_json(mr.unique_pooled);
      agg["unique_fraction_macro"] = rational_json(mr.unique_macro);
      agg["av_pt_max_cc"] = rational_json(mr.av_pt_max);
      ordered_json topk = ordered_json::object();
      for (const auto &[k, v] : mr.av_pt_top_k)
        topk[std::to_string(k)] = rational_json(v);
      agg["av_pt_top_k"] = topk;
      agg["categories"] = histogram_json(mr.histogram);
      m["aggregate"] = agg;

      ordered_json fg = ordered_json::object();
      for (const auto &[fg_id, count] : mr.fg_errors) {
        ordered_json cell;
        cell["name"] = fg_id < static_cast<int>(report.fg_names.size())
                           ? report.fg_names[static_cast<size_t>(fg_id)]
                           : "";
        cell["count"] = count;
        fg[std::to_string(fg_id)] = cell;
      }
      m["fg_errors"] = fg;

      ordered_json targets = ordered_json::array();
      for (const TargetRecord &t : mr.targets) {
        ordered_json tj;
        tj["target_id"] = t.target_id;
        tj["target_smiles"] = t.target_smiles;
        tj["n_samples"] = t.n_samples;
        tj["n_valid"] = t.n_valid;
        tj["n_unique_valid"] = t.n_unique_valid;
        tj["n_duplicates"] = t.n_duplicates;
        tj["n_empty"] = t.n_empty;
        tj["max_cc"] = max_cc(t);
        ordered_json cck = ordered_json::object();
        for (int k : report.config.k_list)
          cck[std::to_string(k)] = rational_json(cc_at_k(t, k));
        tj["cc_at_k"] = cck;
        ordered_json preds = ordered_json::array();
        for (const ScoredPrediction &sp : t.unique_predictions) {
          ordered_json pj;
          pj["key"] = sp.key;
          pj["raw"] = sp.raw;
          pj["score"] = sp.result.score;
          pj["category"] = std::string(category_name(sp.result.category));
          pj["matched_level"] = sp.result.matched_level;
          if (sp.result.matched_key.has_value())
            pj["matched_key"] = *sp.result.matched_key;
          if (!sp.result.violating_fgs.empty())
            pj["violating_fgs"] = sp.result.violating_fgs;
          if (!sp.result.doc_refs.empty())
            pj["doc_refs"] = sp.result.doc_refs;
          pj["detail"] = sp.result.detail;
          preds.push_back(pj);
        }
        tj["predictions"] = preds;
        targets.push_back(tj);
      }
      m["targets"] = targets;
      if (!mr.issues.empty())
        m["issues"] = mr.issues;
      models[mr.model_id] = m;
    }
    root["models"] = models;

    auto out = open("report.json");
    out << root.dump(2) << "\n";
  }

  if (format == ReportFormat::kTsv || format == ReportFormat::kBoth) {
    {
      auto out = open("summary.tsv");
      out << "model\tunique\tunique_macro\tav_pt_max_cc";
      for (int k : report.config.k_list)
        out << "\tav_pt_top_" << k;
      out << "\n";
      for (const ModelReport &mr : report.models) {
        out << mr.model_id << "\t" << fixed6(mr.unique_pooled.value()) << "\t"
            << fixed6(mr.unique_macro.value()) << "\t"
            << fixed6(mr.av_pt_max.value());
        for (int k : report.config.k_list)
          out << "\t" << fixed6(mr.av_pt_top_k.at(k).value());
        out << "\n";
      }
    }
    {
      auto out = open("categories.tsv");
      out << "model\tPASS\tNO_RC_PRECEDENT\tFG_INCOMPATIBLE\tINVALID_INPUT\t"
             "MAPPING_FAILED\tDUPLICATE\tEMPTY\ttotal\n";
      for (const ModelReport &mr : report.models) {
        const CategoryHistogram &h = mr.histogram;
        out << mr.model_id << "\t" << h.pass << "\t" << h.no_rc_precedent
            << "\t" << h.fg_incompatible << "\t" << h.invalid_input << "\t"
            << h.mapping_failed << "\t" << h.duplicate << "\t" << h.empty
            << "\t" << h.total() << "\n";
      }
    }
    {
      auto out = open("fg_matrix.tsv");
      out << "model";
      for (int fg = 0; fg < report.library_size; ++fg)
        out << "\t" << fg;
      out << "\n";
      for (const ModelReport &mr : report.models) {
        out << mr.model_id;
        for (int fg = 0; fg < report.library_size; ++fg) {
          auto it = mr.fg_errors.find(fg);
          out << "\t" << (it == mr.fg_errors.end() ? 0 : it->second);
        }
        out << "\n";
      }
    }
  }
  return written;
}

}  // namespace chemcensor
