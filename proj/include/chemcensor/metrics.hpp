//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_METRICS_HPP_
#define CHEMCENSOR_METRICS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chemcensor/scorer.hpp"

namespace chemcensor {

// Exact rational with normalized sign and gcd-reduced terms. Benchmark
// means stay well inside int64 at these magnitudes.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  static Rational integer(std::int64_t n) { return {n, 1}; }

  Rational operator+(const Rational &o) const;
  Rational operator/(std::int64_t k) const;
  bool operator==(const Rational &o) const = default;
  auto operator<=>(const Rational &o) const {
    return num * o.den <=> o.num * den;
  }

  double value() const { return static_cast<double>(num) / den; }
  std::string str() const;  // "8/5" or "3"
};

// Canonical dedup key for a reactant-set prediction: canonical SMILES of
// each '.'-component, sorted and joined; atom maps stripped. Unparseable
// predictions get a sentinel key carrying the raw text so distinct invalid
// outputs stay distinct.
std::string dedup_key(std::string_view prediction);
bool is_invalid_key(std::string_view key);

struct ScoredPrediction {
  std::string key;
  std::string raw;  // as extracted from the completion
  CCResult result;
};

struct TargetRecord {
  std::string target_id;
  std::string target_smiles;
  int n_samples = 0;
  int n_valid = 0;         // samples whose prediction parses, duplicates too
  int n_unique_valid = 0;  // distinct valid dedup keys
  int n_duplicates = 0;    // samples removed by dedup
  int n_empty = 0;         // samples with no extractable answer
  // first-occurrence order of deduplicated predictions
  std::vector<ScoredPrediction> unique_predictions;
};

// Highest score among deduplicated predictions; 0 when there are none.
int max_cc(const TargetRecord &record);

// Mean of the first K unique scores in first-occurrence order, zero-padded
// up to K.
Rational cc_at_k(const TargetRecord &record, int k);

// Means over targets. Throw EmptyBenchmarkError on an empty record list.
Rational av_pt_max_cc(const std::vector<TargetRecord> &records);
Rational av_pt_top_k(const std::vector<TargetRecord> &records, int k);

// Pooled: sum of unique valid predictions over sum of samples.
Rational unique_fraction(const std::vector<TargetRecord> &records);
// Macro: per-target fraction averaged over targets (reported alongside).
Rational unique_fraction_macro(const std::vector<TargetRecord> &records);

}  // namespace chemcensor

#endif  // CHEMCENSOR_METRICS_HPP_
