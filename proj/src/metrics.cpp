//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "chemcensor/errors.hpp"
#include "chemcensor/smiles.hpp"

namespace chemcensor {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0)
    throw ConfigError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational &o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator/(std::int64_t k) const {
  return Rational(num, den * k);
}

std::string Rational::str() const {
  if (den == 1)
    return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {
constexpr std::string_view kInvalidPrefix = "!invalid!";
}

std::string dedup_key(std::string_view prediction) {
  // trim
  size_t b = prediction.find_first_not_of(" \t\r\n");
  size_t e = prediction.find_last_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return std::string(kInvalidPrefix);
  prediction = prediction.substr(b, e - b + 1);

  try {
    Molecule mol = parse_smiles(prediction);
    SmilesWriteOptions opt;
    opt.order = SmilesWriteOptions::Order::kCanonical;
    opt.include_maps = false;
    return write_smiles(mol, opt);  // components sorted by the writer
  } catch (const ChemError &) {
    return std::string(kInvalidPrefix) + std::string(prediction);
  }
}

bool is_invalid_key(std::string_view key) {
  return key.substr(0, kInvalidPrefix.size()) == kInvalidPrefix;
}

int max_cc(const TargetRecord &record) {
  int best = 0;
  for (const ScoredPrediction &p : record.unique_predictions)
    best = std::max(best, p.result.score);
  return best;
}

Rational cc_at_k(const TargetRecord &record, int k) {
  if (k < 1)
    throw ConfigError("K must be positive");
  std::int64_t sum = 0;
  for (size_t i = 0;
       i < record.unique_predictions.size() && i < static_cast<size_t>(k);
       ++i)
    sum += record.unique_predictions[i].result.score;
  return Rational(sum, k);
}

Rational av_pt_max_cc(const std::vector<TargetRecord> &records) {
  if (records.empty())
    throw EmptyBenchmarkError("no target records");
  std::int64_t sum = 0;
  for (const TargetRecord &r : records)
    sum += max_cc(r);
  return Rational(sum, static_cast<std::int64_t>(records.size()));
}

Rational av_pt_top_k(const std::vector<TargetRecord> &records, int k) {
  if (records.empty())
    throw EmptyBenchmarkError("no target records");
  Rational sum;
  for (const TargetRecord &r : records)
    sum = sum + cc_at_k(r, k);
  return sum / static_cast<std::int64_t>(records.size());
}

Rational unique_fraction(const std::vector<TargetRecord> &records) {
  std::int64_t unique = 0, samples = 0;
  for (const TargetRecord &r : records) {
    unique += r.n_unique_valid;
    samples += r.n_samples;
  }
  if (samples == 0)
    return Rational();
  return Rational(unique, samples);
}

Rational unique_fraction_macro(const std::vector<TargetRecord> &records) {
  if (records.empty())
    return Rational();
  Rational sum;
  for (const TargetRecord &r : records) {
    if (r.n_samples > 0)
      sum = sum + Rational(r.n_unique_valid, r.n_samples);
  }
  return sum / static_cast<std::int64_t>(records.size());
}

}  // namespace chemcensor
