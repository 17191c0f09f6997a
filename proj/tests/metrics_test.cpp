//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/metrics.hpp"

#include <doctest.h>

#include <random>

#include "chemcensor/errors.hpp"
#include "support.hpp"

using namespace chemcensor;

namespace {

TargetRecord record_from_scores(const std::vector<int> &unique_scores,
                                int n_samples = 15) {
  TargetRecord r;
  r.target_id = "t";
  r.n_samples = n_samples;
  int i = 0;
  for (int s : unique_scores) {
    ScoredPrediction p;
    p.key = "k" + std::to_string(i++);
    p.result.score = s;
    p.result.category = s > 0 ? Category::kPass : Category::kNoRcPrecedent;
    r.unique_predictions.push_back(std::move(p));
  }
  r.n_unique_valid = static_cast<int>(unique_scores.size());
  r.n_valid = r.n_unique_valid;
  return r;
}

}  // namespace

TEST_CASE("dedup keys collapse component order and traversal") {
  CHECK(dedup_key("CCO.CC(=O)O") == dedup_key("CC(=O)O.OCC"));
  CHECK(dedup_key("  CCO.CC(=O)O  ") == dedup_key("CCO.CC(=O)O"));
  CHECK(dedup_key("CCO") != dedup_key("CCN"));
  CHECK(is_invalid_key(dedup_key("C(")));
  CHECK_FALSE(is_invalid_key(dedup_key("CCO")));
  // distinct invalid texts stay distinct
  CHECK(dedup_key("C(") != dedup_key("C)"));
  // atom maps are no distinction
  CHECK(dedup_key("[CH3:1][OH:2]") == dedup_key("CO"));
}

TEST_CASE("fifteen renderings of one reactant set share a key") {
  Molecule pair = parse_smiles("CCO.CC(=O)O");
  std::string base = dedup_key("CCO.CC(=O)O");
  for (std::uint64_t seed = 0; seed < 15; ++seed)
    CHECK(dedup_key(randomize_traversal(pair, seed)) == base);
}

TEST_CASE("max cc basics") {
  CHECK(max_cc(record_from_scores({3, 0, 5})) == 5);
  CHECK(max_cc(record_from_scores({})) == 0);
  CHECK(max_cc(record_from_scores({0, 0})) == 0);
}

TEST_CASE("worked arithmetic: scores 5 and 3 at K 5 give 1.6") {
  TargetRecord r = record_from_scores({5, 3});
  Rational v = cc_at_k(r, 5);
  CHECK(v == Rational(8, 5));
  CHECK(v.value() == doctest::Approx(1.6));
  // appending duplicates of an existing prediction is a no-op on CC@K
  TargetRecord with_dups = r;
  with_dups.n_duplicates = 10;
  with_dups.n_samples = 15;
  CHECK(cc_at_k(with_dups, 5) == v);
}

TEST_CASE("cc_at_k pads with zeros and clips at K") {
  CHECK(cc_at_k(record_from_scores({}), 7) == Rational(0, 1));
  CHECK(cc_at_k(record_from_scores({5, 5, 5}), 3) == Rational(5, 1));
  CHECK(cc_at_k(record_from_scores({5, 5, 5, 1}), 3) == Rational(5, 1));
  CHECK(cc_at_k(record_from_scores({2, 4, 1}), 2) == Rational(3, 1));
  CHECK_THROWS_AS(cc_at_k(record_from_scores({1}), 0), ConfigError);
}

TEST_CASE("av pt max cc") {
  std::vector<TargetRecord> records = {
      record_from_scores({5}), record_from_scores({3, 1}),
      record_from_scores({}), record_from_scores({0})};
  CHECK(av_pt_max_cc(records) == Rational(2, 1));
  CHECK(av_pt_max_cc({record_from_scores({5})}) == Rational(5, 1));
  CHECK_THROWS_AS(av_pt_max_cc({}), EmptyBenchmarkError);
}

TEST_CASE("av pt top k") {
  std::vector<TargetRecord> records = {record_from_scores({5, 3}),
                                       record_from_scores({})};
  // (1.6 + 0) / 2
  CHECK(av_pt_top_k(records, 5) == Rational(4, 5));
  CHECK_THROWS_AS(av_pt_top_k({}, 3), EmptyBenchmarkError);
}

TEST_CASE("unique fraction pooled and macro") {
  TargetRecord a = record_from_scores({5, 3, 0});  // 3 unique of 15
  TargetRecord b = record_from_scores({});         // 0 unique of 15
  b.n_valid = 0;
  std::vector<TargetRecord> records = {a, b};
  CHECK(unique_fraction(records) == Rational(3, 30));
  CHECK(unique_fraction_macro(records) == Rational(1, 10));
  CHECK(unique_fraction({}) == Rational(0, 1));
}

TEST_CASE("metric oracle: 1000 random instances against the formulas") {
  std::mt19937_64 rng(20260808);
  std::uniform_int_distribution<int> n_targets_dist(1, 8);
  std::uniform_int_distribution<int> n_unique_dist(0, 15);
  std::uniform_int_distribution<int> score_dist(0, 5);
  std::uniform_int_distribution<int> k_dist(1, 12);

  for (int iter = 0; iter < 1000; ++iter) {
    int n_targets = n_targets_dist(rng);
    int k = k_dist(rng);
    std::vector<TargetRecord> records;
    std::vector<std::vector<int>> score_lists;
    for (int t = 0; t < n_targets; ++t) {
      int n_unique = n_unique_dist(rng);
      std::vector<int> scores;
      for (int u = 0; u < n_unique; ++u)
        scores.push_back(score_dist(rng));
      records.push_back(record_from_scores(scores));
      score_lists.push_back(std::move(scores));
    }

    // direct-from-formula evaluation in plain integer arithmetic
    long long sum_max_num = 0;
    long long top_k_num = 0;  // numerator over denominator k * n_targets
    for (const auto &scores : score_lists) {
      int mx = 0;
      long long first_k = 0;
      for (size_t i = 0; i < scores.size(); ++i) {
        mx = std::max(mx, scores[i]);
        if (i < static_cast<size_t>(k))
          first_k += scores[i];
      }
      sum_max_num += mx;
      top_k_num += first_k;
    }

    Rational got_max = av_pt_max_cc(records);
    CHECK(got_max == Rational(sum_max_num, n_targets));
    Rational got_topk = av_pt_top_k(records, k);
    CHECK(got_topk ==
          Rational(top_k_num, static_cast<long long>(k) * n_targets));
    for (int t = 0; t < n_targets; ++t) {
      long long first_k = 0;
      for (size_t i = 0;
           i < score_lists[static_cast<size_t>(t)].size() &&
           i < static_cast<size_t>(k);
           ++i)
        first_k += score_lists[static_cast<size_t>(t)][i];
      CHECK(cc_at_k(records[static_cast<size_t>(t)], k) ==
            Rational(first_k, k));
      int want_max = 0;
      for (int s : score_lists[static_cast<size_t>(t)])
        want_max = std::max(want_max, s);
      CHECK(max_cc(records[static_cast<size_t>(t)]) == want_max);
    }
  }
}

TEST_CASE("bounds: cc_at_k never exceeds max_cc") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> n_unique_dist(0, 20);
  std::uniform_int_distribution<int> score_dist(0, 5);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<int> scores;
    int n = n_unique_dist(rng);
    for (int i = 0; i < n; ++i)
      scores.push_back(score_dist(rng));
    TargetRecord r = record_from_scores(scores);
    int mx = max_cc(r);
    for (int k = 1; k <= 25; k += 3) {
      Rational v = cc_at_k(r, k);
      CHECK(v >= Rational(0, 1));
      CHECK(v <= Rational(mx, 1));
    }
    // non-increasing once K exceeds the unique count
    Rational prev = cc_at_k(r, std::max(1, n));
    for (int k = std::max(1, n); k <= n + 6; ++k) {
      Rational cur = cc_at_k(r, k);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}
