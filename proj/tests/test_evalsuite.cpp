// Copyright 2026 The asrqe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"

#include "asrqe/evalsuite.hpp"
#include "asrqe/ranker.hpp"
#include "asrqe/rng.hpp"
#include "asrqe/textmetrics.hpp"
#include "test_util.hpp"

using namespace asrqe::evalsuite;
using asrqe::Rng;

namespace {

// Direct textbook formula with a separate accumulation order.
std::optional<double> oracle_pearson(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return std::nullopt;
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double nn = static_cast<long double>(n);
  const long double cov = sxy - sx * sy / nn;
  const long double vx = sxx - sx * sx / nn;
  const long double vy = syy - sy * sy / nn;
  if (vx <= 0 || vy <= 0) return std::nullopt;
  return static_cast<double>(cov / std::sqrt(vx * vy));
}

// Average ranks by sorting, independent of the library's rank helper.
std::vector<double> oracle_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> oracle_spearman(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  if (x.size() < 2) return std::nullopt;
  return oracle_pearson(oracle_ranks(x), oracle_ranks(y));
}

// Tau-b by full pair enumeration.
std::optional<double> oracle_kendall(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return std::nullopt;
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  // Joint ties belong to both tie counts in tau-b's denominator.
  long long joint = n0 - concordant - discordant - ties_x - ties_y;
  const long double den =
      std::sqrt(static_cast<long double>(n0 - (ties_x + joint)) *
                static_cast<long double>(n0 - (ties_y + joint)));
  if (den == 0) return std::nullopt;
  return static_cast<double>((concordant - discordant) / den);
}

ScoredRecord rec(std::string utt, std::string src, double score, double wer) {
  ScoredRecord r;
  r.utt_id = std::move(utt);
  r.source_id = std::move(src);
  r.score = score;
  r.wer = wer;
  return r;
}

}  // namespace

TEST_CASE("pearson worked examples") {
  CHECK(*pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*pearson({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(*pearson({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("correlations are undefined, not zero, on degenerate input") {
  CHECK(!pearson({1, 1, 1}, {1, 2, 3}).has_value());
  CHECK(!pearson({1, 2, 3}, {5, 5, 5}).has_value());
  CHECK(!pearson({1}, {2}).has_value());
  CHECK(!pearson({}, {}).has_value());
  CHECK(!spearman({2, 2, 2}, {1, 2, 3}).has_value());
  CHECK(!kendall({2, 2, 2}, {1, 2, 3}).has_value());
}

TEST_CASE("correlations reject mismatched lengths") {
  CHECK_THROWS(pearson({1, 2}, {1, 2, 3}));
  CHECK_THROWS(spearman({1, 2}, {1}));
  CHECK_THROWS(kendall({1}, {}));
}

TEST_CASE("spearman worked examples") {
  // Any strictly monotone transform preserves ranks exactly.
  const std::vector<double> x{0.3, 1.2, 2.5, 3.1, 7.0};
  std::vector<double> ex;
  for (double v : x) ex.push_back(std::exp(v));
  CHECK(*spearman(x, ex) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*spearman({1, 2, 3}, {1, 3, 2}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tied values receive averaged ranks") {
  CHECK(oracle_ranks({1, 1, 2}) == std::vector<double>{1.5, 1.5, 3.0});
  CHECK(asrqe::textmetrics::rank_by_score({1, 1, 2}, false) ==
        std::vector<double>{1.5, 1.5, 3.0});
}

TEST_CASE("kendall worked examples") {
  CHECK(*kendall({1, 2, 3, 4}, {1, 2, 3, 4}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*kendall({1, 2, 3}, {1, 3, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(*kendall({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("kendall stays within [-1,1] and handles heavy ties") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const size_t n = 2 + rng.index(30);
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.index(4));
      y[i] = static_cast<double>(rng.index(4));
    }
    const auto tb = kendall(x, y);
    if (tb) {
      CHECK(*tb >= -1.0);
      CHECK(*tb <= 1.0);
    }
  }
}

TEST_CASE("tau-b equals plain tau when there are no ties") {
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    const size_t n = 2 + rng.index(20);
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform();
      y[i] = rng.uniform();
    }
    long long conc = 0, disc = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        ((x[i] - x[j]) * (y[i] - y[j]) > 0 ? conc : disc)++;
      }
    }
    const double tau_a =
        static_cast<double>(conc - disc) / (static_cast<double>(n) * (n - 1) / 2.0);
    CHECK(*kendall(x, y) == doctest::Approx(tau_a).epsilon(1e-12));
  }
}

TEST_CASE("all three coefficients match brute-force oracles") {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const size_t n = 2 + rng.index(49);
    std::vector<double> x(n), y(n);
    const bool with_ties = t % 2 == 0;
    for (size_t i = 0; i < n; ++i) {
      x[i] = with_ties ? static_cast<double>(rng.index(8)) : rng.uniform();
      y[i] = with_ties ? static_cast<double>(rng.index(8)) : rng.uniform();
    }
    const auto check_pair = [&](std::optional<double> got, std::optional<double> want) {
      REQUIRE(got.has_value() == want.has_value());
      if (got) CHECK(*got == doctest::Approx(*want).epsilon(1e-9));
    };
    check_pair(pearson(x, y), oracle_pearson(x, y));
    check_pair(spearman(x, y), oracle_spearman(x, y));
    check_pair(kendall(x, y), oracle_kendall(x, y));
  }
}

TEST_CASE("correlation is symmetric in its arguments") {
  Rng rng(9);
  std::vector<double> x(25), y(25);
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform();
    y[i] = rng.uniform();
  }
  CHECK(*pearson(x, y) == doctest::Approx(*pearson(y, x)).epsilon(1e-12));
  CHECK(*spearman(x, y) == doctest::Approx(*spearman(y, x)).epsilon(1e-12));
  CHECK(*kendall(x, y) == doctest::Approx(*kendall(y, x)).epsilon(1e-12));
}

TEST_CASE("independent scores correlate near zero") {
  Rng rng(11);
  const size_t n = 10000;
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform();
    y[i] = rng.uniform();
  }
  CHECK(std::abs(*pearson(x, y)) <= 0.1);
  CHECK(std::abs(*spearman(x, y)) <= 0.1);
  CHECK(std::abs(*kendall(x, y)) <= 0.1);
}

TEST_CASE("evaluate scores perfectly when the metric is negative wer") {
  std::vector<ScoredRecord> records;
  Rng rng(13);
  for (int u = 0; u < 12; ++u) {
    for (int s = 0; s < 4; ++s) {
      const double w = 0.05 * static_cast<double>(rng.index(12)) + 0.01 * s;
      records.push_back(rec("u" + std::to_string(u), "sys" + std::to_string(s), -w, w));
    }
  }
  const auto rep = evaluate(records);
  CHECK(rep.n_utts == 12);
  CHECK(rep.n_hyps == 48);
  CHECK(rep.n_single_hyp_utts == 0);
  CHECK(*rep.vs_rank.pearson == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep.vs_rank.spearman == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep.vs_rank.kendall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep.vs_score.pearson == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep.vs_score.spearman == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep.vs_score.kendall == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evaluate vs_rank ignores monotone score transforms") {
  Rng rng(17);
  std::vector<ScoredRecord> base;
  for (int u = 0; u < 10; ++u) {
    for (int s = 0; s < 5; ++s) {
      base.push_back(rec("u" + std::to_string(u), "s" + std::to_string(s),
                         rng.uniform() * 4.0 - 2.0, rng.uniform()));
    }
  }
  const auto rep0 = evaluate(base);

  auto affine = base;
  for (auto& r : affine) r.score = 2.5 * r.score + 7.0;
  const auto rep1 = evaluate(affine);

  auto expd = base;
  for (auto& r : expd) r.score = std::exp(r.score);
  const auto rep2 = evaluate(expd);

  CHECK(*rep1.vs_rank.pearson == doctest::Approx(*rep0.vs_rank.pearson).epsilon(1e-12));
  CHECK(*rep1.vs_rank.spearman == doctest::Approx(*rep0.vs_rank.spearman).epsilon(1e-12));
  CHECK(*rep1.vs_rank.kendall == doctest::Approx(*rep0.vs_rank.kendall).epsilon(1e-12));
  CHECK(*rep2.vs_rank.pearson == doctest::Approx(*rep0.vs_rank.pearson).epsilon(1e-12));
  CHECK(*rep2.vs_rank.spearman == doctest::Approx(*rep0.vs_rank.spearman).epsilon(1e-12));
  CHECK(*rep2.vs_rank.kendall == doctest::Approx(*rep0.vs_rank.kendall).epsilon(1e-12));

  // Spearman and Kendall of vs_score are also rank-based, hence invariant.
  CHECK(*rep2.vs_score.spearman == doctest::Approx(*rep0.vs_score.spearman).epsilon(1e-12));
  CHECK(*rep2.vs_score.kendall == doctest::Approx(*rep0.vs_score.kendall).epsilon(1e-12));
}

TEST_CASE("evaluate counts single-hypothesis utterances separately") {
  std::vector<ScoredRecord> records{
      rec("u1", "a", 0.9, 0.1), rec("u1", "b", 0.2, 0.5),
      rec("u2", "a", 0.5, 0.2),  // only one hypothesis
      rec("u3", "a", 0.8, 0.0), rec("u3", "b", 0.1, 0.9),
  };
  const auto rep = evaluate(records);
  CHECK(rep.n_utts == 3);
  CHECK(rep.n_hyps == 5);
  CHECK(rep.n_single_hyp_utts == 1);
  // vs_rank pools 4 ranked hypotheses; vs_score pools all 5.
  CHECK(rep.vs_rank.pearson.has_value());
  CHECK(rep.vs_score.pearson.has_value());
}

TEST_CASE("evaluate requires wer on every record") {
  std::vector<ScoredRecord> records{rec("u1", "a", 0.9, 0.1), rec("u1", "b", 0.2, 0.5)};
  records[1].wer.reset();
  try {
    evaluate(records);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("u1/b") != std::string::npos);
  }
  const auto empty = evaluate({});
  CHECK(empty.n_hyps == 0);
  CHECK(!empty.vs_rank.pearson.has_value());
  CHECK(!empty.vs_score.pearson.has_value());
}

TEST_CASE("score_corpus with a zero-parameter model") {
  asrqe::ranker::EncoderConfig cfg;
  cfg.hash_dim = uint64_t{1} << 10;
  cfg.embed_dim = 4;
  cfg.hidden_dim = 3;
  const auto params = asrqe::ranker::RankerParams::zeros(cfg);

  std::vector<asrqe::pairset::Hypothesis> hyps;
  for (int u = 0; u < 2; ++u) {
    for (int s = 0; s < 3; ++s) {
      asrqe::pairset::Hypothesis h;
      h.utt_id = "u" + std::to_string(u);
      h.source_id = "sys" + std::to_string(s);
      h.text = "text " + std::to_string(u) + " " + std::to_string(s);
      hyps.push_back(h);
    }
  }
  const Scorer scorer = [&](const std::string& text) {
    return asrqe::ranker::score(text, params, cfg);
  };
  const auto recs = score_corpus(hyps, scorer, nullptr);
  REQUIRE(recs.size() == 6);  // 2 utterances x 3 systems
  for (const auto& r : recs) {
    CHECK(r.score == 0.0);
    CHECK(!r.wer.has_value());
  }
  // Sorted by (utt, source).
  CHECK(recs[0].utt_id == "u0");
  CHECK(recs[0].source_id == "sys0");
  CHECK(recs[5].utt_id == "u1");
  CHECK(recs[5].source_id == "sys2");

  const auto again = score_corpus(hyps, scorer, nullptr);
  for (size_t i = 0; i < recs.size(); ++i) {
    CHECK(again[i].score == recs[i].score);
    CHECK(again[i].utt_id == recs[i].utt_id);
  }
}

TEST_CASE("score_corpus computes wer against references") {
  std::vector<asrqe::pairset::Hypothesis> hyps;
  asrqe::pairset::Hypothesis h;
  h.utt_id = "u1";
  h.source_id = "a";
  h.text = "The cat sat";
  hyps.push_back(h);
  h.source_id = "b";
  h.text = "the cat";
  hyps.push_back(h);

  std::map<std::string, std::string> refs{{"u1", "the cat sat"}};
  const auto recs =
      score_corpus(hyps, [](const std::string&) { return 0.0; }, &refs);
  REQUIRE(recs.size() == 2);
  CHECK(*recs[0].wer == 0.0);  // normalization makes "The cat sat" exact
  CHECK(*recs[1].wer == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("score_corpus reports all missing references at once") {
  std::vector<asrqe::pairset::Hypothesis> hyps(2);
  hyps[0].utt_id = "missing1";
  hyps[0].source_id = "a";
  hyps[0].text = "x";
  hyps[1].utt_id = "missing2";
  hyps[1].source_id = "a";
  hyps[1].text = "y";
  std::map<std::string, std::string> refs;
  try {
    score_corpus(hyps, [](const std::string&) { return 0.0; }, &refs);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("missing1") != std::string::npos);
    CHECK(msg.find("missing2") != std::string::npos);
  }
}

TEST_CASE("scored JSONL round trip") {
  testutil::TempDir tmp;
  const auto path = tmp / "scored.jsonl";
  std::vector<ScoredRecord> records{rec("u1", "a", 1.25, 0.5), rec("u2", "b", -0.75, 0.0)};
  records[1].wer.reset();
  write_scored_jsonl(path, records);
  const auto back = read_scored_jsonl(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].utt_id == "u1");
  CHECK(back[0].score == 1.25);
  CHECK(*back[0].wer == 0.5);
  CHECK(back[1].score == -0.75);
  CHECK(!back[1].wer.has_value());
}

TEST_CASE("report serialization handles undefined coefficients") {
  CorrelationReport rep;
  rep.vs_rank.pearson = 0.75;
  rep.n_utts = 3;
  rep.n_hyps = 7;
  rep.n_single_hyp_utts = 2;
  const auto j = report_to_json(rep);
  CHECK(j["vs_rank"]["pearson"] == 0.75);
  CHECK(j["vs_rank"]["spearman"].is_null());
  CHECK(j["vs_score"]["kendall"].is_null());
  CHECK(j["n_utts"] == 3);
  CHECK(j["n_hyps"] == 7);
  CHECK(j["n_single_hyp_utts"] == 2);

  const auto table = report_table(rep);
  CHECK(table.find("0.75") != std::string::npos);
  CHECK(table.find("n/a") != std::string::npos);
}
