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

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "asrqe/baseline_lm.hpp"
#include "asrqe/model_io.hpp"
#include "asrqe/rng.hpp"
#include "asrqe/textmetrics.hpp"
#include "test_util.hpp"

using namespace asrqe::baseline;
using asrqe::Rng;

namespace {

std::vector<std::string> natural_corpus() {
  return {
      "the quick brown fox jumps over the lazy dog",
      "she sells sea shells on the sea shore",
      "a watched pot never boils over",
      "the early bird catches the worm",
      "practice makes perfect every single day",
      "all roads lead to rome eventually",
  };
}

}  // namespace

TEST_CASE("unigram fit counts symbols with boundaries") {
  const auto lm = fit({"aa"}, 1, 0.1);
  CHECK(lm.order == 1);
  // One empty context holding: 'a' twice, end marker once.
  REQUIRE(lm.counts.size() == 1);
  const auto& dist = lm.counts.at(encode_context({}));
  CHECK(dist.at(static_cast<Symbol>('a')) == 2);
  CHECK(dist.at(kEnd) == 1);
  CHECK(dist.size() == 2);
  // Vocabulary: observed byte plus the two reserved symbols.
  CHECK(lm.vocab_size() == 3);
  CHECK(lm.knows(static_cast<Symbol>('a')));
  CHECK(lm.knows(kUnk));
  CHECK(lm.knows(kEnd));
}

TEST_CASE("fit is deterministic") {
  const auto a = fit(natural_corpus(), 4, 0.1);
  const auto b = fit(natural_corpus(), 4, 0.1);
  CHECK(a.counts == b.counts);
  CHECK(a.vocab == b.vocab);
}

TEST_CASE("fit validates its arguments") {
  CHECK_THROWS(fit({}, 5, 0.1));
  CHECK_THROWS(fit({"text"}, 0, 0.1));
  CHECK_THROWS(fit({"text"}, 3, 0.0));
  CHECK_THROWS(fit({"text"}, 3, -1.0));
}

TEST_CASE("context counts recount the padded corpus") {
  const auto corpus = natural_corpus();
  const int order = 3;
  const auto lm = fit(corpus, order, 0.1);

  // Independent recount: each text contributes |text|+1 events.
  size_t expected_events = 0;
  for (const auto& text : corpus) {
    expected_events += asrqe::textmetrics::normalize_text(text).size() + 1;
  }
  size_t total = 0;
  for (const auto& [ctx, dist] : lm.counts) {
    CHECK(ctx.size() == static_cast<size_t>(2 * (order - 1)));
    for (const auto& [sym, cnt] : dist) {
      (void)sym;
      total += cnt;
    }
  }
  CHECK(total == expected_events);
}

TEST_CASE("an untrained model is uniform: perplexity equals vocabulary size") {
  NgramLM lm;
  lm.order = 3;
  lm.smoothing_k = 0.1;
  lm.vocab = {static_cast<Symbol>('a'), static_cast<Symbol>('b'),
              static_cast<Symbol>('c'), kUnk, kEnd};
  CHECK(perplexity(lm, "abc") == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(perplexity(lm, "a") == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(perplexity(lm, "") == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("perplexity of the training text approaches one") {
  const double k = 1e-9;
  const auto lm = fit({"ab"}, 3, k);
  // Every context of "ab" was seen exactly once with one continuation, so
  // each of the three positions has probability (1+k)/(1+k*V), V = 4.
  const double v = static_cast<double>(lm.vocab_size());
  REQUIRE(v == 4.0);
  const double expected = (1.0 + k * v) / (1.0 + k);
  CHECK(perplexity(lm, "ab") == doctest::Approx(expected).epsilon(1e-12));
  CHECK(perplexity(lm, "ab") < 1.0 + 1e-6);
}

TEST_CASE("random noise is more perplexing than natural text") {
  const auto lm = fit(natural_corpus(), 4, 0.1);
  const double familiar = perplexity(lm, "the quick brown fox");
  Rng rng(3);
  std::string noise;
  for (int i = 0; i < 20; ++i) {
    noise += static_cast<char>('a' + rng.index(26));
    if (i % 6 == 5) noise += ' ';
  }
  CHECK(perplexity(lm, noise) > familiar);
}

TEST_CASE("smoothed probabilities sum to one over the vocabulary") {
  const auto lm = fit(natural_corpus(), 3, 0.1);
  size_t checked = 0;
  for (const auto& [ctx, dist] : lm.counts) {
    (void)ctx;
    double tot = 0.0;
    for (const auto& [sym, cnt] : dist) {
      (void)sym;
      tot += static_cast<double>(cnt);
    }
    double mass = 0.0;
    for (const Symbol s : lm.vocab) {
      const auto it = dist.find(s);
      const double cnt = it == dist.end() ? 0.0 : static_cast<double>(it->second);
      mass += (cnt + lm.smoothing_k) /
              (tot + lm.smoothing_k * static_cast<double>(lm.vocab_size()));
    }
    CHECK(std::abs(mass - 1.0) < 1e-12);
    if (++checked >= 25) break;
  }
  CHECK(checked > 0);
}

TEST_CASE("perplexity is at least one and deterministic") {
  const auto lm = fit(natural_corpus(), 5, 0.1);
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    std::string text;
    for (int i = 0; i < static_cast<int>(rng.index(15)); ++i) {
      text += static_cast<char>('a' + rng.index(26));
    }
    const double p1 = perplexity(lm, text);
    CHECK(p1 >= 1.0);
    CHECK(perplexity(lm, text) == p1);
  }
}

TEST_CASE("score is the negated log perplexity") {
  const auto lm = fit(natural_corpus(), 4, 0.1);
  const std::string text = "the early bird";
  CHECK(score(lm, text) == doctest::Approx(-std::log(perplexity(lm, text))).epsilon(1e-15));
  // Lower perplexity must mean higher score.
  const double good = score(lm, "the quick brown fox");
  const double bad = score(lm, "zq xv jk wq pf");
  CHECK(good > bad);
}

TEST_CASE("perplexity is unaffected by scoring other texts in between") {
  const auto lm = fit(natural_corpus(), 4, 0.1);
  const double before = perplexity(lm, "the early bird");
  (void)perplexity(lm, "completely unrelated words");
  (void)score(lm, "zzzz");
  CHECK(perplexity(lm, "the early bird") == before);
}

TEST_CASE("model containers round trip") {
  testutil::TempDir tmp;

  asrqe::ranker::EncoderConfig cfg;
  cfg.ngram_orders = {2, 3};
  cfg.hash_dim = uint64_t{1} << 10;
  cfg.embed_dim = 6;
  cfg.hidden_dim = 4;
  cfg.dropout = 0.25;
  cfg.activation = asrqe::ranker::Activation::Relu;
  cfg.seed = 99;
  asrqe::model_io::RankerModel rm;
  rm.config = cfg;
  rm.params = asrqe::ranker::RankerParams::random_init(cfg);

  const auto rpath = tmp / "model.bin";
  asrqe::model_io::save_ranker(rpath, rm);
  const auto rback = asrqe::model_io::load_ranker(rpath);
  CHECK(rback.params == rm.params);
  CHECK(rback.config.ngram_orders == cfg.ngram_orders);
  CHECK(rback.config.hash_dim == cfg.hash_dim);
  CHECK(rback.config.embed_dim == cfg.embed_dim);
  CHECK(rback.config.hidden_dim == cfg.hidden_dim);
  CHECK(rback.config.dropout == cfg.dropout);
  CHECK(rback.config.activation == cfg.activation);
  CHECK(rback.config.seed == cfg.seed);

  const auto lm = fit(natural_corpus(), 3, 0.1);
  const auto npath = tmp / "ngram.bin";
  asrqe::model_io::save_ngram(npath, lm);
  const auto nback = asrqe::model_io::load_ngram(npath);
  CHECK(nback.order == lm.order);
  CHECK(nback.smoothing_k == lm.smoothing_k);
  CHECK(nback.counts == lm.counts);
  CHECK(nback.vocab == lm.vocab);
  CHECK(perplexity(nback, "the early bird") == perplexity(lm, "the early bird"));

  CHECK(asrqe::model_io::peek_kind(rpath) == asrqe::model_io::ModelKind::Ranker);
  CHECK(asrqe::model_io::peek_kind(npath) == asrqe::model_io::ModelKind::NgramBaseline);
}

TEST_CASE("model serialization is byte-deterministic") {
  testutil::TempDir tmp;
  const auto lm = fit(natural_corpus(), 3, 0.1);
  asrqe::model_io::save_ngram(tmp / "a.bin", lm);
  asrqe::model_io::save_ngram(tmp / "b.bin", lm);
  CHECK(testutil::read_file(tmp / "a.bin") == testutil::read_file(tmp / "b.bin"));

  asrqe::ranker::EncoderConfig cfg;
  cfg.hash_dim = uint64_t{1} << 8;
  cfg.embed_dim = 4;
  cfg.hidden_dim = 2;
  asrqe::model_io::RankerModel rm{cfg, asrqe::ranker::RankerParams::random_init(cfg)};
  asrqe::model_io::save_ranker(tmp / "r1.bin", rm);
  asrqe::model_io::save_ranker(tmp / "r2.bin", rm);
  CHECK(testutil::read_file(tmp / "r1.bin") == testutil::read_file(tmp / "r2.bin"));
}

TEST_CASE("model loading rejects corrupt files") {
  testutil::TempDir tmp;

  const auto junk = tmp / "junk.bin";
  testutil::write_file(junk, "NOTAMODELFILE AT ALL");
  CHECK_THROWS(asrqe::model_io::load_any(junk));

  // Wrong kind: an n-gram file through the ranker loader and vice versa.
  const auto lm = fit(natural_corpus(), 2, 0.1);
  const auto npath = tmp / "ngram.bin";
  asrqe::model_io::save_ngram(npath, lm);
  CHECK_THROWS(asrqe::model_io::load_ranker(npath));

  asrqe::ranker::EncoderConfig cfg;
  cfg.hash_dim = uint64_t{1} << 8;
  cfg.embed_dim = 2;
  cfg.hidden_dim = 2;
  const auto rpath = tmp / "ranker.bin";
  asrqe::model_io::save_ranker(rpath, {cfg, asrqe::ranker::RankerParams::zeros(cfg)});
  CHECK_THROWS(asrqe::model_io::load_ngram(rpath));

  // Unsupported version: patch the version field (bytes 8..11).
  auto bytes = testutil::read_file(rpath);
  bytes[8] = 9;
  const auto vpath = tmp / "version.bin";
  testutil::write_file(vpath, bytes);
  try {
    asrqe::model_io::load_any(vpath);
    FAIL("expected a version error");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("9") != std::string::npos);   // found version
    CHECK(msg.find("1") != std::string::npos);   // supported version
  }

  // Truncation and trailing garbage.
  const auto good = testutil::read_file(rpath);
  testutil::write_file(tmp / "short.bin", good.substr(0, good.size() - 3));
  CHECK_THROWS(asrqe::model_io::load_any(tmp / "short.bin"));
  testutil::write_file(tmp / "long.bin", good + "xyz");
  CHECK_THROWS(asrqe::model_io::load_any(tmp / "long.bin"));

  CHECK_THROWS(asrqe::model_io::load_any(tmp / "does_not_exist.bin"));
}
