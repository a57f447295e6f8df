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

#include "asrqe/baseline_lm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "asrqe/textmetrics.hpp"

namespace asrqe::baseline {

namespace {

std::vector<Symbol> to_symbols(std::string_view normalized, const NgramLM* lm) {
  std::vector<Symbol> out;
  out.reserve(normalized.size() + 1);
  for (unsigned char b : normalized) {
    const Symbol s = static_cast<Symbol>(b);
    out.push_back(lm && !lm->knows(s) ? kUnk : s);
  }
  out.push_back(kEnd);
  return out;
}

}  // namespace

bool NgramLM::knows(Symbol s) const {
  return std::binary_search(vocab.begin(), vocab.end(), s);
}

std::string encode_context(const std::vector<Symbol>& ctx) {
  std::string key;
  key.reserve(ctx.size() * 2);
  for (Symbol s : ctx) {
    key.push_back(static_cast<char>(s & 0xFF));
    key.push_back(static_cast<char>(s >> 8));
  }
  return key;
}

NgramLM fit(const std::vector<std::string>& corpus, int order, double smoothing_k) {
  if (corpus.empty()) throw std::invalid_argument("ngram fit: empty corpus");
  if (order < 1) throw std::invalid_argument("ngram fit: order must be >= 1");
  if (!(smoothing_k > 0.0)) throw std::invalid_argument("ngram fit: smoothing_k must be > 0");

  NgramLM lm;
  lm.order = order;
  lm.smoothing_k = smoothing_k;

  std::set<Symbol> observed;
  for (const auto& text : corpus) {
    const std::string norm = textmetrics::normalize_text(text);
    for (unsigned char b : norm) observed.insert(static_cast<Symbol>(b));

    std::vector<Symbol> seq(static_cast<size_t>(order - 1), kStart);
    for (unsigned char b : norm) seq.push_back(static_cast<Symbol>(b));
    seq.push_back(kEnd);

    std::vector<Symbol> ctx(static_cast<size_t>(order - 1));
    for (size_t i = static_cast<size_t>(order - 1); i < seq.size(); ++i) {
      ctx.assign(seq.begin() + (i - (order - 1)), seq.begin() + i);
      ++lm.counts[encode_context(ctx)][seq[i]];
    }
  }

  lm.vocab.assign(observed.begin(), observed.end());
  lm.vocab.push_back(kUnk);
  lm.vocab.push_back(kEnd);
  std::sort(lm.vocab.begin(), lm.vocab.end());
  return lm;
}

double perplexity(const NgramLM& lm, std::string_view text) {
  if (lm.order < 1) throw std::invalid_argument("perplexity: invalid model order");
  const double v = static_cast<double>(lm.vocab_size());
  if (v < 1.0) throw std::invalid_argument("perplexity: empty vocabulary");

  const std::string norm = textmetrics::normalize_text(text);
  const std::vector<Symbol> tail = to_symbols(norm, &lm);
  std::vector<Symbol> seq(static_cast<size_t>(lm.order - 1), kStart);
  seq.insert(seq.end(), tail.begin(), tail.end());

  const double k = lm.smoothing_k;
  double log_sum = 0.0;
  size_t positions = 0;
  std::vector<Symbol> ctx(static_cast<size_t>(lm.order - 1));
  for (size_t i = static_cast<size_t>(lm.order - 1); i < seq.size(); ++i) {
    ctx.assign(seq.begin() + (i - (lm.order - 1)), seq.begin() + i);
    double total = 0.0;
    double count = 0.0;
    auto it = lm.counts.find(encode_context(ctx));
    if (it != lm.counts.end()) {
      for (const auto& [sym, c] : it->second) total += static_cast<double>(c);
      auto jt = it->second.find(seq[i]);
      if (jt != it->second.end()) count = static_cast<double>(jt->second);
    }
    const double p = (count + k) / (total + k * v);
    log_sum += std::log(p);
    ++positions;
  }
  return std::exp(-log_sum / static_cast<double>(positions));
}

double score(const NgramLM& lm, std::string_view text) {
  return -std::log(perplexity(lm, text));
}

}  // namespace asrqe::baseline
