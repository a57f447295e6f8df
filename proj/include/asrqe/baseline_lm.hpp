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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asrqe::baseline {

// Symbol space of the character model: the UTF-8 bytes of normalized text,
// plus an unknown symbol for bytes never seen in training and an end-of-text
// symbol. The start marker only ever appears in contexts.
using Symbol = uint16_t;
constexpr Symbol kUnk = 256;
constexpr Symbol kEnd = 257;
constexpr Symbol kStart = 258;

// Character n-gram language model with additive-k smoothing. Fluency-only,
// reference-free baseline: lower perplexity is read as higher quality.
struct NgramLM {
  int order = 5;
  double smoothing_k = 0.1;
  // context (order-1 symbols, 2 bytes LE each) -> next symbol -> count
  std::unordered_map<std::string, std::map<Symbol, uint64_t>> counts;
  // Sorted prediction vocabulary: observed bytes + kUnk + kEnd.
  std::vector<Symbol> vocab;

  size_t vocab_size() const { return vocab.size(); }
  bool knows(Symbol s) const;
};

std::string encode_context(const std::vector<Symbol>& ctx);

// Fits counts over boundary-padded byte n-grams of the normalized texts.
// Texts are normalized internally (idempotent for already-normalized input).
// Throws on an empty corpus.
NgramLM fit(const std::vector<std::string>& corpus, int order = 5, double smoothing_k = 0.1);

// exp(-(1/T) sum log p(sym|ctx)) over the T = |text|+1 positions of the
// normalized text plus the end marker. Smoothed probability:
// (count + k) / (context_total + k * vocab_size). Always >= 1. Empty text
// scores the single end-marker prediction.
double perplexity(const NgramLM& lm, std::string_view text);

// -log(perplexity): the "higher = better" orientation used by the evaluation
// protocol and the scored-file convention.
double score(const NgramLM& lm, std::string_view text);

}  // namespace asrqe::baseline
