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

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "asrqe/pairset.hpp"

namespace asrqe::evalsuite {

// Sample correlation coefficients. Each returns an empty optional (never a
// fake 0) when the coefficient is undefined: fewer than two points, or a
// constant side. Mismatched lengths throw.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);
// Pearson over fractional (average) ranks.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);
// Kendall tau-b (tie-adjusted).
std::optional<double> kendall(const std::vector<double>& x, const std::vector<double>& y);

struct ScoredRecord {
  std::string utt_id;
  std::string source_id;
  double score = 0.0;
  std::optional<double> wer;
};

struct TripleCorr {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> kendall;
};

struct CorrelationReport {
  // Correlation of within-utterance ranks, pooled over utterances: per
  // utterance, hypotheses are ranked by score (higher = rank 1) and by WER
  // (lower = rank 1); the pooled rank vectors are then correlated.
  // Single-hypothesis utterances carry no ranking signal and are skipped
  // here (counted below), but still contribute to vs_score.
  TripleCorr vs_rank;
  // Correlation of -score against WER, pooled over all hypotheses.
  TripleCorr vs_score;
  size_t n_utts = 0;
  size_t n_hyps = 0;
  size_t n_single_hyp_utts = 0;
};

// Every record must carry a wer; throws naming the first offender otherwise.
CorrelationReport evaluate(const std::vector<ScoredRecord>& records);

using Scorer = std::function<double(const std::string& text)>;

// Scores every hypothesis (sorted by utt_id then source_id for stable
// output). With a reference map, also computes each record's WER; missing
// references are collected and reported in one error.
std::vector<ScoredRecord> score_corpus(const std::vector<pairset::Hypothesis>& hyps,
                                       const Scorer& scorer,
                                       const std::map<std::string, std::string>* refs);

// JSONL: {"utt": str, "source": str, "score": float} plus "wer" when known.
void write_scored_jsonl(const std::filesystem::path& path,
                        const std::vector<ScoredRecord>& records);
std::vector<ScoredRecord> read_scored_jsonl(const std::filesystem::path& path);

// {"vs_rank": {...}, "vs_score": {...}, counts}; undefined coefficients are null.
nlohmann::json report_to_json(const CorrelationReport& rep);
// Small fixed-width table for terminal output.
std::string report_table(const CorrelationReport& rep);

}  // namespace asrqe::evalsuite
