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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace asrqe::pairset {

// One ASR output text for one utterance from one source. `level` orders
// sources by expected quality (lower = better); `ref_wer` is present only
// for supervised data.
struct Hypothesis {
  std::string utt_id;
  std::string source_id;
  std::optional<int> level;
  std::string text;
  std::optional<double> ref_wer;
};

enum class PairOrigin { SelfSupervised, Supervised };

// Ordered (better, worse) text pair with a loss weight. Self-supervised
// weights are the symmetric word-level distance of the two texts, in [0,1];
// supervised weights carry the positive-class balancing weight.
struct RankedPair {
  std::string pos_text;
  std::string neg_text;
  double weight = 0.0;
  PairOrigin origin = PairOrigin::SelfSupervised;

  bool operator==(const RankedPair&) const = default;
};

// Pairs of one utterance, kept together so train/valid splitting can keep
// parallel hypotheses of one recording on one side.
struct UttPairs {
  std::string utt_id;
  std::vector<RankedPair> pairs;
};

struct PairBatch {
  std::vector<RankedPair> pairs;
  uint64_t seed_tag = 0;
};

// Per utterance: deduplicate identical normalized texts (keeping the lowest
// level per unique text), then emit every unordered pair of unique texts as
// (lower level = pos, higher level = neg) weighted by symmetric distance.
// k unique texts yield k(k-1)/2 pairs. Utterances with fewer than two unique
// texts contribute nothing. Throws if a hypothesis lacks a level, or if two
// hypotheses share a level but differ in normalized text.
// Output is sorted by utt_id; only utterances with at least one pair appear.
std::vector<UttPairs> build_self_pairs(
    const std::map<std::string, std::vector<Hypothesis>>& hyps_by_utt);

// Drops every occurrence of any ordered pair whose exact reverse also exists
// anywhere in the corpus, matching on normalized text. Duplicates of the same
// orientation are consistent and retained. Input order is preserved.
// `dropped` (optional) receives the number of removed pairs.
std::vector<RankedPair> drop_inconsistent(const std::vector<RankedPair>& pairs,
                                          size_t* dropped = nullptr);

// Grouped counterpart: reverse-pair matching is global across utterances.
std::vector<UttPairs> drop_inconsistent_grouped(const std::vector<UttPairs>& groups,
                                                size_t* dropped = nullptr);

// Seeded shuffle of utterances, then split; all pairs of one utterance land
// on one side. valid_fraction must be in (0,1); needs at least 2 utterances.
// Both sides are returned sorted by utt_id.
std::pair<std::vector<UttPairs>, std::vector<UttPairs>> split_train_valid(
    const std::vector<UttPairs>& groups, double valid_fraction, uint64_t seed);

// Pairs each supervised hypothesis with a seeded-shuffle partner and labels
// the one with lower ref_wer as positive. Pairs with equal ref_wer, equal
// text, or a self-partner are discarded, so the result may be empty (not an
// error). Every hypothesis must carry ref_wer; batch size must be >= 2.
PairBatch form_supervised_batch(const std::vector<Hypothesis>& batch, uint64_t seed,
                                double w_bal = 1.0);

std::vector<RankedPair> flatten(const std::vector<UttPairs>& groups);
size_t count_pairs(const std::vector<UttPairs>& groups);

// --- JSONL interchange -----------------------------------------------------
// hypotheses: {"utt": str, "source": str, "level": int|null, "text": str}
//             plus optional "ref_wer": float on supervised data
// references: {"utt": str, "text": str}
// pairs:      {"pos": str, "neg": str, "weight": float, "origin": "self"|"sup"}

std::vector<Hypothesis> read_hypotheses_jsonl(const std::filesystem::path& path);
void write_hypotheses_jsonl(const std::filesystem::path& path,
                            const std::vector<Hypothesis>& hyps);
std::map<std::string, std::vector<Hypothesis>> group_by_utt(std::vector<Hypothesis> hyps);

std::map<std::string, std::string> read_references_jsonl(const std::filesystem::path& path);
void write_references_jsonl(const std::filesystem::path& path,
                            const std::vector<std::pair<std::string, std::string>>& refs);

std::vector<RankedPair> read_pairs_jsonl(const std::filesystem::path& path);
void write_pairs_jsonl(const std::filesystem::path& path,
                       const std::vector<RankedPair>& pairs);

}  // namespace asrqe::pairset
