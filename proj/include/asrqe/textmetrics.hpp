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

#include <string>
#include <string_view>
#include <vector>

namespace asrqe::textmetrics {

// A whitespace-free word sequence. `normalized` records whether the text
// went through normalize_and_tokenize (case-folded, punctuation stripped).
struct TokenSeq {
  std::vector<std::string> tokens;
  bool normalized = false;

  // Validating constructor for hand-built sequences: rejects empty tokens
  // and tokens containing whitespace.
  static TokenSeq from_words(std::vector<std::string> words, bool normalized = false);

  bool operator==(const TokenSeq& other) const { return tokens == other.tokens; }
  size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Tokens joined with single spaces; the canonical string form consumed by
  // the feature hasher and the character LM.
  std::string joined() const;
};

// The fixed, non-configurable normalization policy behind every uncased,
// unpunctuated comparison in this toolkit:
//   - UTF-8 input decoded to codepoints (invalid bytes are dropped);
//   - whitespace (ASCII blanks, NBSP, Unicode space separators) splits tokens;
//   - punctuation, symbols and control characters are deleted in place:
//     all non-alphanumeric ASCII, U+00A1..U+00BF, U+00D7, U+00F7,
//     U+2000..U+206F, U+3001..U+303F;
//   - case folding covers Basic Latin, Latin-1 and Latin Extended-A (the
//     even/odd pairing rule); other scripts pass through unchanged.
// Empty or punctuation-only input yields an empty sequence.
TokenSeq normalize_and_tokenize(std::string_view text);

// normalize_and_tokenize followed by joined(); "" for empty results.
std::string normalize_text(std::string_view text);

struct WERBreakdown {
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
  int ref_len = 0;
  double wer = 0.0;

  int total_edits() const { return substitutions + insertions + deletions; }
};

// Unit-cost Levenshtein distance over whole tokens.
int edit_distance(const TokenSeq& a, const TokenSeq& b);

// Word error rate with minimal-edit alignment: (S+I+D)/|ref|. May exceed 1.
// Convention for an empty reference: every hypothesis token counts as an
// insertion and wer equals the hypothesis length; empty/empty scores 0.
WERBreakdown wer(const TokenSeq& reference, const TokenSeq& hypothesis);

// Order-independent distance used as the self-supervised pair weight:
// edit_distance(a,b) / max(|a|,|b|), in [0,1]. Both empty -> 0.
double symmetric_distance(const TokenSeq& a, const TokenSeq& b);

// Fractional (average) ranks, rank 1 = best; ties receive the mean of the
// positions they occupy. Throws on an empty input.
std::vector<double> rank_by_score(const std::vector<double>& scores, bool higher_is_better);

}  // namespace asrqe::textmetrics
