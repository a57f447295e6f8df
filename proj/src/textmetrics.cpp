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

#include "asrqe/textmetrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace asrqe::textmetrics {

namespace {

bool is_space_cp(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_stripped_cp(uint32_t cp) {
  if (cp < 0x30) return true;                       // controls + ASCII punct below '0'
  if (cp <= 0x7F) {
    return !((cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') ||
             (cp >= 'a' && cp <= 'z'));
  }
  if (cp <= 0x9F) return true;                      // C1 controls
  if (cp >= 0xA1 && cp <= 0xBF) return true;        // Latin-1 punctuation/symbols
  if (cp == 0xD7 || cp == 0xF7) return true;        // multiplication/division signs
  if (cp >= 0x2000 && cp <= 0x206F) return true;    // general punctuation block
  if (cp >= 0x3001 && cp <= 0x303F) return true;    // CJK punctuation
  return false;
}

uint32_t fold_case_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1
  // Latin Extended-A: upper/lower pairs alternate.
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;  // Y with diaeresis
  if (cp >= 0x179 && cp <= 0x17E && cp % 2 == 1) return cp + 1;
  return cp;
}

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes the next codepoint; returns false on an invalid sequence, in which
// case exactly one byte is consumed and dropped.
bool next_codepoint(std::string_view s, size_t& i, uint32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) { cp = b0; ++i; return true; }
  int extra;
  if ((b0 & 0xE0) == 0xC0) { cp = b0 & 0x1F; extra = 1; }
  else if ((b0 & 0xF0) == 0xE0) { cp = b0 & 0x0F; extra = 2; }
  else if ((b0 & 0xF8) == 0xF0) { cp = b0 & 0x07; extra = 3; }
  else { ++i; return false; }
  if (i + 1 + extra > s.size()) { ++i; return false; }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) { ++i; return false; }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += 1 + extra;
  return true;
}

}  // namespace

TokenSeq TokenSeq::from_words(std::vector<std::string> words, bool normalized) {
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("TokenSeq: empty token");
    for (char c : w) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
        throw std::invalid_argument("TokenSeq: token contains whitespace: '" + w + "'");
      }
    }
  }
  return TokenSeq{std::move(words), normalized};
}

std::string TokenSeq::joined() const {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

TokenSeq normalize_and_tokenize(std::string_view text) {
  TokenSeq seq;
  seq.normalized = true;
  std::string current;
  size_t i = 0;
  while (i < text.size()) {
    uint32_t cp = 0;
    if (!next_codepoint(text, i, cp)) continue;
    if (is_space_cp(cp)) {
      if (!current.empty()) seq.tokens.push_back(std::move(current)), current.clear();
      continue;
    }
    if (is_stripped_cp(cp)) continue;
    append_utf8(current, fold_case_cp(cp));
  }
  if (!current.empty()) seq.tokens.push_back(std::move(current));
  return seq;
}

std::string normalize_text(std::string_view text) {
  return normalize_and_tokenize(text).joined();
}

int edit_distance(const TokenSeq& a, const TokenSeq& b) {
  const size_t m = a.size(), n = b.size();
  std::vector<int> prev(n + 1), cur(n + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= n; ++j) {
      if (a.tokens[i - 1] == b.tokens[j - 1]) {
        cur[j] = prev[j - 1];
      } else {
        cur[j] = 1 + std::min({prev[j], cur[j - 1], prev[j - 1]});
      }
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

WERBreakdown wer(const TokenSeq& reference, const TokenSeq& hypothesis) {
  const size_t m = reference.size(), n = hypothesis.size();
  WERBreakdown out;
  out.ref_len = static_cast<int>(m);

  // Full matrix plus backtrace so the S/I/D split is available.
  std::vector<std::vector<int>> d(m + 1, std::vector<int>(n + 1, 0));
  for (size_t i = 0; i <= m; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= n; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      if (reference.tokens[i - 1] == hypothesis.tokens[j - 1]) {
        d[i][j] = d[i - 1][j - 1];
      } else {
        d[i][j] = 1 + std::min({d[i - 1][j - 1], d[i - 1][j], d[i][j - 1]});
      }
    }
  }

  // Backtrace; tie order fixed: match, substitution, deletion, insertion.
  size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && reference.tokens[i - 1] == hypothesis.tokens[j - 1] &&
        d[i][j] == d[i - 1][j - 1]) {
      --i; --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++out.substitutions; --i; --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++out.deletions; --i;
    } else {
      ++out.insertions; --j;
    }
  }

  if (m > 0) {
    out.wer = static_cast<double>(out.total_edits()) / static_cast<double>(m);
  } else {
    // Empty-reference convention: wer counts the hypothesis tokens.
    out.wer = static_cast<double>(n);
  }
  return out;
}

double symmetric_distance(const TokenSeq& a, const TokenSeq& b) {
  const size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

std::vector<double> rank_by_score(const std::vector<double>& scores, bool higher_is_better) {
  if (scores.empty()) throw std::invalid_argument("rank_by_score: empty input");
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return higher_is_better ? scores[a] > scores[b] : scores[a] < scores[b];
  });

  std::vector<double> ranks(n, 0.0);
  size_t pos = 0;
  while (pos < n) {
    size_t end = pos + 1;
    while (end < n && scores[order[end]] == scores[order[pos]]) ++end;
    // Positions pos..end-1 (1-based pos+1..end) share the average rank.
    const double avg = (static_cast<double>(pos + 1) + static_cast<double>(end)) / 2.0;
    for (size_t k = pos; k < end; ++k) ranks[order[k]] = avg;
    pos = end;
  }
  return ranks;
}

}  // namespace asrqe::textmetrics
