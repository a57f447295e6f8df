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

#include "asrqe/pairset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "asrqe/jsonl.hpp"
#include "asrqe/rng.hpp"
#include "asrqe/textmetrics.hpp"

namespace asrqe::pairset {

namespace tm = asrqe::textmetrics;

std::vector<UttPairs> build_self_pairs(
    const std::map<std::string, std::vector<Hypothesis>>& hyps_by_utt) {
  std::vector<UttPairs> out;
  for (const auto& [utt_id, hyps] : hyps_by_utt) {
    struct Unique {
      int level;
      std::string raw_text;
      tm::TokenSeq norm;
    };
    // Dedup on normalized text, keeping the lowest level per unique text.
    std::unordered_map<std::string, size_t> by_norm;
    std::vector<Unique> uniques;
    std::unordered_map<int, std::string> norm_at_level;
    for (const auto& h : hyps) {
      if (!h.level.has_value()) {
        throw std::runtime_error("build_self_pairs: hypothesis without level in utterance '" +
                                 utt_id + "' (source '" + h.source_id + "')");
      }
      auto norm = tm::normalize_and_tokenize(h.text);
      const std::string key = norm.joined();
      auto [lv_it, inserted] = norm_at_level.emplace(*h.level, key);
      if (!inserted && lv_it->second != key) {
        throw std::runtime_error("build_self_pairs: utterance '" + utt_id +
                                 "' has two different texts at level " +
                                 std::to_string(*h.level));
      }
      auto it = by_norm.find(key);
      if (it == by_norm.end()) {
        by_norm.emplace(key, uniques.size());
        uniques.push_back({*h.level, h.text, std::move(norm)});
      } else if (*h.level < uniques[it->second].level) {
        uniques[it->second] = {*h.level, h.text, std::move(norm)};
      }
    }
    if (uniques.size() < 2) continue;

    std::sort(uniques.begin(), uniques.end(),
              [](const Unique& a, const Unique& b) { return a.level < b.level; });

    UttPairs group;
    group.utt_id = utt_id;
    for (size_t i = 0; i < uniques.size(); ++i) {
      for (size_t j = i + 1; j < uniques.size(); ++j) {
        RankedPair p;
        p.pos_text = uniques[i].raw_text;
        p.neg_text = uniques[j].raw_text;
        p.weight = tm::symmetric_distance(uniques[i].norm, uniques[j].norm);
        p.origin = PairOrigin::SelfSupervised;
        group.pairs.push_back(std::move(p));
      }
    }
    out.push_back(std::move(group));
  }
  return out;  // std::map iteration keeps utt_id order
}

namespace {

std::string pair_key(const RankedPair& p) {
  return tm::normalize_text(p.pos_text) + '\x1f' + tm::normalize_text(p.neg_text);
}

std::string reverse_key(const RankedPair& p) {
  return tm::normalize_text(p.neg_text) + '\x1f' + tm::normalize_text(p.pos_text);
}

}  // namespace

std::vector<RankedPair> drop_inconsistent(const std::vector<RankedPair>& pairs,
                                          size_t* dropped) {
  std::unordered_set<std::string> seen;
  for (const auto& p : pairs) seen.insert(pair_key(p));
  std::vector<RankedPair> kept;
  kept.reserve(pairs.size());
  size_t removed = 0;
  for (const auto& p : pairs) {
    if (seen.count(reverse_key(p))) {
      ++removed;
    } else {
      kept.push_back(p);
    }
  }
  if (dropped) *dropped = removed;
  return kept;
}

std::vector<UttPairs> drop_inconsistent_grouped(const std::vector<UttPairs>& groups,
                                                size_t* dropped) {
  std::unordered_set<std::string> seen;
  for (const auto& g : groups)
    for (const auto& p : g.pairs) seen.insert(pair_key(p));

  std::vector<UttPairs> out;
  size_t removed = 0;
  for (const auto& g : groups) {
    UttPairs kept{g.utt_id, {}};
    for (const auto& p : g.pairs) {
      if (seen.count(reverse_key(p))) {
        ++removed;
      } else {
        kept.pairs.push_back(p);
      }
    }
    if (!kept.pairs.empty()) out.push_back(std::move(kept));
  }
  if (dropped) *dropped = removed;
  return out;
}

std::pair<std::vector<UttPairs>, std::vector<UttPairs>> split_train_valid(
    const std::vector<UttPairs>& groups, double valid_fraction, uint64_t seed) {
  if (!(valid_fraction > 0.0 && valid_fraction < 1.0)) {
    throw std::invalid_argument("split_train_valid: valid_fraction must be in (0,1)");
  }
  const size_t n = groups.size();
  if (n < 2) {
    throw std::runtime_error("split_train_valid: need at least 2 utterances, got " +
                             std::to_string(n));
  }
  size_t n_valid = static_cast<size_t>(std::llround(valid_fraction * static_cast<double>(n)));
  n_valid = std::min(std::max<size_t>(n_valid, 1), n - 1);

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(mix_seed(seed, 0x517u));
  rng.shuffle(order);

  std::vector<UttPairs> valid, train;
  for (size_t i = 0; i < n; ++i) {
    (i < n_valid ? valid : train).push_back(groups[order[i]]);
  }
  auto by_utt = [](const UttPairs& a, const UttPairs& b) { return a.utt_id < b.utt_id; };
  std::sort(train.begin(), train.end(), by_utt);
  std::sort(valid.begin(), valid.end(), by_utt);
  return {std::move(train), std::move(valid)};
}

PairBatch form_supervised_batch(const std::vector<Hypothesis>& batch, uint64_t seed,
                                double w_bal) {
  if (batch.size() < 2) {
    throw std::invalid_argument("form_supervised_batch: batch size must be >= 2");
  }
  for (const auto& h : batch) {
    if (!h.ref_wer.has_value()) {
      throw std::runtime_error("form_supervised_batch: hypothesis '" + h.utt_id +
                               "/" + h.source_id + "' lacks ref_wer");
    }
  }
  // Self-concatenate and shuffle the copy: hypothesis i meets partner perm[i].
  std::vector<size_t> perm(batch.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng rng(mix_seed(seed, 0x50bu));
  rng.shuffle(perm);

  PairBatch out;
  out.seed_tag = seed;
  for (size_t i = 0; i < batch.size(); ++i) {
    const size_t j = perm[i];
    if (i == j) continue;
    const auto& a = batch[i];
    const auto& b = batch[j];
    if (*a.ref_wer == *b.ref_wer) continue;
    if (a.text == b.text) continue;
    RankedPair p;
    const bool a_pos = *a.ref_wer < *b.ref_wer;
    p.pos_text = a_pos ? a.text : b.text;
    p.neg_text = a_pos ? b.text : a.text;
    p.weight = w_bal;
    p.origin = PairOrigin::Supervised;
    out.pairs.push_back(std::move(p));
  }
  return out;
}

std::vector<RankedPair> flatten(const std::vector<UttPairs>& groups) {
  std::vector<RankedPair> out;
  out.reserve(count_pairs(groups));
  for (const auto& g : groups) out.insert(out.end(), g.pairs.begin(), g.pairs.end());
  return out;
}

size_t count_pairs(const std::vector<UttPairs>& groups) {
  size_t n = 0;
  for (const auto& g : groups) n += g.pairs.size();
  return n;
}

std::vector<Hypothesis> read_hypotheses_jsonl(const std::filesystem::path& path) {
  std::vector<Hypothesis> out;
  jsonl::for_each_object(path, [&](const nlohmann::json& o, size_t lineno) {
    try {
      Hypothesis h;
      h.utt_id = o.at("utt").get<std::string>();
      h.source_id = o.at("source").get<std::string>();
      if (o.contains("level") && !o.at("level").is_null()) {
        h.level = o.at("level").get<int>();
      }
      h.text = o.at("text").get<std::string>();
      if (o.contains("ref_wer") && !o.at("ref_wer").is_null()) {
        h.ref_wer = o.at("ref_wer").get<double>();
      }
      out.push_back(std::move(h));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": bad hypothesis record: " + e.what());
    }
  });
  return out;
}

void write_hypotheses_jsonl(const std::filesystem::path& path,
                            const std::vector<Hypothesis>& hyps) {
  jsonl::Writer w(path);
  for (const auto& h : hyps) {
    nlohmann::json o{{"utt", h.utt_id}, {"source", h.source_id}, {"text", h.text}};
    o["level"] = h.level.has_value() ? nlohmann::json(*h.level) : nlohmann::json(nullptr);
    if (h.ref_wer.has_value()) o["ref_wer"] = *h.ref_wer;
    w.write(o);
  }
  w.close();
}

std::map<std::string, std::vector<Hypothesis>> group_by_utt(std::vector<Hypothesis> hyps) {
  std::map<std::string, std::vector<Hypothesis>> out;
  for (auto& h : hyps) out[h.utt_id].push_back(std::move(h));
  return out;
}

std::map<std::string, std::string> read_references_jsonl(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  jsonl::for_each_object(path, [&](const nlohmann::json& o, size_t lineno) {
    try {
      out[o.at("utt").get<std::string>()] = o.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": bad reference record: " + e.what());
    }
  });
  return out;
}

void write_references_jsonl(const std::filesystem::path& path,
                            const std::vector<std::pair<std::string, std::string>>& refs) {
  jsonl::Writer w(path);
  for (const auto& [utt, text] : refs) {
    w.write(nlohmann::json{{"utt", utt}, {"text", text}});
  }
  w.close();
}

std::vector<RankedPair> read_pairs_jsonl(const std::filesystem::path& path) {
  std::vector<RankedPair> out;
  jsonl::for_each_object(path, [&](const nlohmann::json& o, size_t lineno) {
    try {
      RankedPair p;
      p.pos_text = o.at("pos").get<std::string>();
      p.neg_text = o.at("neg").get<std::string>();
      p.weight = o.at("weight").get<double>();
      const std::string origin = o.at("origin").get<std::string>();
      if (origin == "self") {
        p.origin = PairOrigin::SelfSupervised;
      } else if (origin == "sup") {
        p.origin = PairOrigin::Supervised;
      } else {
        throw std::runtime_error("unknown origin '" + origin + "'");
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": bad pair record: " + e.what());
    }
  });
  return out;
}

void write_pairs_jsonl(const std::filesystem::path& path,
                       const std::vector<RankedPair>& pairs) {
  jsonl::Writer w(path);
  for (const auto& p : pairs) {
    w.write(nlohmann::json{{"pos", p.pos_text},
                           {"neg", p.neg_text},
                           {"weight", p.weight},
                           {"origin", p.origin == PairOrigin::SelfSupervised ? "self" : "sup"}});
  }
  w.close();
}

}  // namespace asrqe::pairset
