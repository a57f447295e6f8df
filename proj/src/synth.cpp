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

#include "asrqe/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string_view>
#include <unordered_map>
#include <stdexcept>

#include "asrqe/rng.hpp"
#include "asrqe/textmetrics.hpp"

namespace asrqe::synth {

namespace {

constexpr uint64_t kSynthStream = 0x5E27;

enum class Slot { Det, Adj, Noun, Verb, Adv, Prep, Name, Conj };

// Banks are sized so that the synthetic corpora used in tests cannot cover
// every legitimate word adjacency; like natural language, fluent unseen
// junctions stay common, which keeps memorization from standing in for
// quality judgment.
constexpr std::array<const char*, 6> kDet{"the", "a", "this", "that", "every", "some"};
constexpr std::array<const char*, 24> kAdj{
    "small",  "bright", "quiet",  "heavy",  "green",  "sudden", "narrow", "gentle",
    "ancient", "broken", "careful", "distant", "eager", "faded",  "golden", "hollow",
    "iron",   "little", "modern", "pale",   "rough",  "silent", "steep",  "warm"};
constexpr std::array<const char*, 48> kNoun{
    "river",   "engine",  "garden",  "signal",  "teacher", "window",  "market",
    "mountain", "letter",  "bridge",  "doctor",  "station", "forest",  "picture",
    "village", "machine", "harbor",  "kitchen", "island",  "farmer",  "singer",
    "valley",  "castle",  "street",  "painter", "tunnel",  "meadow",  "library",
    "temple",  "anchor",  "barrel",  "candle",  "copper",  "dancer",  "desert",
    "hammer",  "jacket",  "ladder",  "lantern", "mirror",  "needle",  "orchard",
    "palace",  "ribbon",  "saddle",  "shovel",  "trumpet", "wagon"};
constexpr std::array<const char*, 30> kVerb{
    "crossed",  "opened",   "followed", "watched",  "repaired", "reached",
    "painted",  "carried",  "visited",  "ignored",  "answered", "borrowed",
    "climbed",  "counted",  "covered",  "dropped",  "entered",  "finished",
    "gathered", "greeted",  "guarded",  "lifted",   "measured", "noticed",
    "passed",   "planted",  "pushed",   "remembered", "returned", "studied"};
constexpr std::array<const char*, 18> kAdv{
    "slowly", "carefully", "again",   "quietly", "often",  "finally",
    "barely", "bravely",   "calmly",  "gladly",  "lately", "loudly",
    "nearly", "quickly",   "rarely",  "sadly",   "soon",   "today"};
constexpr std::array<const char*, 12> kPrep{"over",   "under",  "near",   "behind",
                                            "through", "beside", "above",  "across",
                                            "along",  "around", "beyond", "toward"};
constexpr std::array<const char*, 24> kName{
    "anna",  "peter", "maria",  "david", "sofia",  "james", "carlos", "elena",
    "felix", "greta", "henry",  "irene", "jonas",  "klara", "leo",    "miriam",
    "noah",  "olivia", "pablo", "rosa",  "simon",  "tara",  "victor", "yusuf"};
constexpr std::array<const char*, 4> kConj{"and", "while", "because", "but"};

// Clause shapes, 3 to 8 tokens each. A sentence chains one to three clauses
// with conjunctions (continuations <= 7 tokens), so lengths span 3..24 with a
// long tail, like real utterance lengths.
const std::vector<std::vector<Slot>> kTemplates{
    {Slot::Name, Slot::Verb, Slot::Adv},
    {Slot::Name, Slot::Verb, Slot::Det, Slot::Noun},
    {Slot::Det, Slot::Noun, Slot::Verb, Slot::Adv},
    {Slot::Name, Slot::Adv, Slot::Verb, Slot::Det, Slot::Noun},
    {Slot::Name, Slot::Verb, Slot::Det, Slot::Adj, Slot::Noun},
    {Slot::Det, Slot::Adj, Slot::Noun, Slot::Verb, Slot::Det, Slot::Noun},
    {Slot::Name, Slot::Verb, Slot::Prep, Slot::Det, Slot::Adj, Slot::Noun},
    {Slot::Det, Slot::Noun, Slot::Prep, Slot::Det, Slot::Noun, Slot::Verb, Slot::Adv},
    {Slot::Det, Slot::Adj, Slot::Noun, Slot::Verb, Slot::Prep, Slot::Det, Slot::Noun,
     Slot::Adv},
};

template <size_t N>
const char* pick(const std::array<const char*, N>& bank, Rng& rng) {
  return bank[rng.index(N)];
}

std::string fill(Slot slot, Rng& rng) {
  switch (slot) {
    case Slot::Det: return pick(kDet, rng);
    case Slot::Adj: return pick(kAdj, rng);
    case Slot::Noun: return pick(kNoun, rng);
    case Slot::Verb: return pick(kVerb, rng);
    case Slot::Adv: return pick(kAdv, rng);
    case Slot::Prep: return pick(kPrep, rng);
    case Slot::Name: return pick(kName, rng);
    case Slot::Conj: return pick(kConj, rng);
  }
  throw std::logic_error("synth: unhandled slot");
}

// Substitutions model decoder confusions. Lexicon-constrained recognizers
// replace misheard words with frequent words of the same syntactic class, so
// the corrupted sentence stays locally fluent; the error distribution is a
// skewed subset of the vocabulary, not uniform over it. Each bank's leading
// entries play the role of those frequent confusions.
template <size_t N>
const char* pick_confusion(const std::array<const char*, N>& bank, Rng& rng) {
  return bank[rng.index(std::max<size_t>(1, N / 6))];
}

std::string confusion_in_slot(Slot slot, Rng& rng) {
  switch (slot) {
    case Slot::Det: return pick_confusion(kDet, rng);
    case Slot::Adj: return pick_confusion(kAdj, rng);
    case Slot::Noun: return pick_confusion(kNoun, rng);
    case Slot::Verb: return pick_confusion(kVerb, rng);
    case Slot::Adv: return pick_confusion(kAdv, rng);
    case Slot::Prep: return pick_confusion(kPrep, rng);
    case Slot::Name: return pick_confusion(kName, rng);
    case Slot::Conj: return pick_confusion(kConj, rng);
  }
  throw std::logic_error("synth: unhandled slot");
}

const std::unordered_map<std::string_view, Slot>& slot_of_word() {
  static const auto* map = [] {
    auto* m = new std::unordered_map<std::string_view, Slot>;
    const auto add = [m](const auto& bank, Slot s) {
      for (const char* w : bank) m->emplace(w, s);
    };
    add(kDet, Slot::Det);
    add(kAdj, Slot::Adj);
    add(kNoun, Slot::Noun);
    add(kVerb, Slot::Verb);
    add(kAdv, Slot::Adv);
    add(kPrep, Slot::Prep);
    add(kName, Slot::Name);
    add(kConj, Slot::Conj);
    return m;
  }();
  return *map;
}

// Same-class confusion when the token is a lexicon word; tokens already
// mangled beyond recognition fall back to an arbitrary content class.
std::string substitute_word(const std::string& tok, Rng& rng) {
  const auto& slots = slot_of_word();
  if (const auto it = slots.find(tok); it != slots.end()) {
    return confusion_in_slot(it->second, rng);
  }
  switch (rng.index(5)) {
    case 0: return pick_confusion(kNoun, rng);
    case 1: return pick_confusion(kVerb, rng);
    case 2: return pick_confusion(kAdj, rng);
    case 3: return pick_confusion(kAdv, rng);
    default: return pick_confusion(kPrep, rng);
  }
}

std::vector<std::string> make_sentence(Rng& rng) {
  std::vector<std::string> tokens;
  const auto& first = kTemplates[rng.index(kTemplates.size())];
  for (Slot s : first) tokens.push_back(fill(s, rng));
  double p_continue = 0.5;
  while (tokens.size() < 18 && rng.uniform() < p_continue) {
    size_t next_idx = rng.index(kTemplates.size());
    while (kTemplates[next_idx].size() > 7) next_idx = rng.index(kTemplates.size());
    tokens.push_back(fill(Slot::Conj, rng));
    for (Slot s : kTemplates[next_idx]) tokens.push_back(fill(s, rng));
    p_continue *= 0.6;
  }
  return tokens;
}

std::string typo(const std::string& word, Rng& rng) {
  std::string out = word;
  const auto letter = [&rng] { return static_cast<char>('a' + rng.index(26)); };
  const size_t pos = rng.index(out.size());
  switch (rng.index(3)) {
    case 0: out[pos] = letter(); break;
    case 1:
      if (out.size() > 1) out.erase(pos, 1);
      else out[pos] = letter();
      break;
    default: out.insert(pos, 1, letter()); break;
  }
  return out;
}

// Per-token corruption at rate d. The operation mix mimics lexicon-constrained
// ASR decoding, where errors are overwhelmingly real words: substitutions,
// dropped words and stutter-style duplications, plus a small share of
// character-mangled fragments standing in for out-of-vocabulary emissions.
std::vector<std::string> corrupt(const std::vector<std::string>& tokens, double d, Rng& rng) {
  std::vector<std::string> out;
  out.reserve(tokens.size() + 2);
  for (const auto& tok : tokens) {
    if (rng.uniform() >= d) {
      out.push_back(tok);
      continue;
    }
    const double op = rng.uniform();
    if (op < 0.05) {
      out.push_back(typo(tok, rng));
    } else if (op < 0.45) {
      out.push_back(substitute_word(tok, rng));
    } else if (op < 0.80) {
      // deletion
    } else {
      out.push_back(tok);
      out.push_back(tok);
    }
  }
  if (out.empty()) out.push_back(tokens.back());
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += ' ';
    s += tokens[i];
  }
  return s;
}

std::string utt_id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "utt-%05d", i);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_utts < 1) throw std::invalid_argument("SynthConfig: n_utts must be >= 1");
  if (noise_rates.empty()) throw std::invalid_argument("SynthConfig: no noise rates");
  double prev = -1.0;
  for (double r : noise_rates) {
    if (!(r >= 0.0 && r < 1.0)) {
      throw std::invalid_argument("SynthConfig: noise rates must be in [0,1)");
    }
    if (r <= prev) {
      throw std::invalid_argument("SynthConfig: noise rates must be strictly increasing");
    }
    prev = r;
  }
}

SynthCorpus generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(mix_seed(cfg.seed, kSynthStream));
  SynthCorpus corpus;
  corpus.references.reserve(cfg.n_utts);
  corpus.hypotheses.reserve(static_cast<size_t>(cfg.n_utts) * cfg.noise_rates.size());

  for (int u = 0; u < cfg.n_utts; ++u) {
    const std::vector<std::string> ref = make_sentence(rng);
    const std::string id = utt_id(u);
    corpus.references.emplace_back(id, join(ref));
    const auto ref_seq = textmetrics::TokenSeq::from_words(ref);

    std::vector<std::string> prev = ref;
    double prev_rate = 0.0;
    for (size_t level = 0; level < cfg.noise_rates.size(); ++level) {
      const double rate = cfg.noise_rates[level];
      const double d = (rate - prev_rate) / (1.0 - prev_rate);
      if (d > 0.0) prev = corrupt(prev, d, rng);
      prev_rate = rate;

      pairset::Hypothesis h;
      h.utt_id = id;
      h.source_id = "sys-" + std::to_string(level);
      h.level = static_cast<int>(level);
      h.text = join(prev);
      h.ref_wer = textmetrics::wer(ref_seq, textmetrics::TokenSeq::from_words(prev)).wer;
      corpus.hypotheses.push_back(std::move(h));
    }
  }
  return corpus;
}

}  // namespace asrqe::synth
