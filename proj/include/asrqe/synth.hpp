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
#include <string>
#include <utility>
#include <vector>

#include "asrqe/pairset.hpp"

namespace asrqe::synth {

// Seeded benchmark generator: clean template-grammar sentences plus one
// corrupted hypothesis per noise level, standing in for a fleet of ASR
// systems of ordered quality.
struct SynthConfig {
  int n_utts = 100;
  // Expected corrupted-token fraction per level, strictly increasing, each
  // in [0, 1). A leading 0 makes level 0 the clean reference.
  std::vector<double> noise_rates{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  uint64_t seed = 0;

  void validate() const;
};

struct SynthCorpus {
  std::vector<std::pair<std::string, std::string>> references;  // (utt_id, text)
  // n_utts * levels entries; level and ref_wer are always set, so the output
  // doubles as a supervised stream.
  std::vector<pairset::Hypothesis> hypotheses;
};

// Corruption is applied cumulatively: level l is a further-corrupted copy of
// level l-1, at the incremental rate that brings the expected fraction of
// surviving clean tokens to 1 - noise_rates[l]. This keeps realized quality
// monotone in the level for each utterance, not just on corpus average.
// Token operations: substitution (character typo or word swap-in), deletion,
// insertion (random word); at least one token always survives.
SynthCorpus generate(const SynthConfig& cfg);

}  // namespace asrqe::synth
