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
#include <optional>
#include <string>
#include <vector>

#include "asrqe/evalsuite.hpp"
#include "asrqe/training.hpp"

// Command implementations behind the asrqe binary. Each run_* function is
// callable in-process (the test suite uses them directly), performs one
// pipeline step, and writes a manifest next to its outputs.
namespace asrqe::cli {

struct GenPairsOptions {
  std::filesystem::path hyps;
  std::filesystem::path out_dir;
  double valid_frac = 0.2;
  uint64_t seed = 0;
};

struct GenPairsStats {
  size_t n_utts = 0;  // utterances contributing at least one pair
  size_t n_train_pairs = 0;
  size_t n_valid_pairs = 0;
  size_t n_dropped_inconsistent = 0;
};

// hypotheses JSONL -> train_pairs.jsonl + valid_pairs.jsonl + manifest.
GenPairsStats run_gen_pairs(const GenPairsOptions& opt);

struct TrainOptions {
  std::filesystem::path train_pairs;
  std::filesystem::path valid_pairs;
  std::optional<std::filesystem::path> sup;       // supervised hypotheses JSONL
  std::optional<std::filesystem::path> sup_refs;  // fills in missing ref_wer
  std::string mode = "self";                      // self | semi
  double alpha = 0.5;
  int batch = 128;
  double lr = 1e-3;
  double momentum = 0.9;
  int epochs = 50;
  int patience = 3;
  double w_bal = 1.0;
  uint64_t seed = 0;
  std::filesystem::path out_model;
  // Encoder geometry. The library types default to a much larger hashed
  // space; the command defaults are sized for laptop-scale corpora.
  uint64_t hash_dim = uint64_t{1} << 15;
  int embed_dim = 64;
  int hidden_dim = 32;
  double dropout = 0.10;
  std::vector<int> orders{2, 3, 4};
  std::string activation = "tanh";  // tanh | relu
};

struct TrainStats {
  size_t epochs_run = 0;
  int best_epoch = 0;
  double best_valid_loss = 0.0;
  double best_pair_acc = 0.0;
  bool diverged = false;
};

// pairs -> model container + <model>.log.jsonl + manifest.
TrainStats run_train(const TrainOptions& opt);

struct ScoreOptions {
  std::filesystem::path model;
  std::filesystem::path hyps;
  std::optional<std::filesystem::path> refs;  // adds a wer column
  std::filesystem::path out;
};

struct ScoreStats {
  size_t n_scored = 0;
  bool with_wer = false;
};

// model + hypotheses -> scored JSONL + manifest.
ScoreStats run_score(const ScoreOptions& opt);

struct EvalOptions {
  std::filesystem::path scored;
  std::filesystem::path report;
};

// scored JSONL (wer required) -> report JSON + manifest; prints the table.
evalsuite::CorrelationReport run_eval(const EvalOptions& opt);

struct SynthOptions {
  std::filesystem::path out_dir;
  int n_utts = 100;
  int levels = 6;
  std::vector<double> noise_rates{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  uint64_t seed = 0;
};

struct SynthStats {
  size_t n_refs = 0;
  size_t n_hyps = 0;
};

// -> references.jsonl + hypotheses.jsonl + manifest in out_dir.
SynthStats run_synth(const SynthOptions& opt);

struct FitBaselineOptions {
  std::filesystem::path refs;  // references JSONL as the training corpus
  int order = 5;
  double smoothing_k = 0.1;
  std::filesystem::path out_model;
};

struct FitBaselineStats {
  size_t n_texts = 0;
  size_t vocab_size = 0;
  size_t n_contexts = 0;
};

FitBaselineStats run_fit_baseline(const FitBaselineOptions& opt);

// Replays the command recorded in a manifest with its stored configuration.
void run_rerun(const std::filesystem::path& manifest_path);

// Full argv interface. Returns the process exit code: 0 iff no error; all
// failures are printed to stderr as "asrqe: error: <message>".
int main_entry(int argc, const char* const* argv);

}  // namespace asrqe::cli
