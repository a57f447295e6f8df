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
#include <optional>
#include <unordered_map>
#include <vector>

#include "asrqe/pairset.hpp"
#include "asrqe/ranker.hpp"
#include "asrqe/rng.hpp"

namespace asrqe::training {

enum class TrainMode { SelfOnly, Semi };

struct TrainConfig {
  double alpha = 0.5;           // supervised-loss weight in the combined objective
  int batch_size = 128;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int max_epochs = 50;
  int patience = 3;             // epochs without validation improvement
  uint64_t seed = 0;
  TrainMode mode = TrainMode::SelfOnly;
  double w_bal = 1.0;           // positive-class weight for supervised pairs

  void validate() const;
};

struct LossReport {
  double loss_self = 0.0;
  std::optional<double> loss_sup;
  double loss_total = 0.0;
  double pair_accuracy = 0.0;
};

// Gradient shaped like RankerParams; encoder rows are stored sparsely since a
// batch touches only the hashed rows of its texts.
struct RankerGrad {
  std::unordered_map<uint32_t, std::vector<double>> encoder_rows;
  ranker::Mat head_w1;
  std::vector<double> head_b1;
  std::vector<double> head_w2;
  double head_b2 = 0.0;

  static RankerGrad zeros_like(const ranker::EncoderConfig& cfg);
  void scale(double s);
  void add_scaled(const RankerGrad& other, double s);
  double max_abs() const;
};

// Numeric contract: log sigma(.) is clamped below at log(1e-12); the gradient
// is zero in the clamped region so loss and gradient always agree.
constexpr double kLogFloorP = 1e-12;

// Weighted pairwise log-loss of one batch, eval mode (no dropout):
//   -(1/N) sum_i w_i * log sigma(logit(pos_i) - logit(neg_i))
// self_loss requires SelfSupervised origin and weights in [0,1]; sup_loss
// requires Supervised origin. Both throw on an empty batch.
double self_loss(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                 const ranker::EncoderConfig& cfg);
double sup_loss(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                const ranker::EncoderConfig& cfg);

// alpha * L_sup + (1 - alpha) * L_self; pair_accuracy pools both batches.
LossReport combined_loss(const pairset::PairBatch& self_batch,
                         const pairset::PairBatch& sup_batch,
                         const ranker::RankerParams& params,
                         const ranker::EncoderConfig& cfg, double alpha);

// Analytic gradients of the three losses, eval mode (dropout off). Throws if
// any gradient entry is non-finite.
RankerGrad grad_self(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                     const ranker::EncoderConfig& cfg);
RankerGrad grad_sup(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                    const ranker::EncoderConfig& cfg);
RankerGrad grad_combined(const pairset::PairBatch& self_batch,
                         const pairset::PairBatch& sup_batch,
                         const ranker::RankerParams& params,
                         const ranker::EncoderConfig& cfg, double alpha);

// d(loss contribution)/d(pos logit) for one pair with the given gap and
// weight in a batch of size n: -(w/n) * (1 - sigma(gap)); zero in the
// clamped region. The negative-logit gradient is its negation.
double pair_logit_grad(double gap, double weight, size_t n);

// Fraction of pairs the model orders correctly (P(pos > neg) > 0.5), eval mode.
double pair_accuracy(const std::vector<pairset::RankedPair>& pairs,
                     const ranker::RankerParams& params, const ranker::EncoderConfig& cfg);

// Tracks the best validation loss; stop() flips after `patience` consecutive
// observations without strict improvement.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}
  // Returns true if this observation improved on the best so far.
  bool observe(double valid_loss);
  bool should_stop() const { return bad_ >= patience_; }
  int best_index() const { return best_index_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  int bad_ = 0;
  int seen_ = 0;
  int best_index_ = -1;
  double best_loss_ = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  double loss_self = 0.0;
  std::optional<double> loss_sup;
  double loss_total = 0.0;
  double valid_loss = 0.0;
  double pair_acc = 0.0;   // held-out pair ranking accuracy
  double seconds = 0.0;
};

struct TrainResult {
  ranker::RankerParams params;  // best-validation parameters, never the last
  std::vector<EpochRecord> log;
  int best_epoch = 0;
  bool diverged = false;
};

// SGD-with-momentum training loop over self-supervised pairs, optionally
// multitasked with a supervised hypothesis stream (Semi mode). Per epoch:
// seeded shuffle, per-batch gradient step, validation loss (self-supervised
// loss on the held-out pairs, eval mode) and early stopping. The smaller
// supervised stream is cycled so every step sees a supervised partner batch.
// Deterministic: same seeds and data give bit-identical parameters.
TrainResult train(const std::vector<pairset::RankedPair>& train_pairs,
                  const std::vector<pairset::RankedPair>& valid_pairs,
                  const std::vector<pairset::Hypothesis>& supervised_stream,
                  const TrainConfig& cfg, const ranker::EncoderConfig& enc_cfg);

}  // namespace asrqe::training
