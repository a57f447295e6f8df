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

#include "asrqe/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace asrqe::training {

namespace {

const double kLogFloor = std::log(kLogFloorP);

// Distinct stream tags so shuffling, dropout and supervised pairing draw from
// independent deterministic sequences.
constexpr uint64_t kShuffleStream = 0xE50C;
constexpr uint64_t kDropoutStream = 0xD409;
constexpr uint64_t kSupStream = 0x5CB5;

using FeatCache = std::unordered_map<std::string, ranker::FeatureVec>;

struct PairView {
  const ranker::FeatureVec* pos = nullptr;
  const ranker::FeatureVec* neg = nullptr;
  double weight = 0.0;
};

const ranker::FeatureVec* intern(FeatCache& cache, const std::string& text,
                                 const ranker::EncoderConfig& cfg) {
  auto [it, inserted] = cache.try_emplace(text);
  if (inserted) it->second = ranker::featurize(text, cfg);
  return &it->second;
}

std::vector<PairView> make_views(const std::vector<pairset::RankedPair>& pairs,
                                 FeatCache& cache, const ranker::EncoderConfig& cfg) {
  std::vector<PairView> views;
  views.reserve(pairs.size());
  for (const auto& pr : pairs) {
    views.push_back({intern(cache, pr.pos_text, cfg), intern(cache, pr.neg_text, cfg),
                     pr.weight});
  }
  return views;
}

void backprop_branch(const ranker::FeatureVec& fv, const ranker::ForwardTrace& tr,
                     double dlogit, const ranker::RankerParams& params,
                     const ranker::EncoderConfig& cfg, RankerGrad& g) {
  const size_t embed = static_cast<size_t>(cfg.embed_dim);
  const size_t hidden = static_cast<size_t>(cfg.hidden_dim);
  const bool dropped = !tr.drop_mask.empty();

  g.head_b2 += dlogit;
  std::vector<double> dh_pre(hidden);
  for (size_t k = 0; k < hidden; ++k) {
    const double mask = dropped ? tr.drop_mask[k] : 1.0;
    g.head_w2[k] += dlogit * tr.h[k] * mask;
    const double dh = dlogit * params.head_w2[k] * mask;
    const double act_grad = cfg.activation == ranker::Activation::Tanh
                                ? 1.0 - tr.h[k] * tr.h[k]
                                : (tr.h_pre[k] > 0.0 ? 1.0 : 0.0);
    dh_pre[k] = dh * act_grad;
    g.head_b1[k] += dh_pre[k];
  }

  std::vector<double> dembed(embed, 0.0);
  for (size_t j = 0; j < embed; ++j) {
    const double* w1_row = &params.head_w1.a[j * hidden];
    double* g1_row = &g.head_w1.a[j * hidden];
    const double ej = tr.embed[j];
    double acc = 0.0;
    for (size_t k = 0; k < hidden; ++k) {
      g1_row[k] += ej * dh_pre[k];
      acc += w1_row[k] * dh_pre[k];
    }
    dembed[j] = acc;
  }

  for (const auto& [idx, count] : fv.items) {
    auto [it, inserted] = g.encoder_rows.try_emplace(idx);
    if (inserted) it->second.assign(embed, 0.0);
    double* row = it->second.data();
    for (size_t j = 0; j < embed; ++j) row[j] += count * dembed[j];
  }
}

struct BatchOut {
  double loss = 0.0;
  size_t correct = 0;
  size_t n = 0;
};

// Shared loss/accuracy/gradient pass over one batch. In train mode dropout
// draws two mask rows per pair from `rng`, in pair order (pos then neg).
BatchOut run_batch(const std::vector<PairView>& views, const ranker::RankerParams& params,
                   const ranker::EncoderConfig& cfg, bool train_mode, Rng* rng,
                   RankerGrad* grad) {
  if (views.empty()) throw std::invalid_argument("training: empty batch");
  BatchOut out;
  out.n = views.size();
  double loss_sum = 0.0;
  for (const auto& v : views) {
    const auto tp = ranker::forward(*v.pos, params, cfg, train_mode, rng);
    const auto tn = ranker::forward(*v.neg, params, cfg, train_mode, rng);
    const double gap = tp.logit - tn.logit;
    if (gap > 0.0) ++out.correct;
    const double p = ranker::sigmoid(gap);
    loss_sum += -v.weight * std::max(std::log(p), kLogFloor);
    if (grad) {
      const double dgap = pair_logit_grad(gap, v.weight, out.n);
      if (dgap != 0.0) {
        backprop_branch(*v.pos, tp, dgap, params, cfg, *grad);
        backprop_branch(*v.neg, tn, -dgap, params, cfg, *grad);
      }
    }
  }
  out.loss = loss_sum / static_cast<double>(out.n);
  if (!std::isfinite(out.loss)) throw std::runtime_error("training: non-finite batch loss");
  return out;
}

void require_origin(const pairset::PairBatch& batch, pairset::PairOrigin origin,
                    const char* fn) {
  for (const auto& pr : batch.pairs) {
    if (pr.origin != origin) {
      throw std::invalid_argument(std::string(fn) + ": pair origin does not match the loss");
    }
    if (origin == pairset::PairOrigin::SelfSupervised &&
        !(pr.weight >= 0.0 && pr.weight <= 1.0)) {
      throw std::invalid_argument(std::string(fn) + ": self-supervised weight outside [0,1]");
    }
  }
}

void check_finite(const RankerGrad& g) {
  auto bad = [](double x) { return !std::isfinite(x); };
  for (const auto& [idx, row] : g.encoder_rows) {
    (void)idx;
    if (std::any_of(row.begin(), row.end(), bad)) {
      throw std::runtime_error("training: non-finite gradient");
    }
  }
  if (std::any_of(g.head_w1.a.begin(), g.head_w1.a.end(), bad) ||
      std::any_of(g.head_b1.begin(), g.head_b1.end(), bad) ||
      std::any_of(g.head_w2.begin(), g.head_w2.end(), bad) || bad(g.head_b2)) {
    throw std::runtime_error("training: non-finite gradient");
  }
}

struct Velocity {
  ranker::Mat encoder;
  ranker::Mat w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;

  static Velocity zeros(const ranker::EncoderConfig& cfg) {
    Velocity v;
    v.encoder = ranker::Mat(cfg.hash_dim, cfg.embed_dim);
    v.w1 = ranker::Mat(cfg.embed_dim, cfg.hidden_dim);
    v.b1.assign(cfg.hidden_dim, 0.0);
    v.w2.assign(cfg.hidden_dim, 0.0);
    return v;
  }
};

void sgd_step(ranker::RankerParams& p, Velocity& v, const RankerGrad& g, double lr,
              double mu, const ranker::EncoderConfig& cfg) {
  const size_t embed = static_cast<size_t>(cfg.embed_dim);
  for (size_t r = 0; r < p.encoder.rows; ++r) {
    double* vr = &v.encoder.a[r * embed];
    double* wr = &p.encoder.a[r * embed];
    const auto it = g.encoder_rows.find(static_cast<uint32_t>(r));
    if (it != g.encoder_rows.end()) {
      const double* gr = it->second.data();
      for (size_t j = 0; j < embed; ++j) {
        vr[j] = mu * vr[j] + gr[j];
        wr[j] -= lr * vr[j];
      }
    } else if (mu != 0.0) {
      for (size_t j = 0; j < embed; ++j) {
        vr[j] *= mu;
        wr[j] -= lr * vr[j];
      }
    }
  }
  for (size_t i = 0; i < v.w1.a.size(); ++i) {
    v.w1.a[i] = mu * v.w1.a[i] + g.head_w1.a[i];
    p.head_w1.a[i] -= lr * v.w1.a[i];
  }
  for (size_t k = 0; k < v.b1.size(); ++k) {
    v.b1[k] = mu * v.b1[k] + g.head_b1[k];
    p.head_b1[k] -= lr * v.b1[k];
    v.w2[k] = mu * v.w2[k] + g.head_w2[k];
    p.head_w2[k] -= lr * v.w2[k];
  }
  v.b2 = mu * v.b2 + g.head_b2;
  p.head_b2 -= lr * v.b2;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("TrainConfig: alpha must be in [0,1]");
  }
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("TrainConfig: learning_rate must be finite and >= 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("TrainConfig: momentum must be in [0,1)");
  }
  if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
  if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
  if (!(w_bal > 0.0)) throw std::invalid_argument("TrainConfig: w_bal must be > 0");
}

RankerGrad RankerGrad::zeros_like(const ranker::EncoderConfig& cfg) {
  RankerGrad g;
  g.head_w1 = ranker::Mat(cfg.embed_dim, cfg.hidden_dim);
  g.head_b1.assign(cfg.hidden_dim, 0.0);
  g.head_w2.assign(cfg.hidden_dim, 0.0);
  return g;
}

void RankerGrad::scale(double s) {
  for (auto& [idx, row] : encoder_rows) {
    (void)idx;
    for (double& x : row) x *= s;
  }
  for (double& x : head_w1.a) x *= s;
  for (double& x : head_b1) x *= s;
  for (double& x : head_w2) x *= s;
  head_b2 *= s;
}

void RankerGrad::add_scaled(const RankerGrad& other, double s) {
  for (const auto& [idx, row] : other.encoder_rows) {
    auto [it, inserted] = encoder_rows.try_emplace(idx);
    if (inserted) it->second.assign(row.size(), 0.0);
    for (size_t j = 0; j < row.size(); ++j) it->second[j] += s * row[j];
  }
  for (size_t i = 0; i < head_w1.a.size(); ++i) head_w1.a[i] += s * other.head_w1.a[i];
  for (size_t k = 0; k < head_b1.size(); ++k) head_b1[k] += s * other.head_b1[k];
  for (size_t k = 0; k < head_w2.size(); ++k) head_w2[k] += s * other.head_w2[k];
  head_b2 += s * other.head_b2;
}

double RankerGrad::max_abs() const {
  double m = std::abs(head_b2);
  for (const auto& [idx, row] : encoder_rows) {
    (void)idx;
    for (double x : row) m = std::max(m, std::abs(x));
  }
  for (double x : head_w1.a) m = std::max(m, std::abs(x));
  for (double x : head_b1) m = std::max(m, std::abs(x));
  for (double x : head_w2) m = std::max(m, std::abs(x));
  return m;
}

double pair_logit_grad(double gap, double weight, size_t n) {
  const double p = ranker::sigmoid(gap);
  if (p < kLogFloorP) return 0.0;
  return -(weight / static_cast<double>(n)) * (1.0 - p);
}

double self_loss(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                 const ranker::EncoderConfig& cfg) {
  require_origin(batch, pairset::PairOrigin::SelfSupervised, "self_loss");
  FeatCache cache;
  return run_batch(make_views(batch.pairs, cache, cfg), params, cfg, false, nullptr, nullptr)
      .loss;
}

double sup_loss(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                const ranker::EncoderConfig& cfg) {
  require_origin(batch, pairset::PairOrigin::Supervised, "sup_loss");
  FeatCache cache;
  return run_batch(make_views(batch.pairs, cache, cfg), params, cfg, false, nullptr, nullptr)
      .loss;
}

LossReport combined_loss(const pairset::PairBatch& self_batch,
                         const pairset::PairBatch& sup_batch,
                         const ranker::RankerParams& params,
                         const ranker::EncoderConfig& cfg, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("combined_loss: alpha must be in [0,1]");
  }
  require_origin(self_batch, pairset::PairOrigin::SelfSupervised, "combined_loss");
  require_origin(sup_batch, pairset::PairOrigin::Supervised, "combined_loss");
  FeatCache cache;
  const auto so =
      run_batch(make_views(self_batch.pairs, cache, cfg), params, cfg, false, nullptr, nullptr);
  const auto su =
      run_batch(make_views(sup_batch.pairs, cache, cfg), params, cfg, false, nullptr, nullptr);
  LossReport rep;
  rep.loss_self = so.loss;
  rep.loss_sup = su.loss;
  rep.loss_total = alpha * su.loss + (1.0 - alpha) * so.loss;
  rep.pair_accuracy = static_cast<double>(so.correct + su.correct) /
                      static_cast<double>(so.n + su.n);
  return rep;
}

RankerGrad grad_self(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                     const ranker::EncoderConfig& cfg) {
  require_origin(batch, pairset::PairOrigin::SelfSupervised, "grad_self");
  FeatCache cache;
  RankerGrad g = RankerGrad::zeros_like(cfg);
  run_batch(make_views(batch.pairs, cache, cfg), params, cfg, false, nullptr, &g);
  check_finite(g);
  return g;
}

RankerGrad grad_sup(const pairset::PairBatch& batch, const ranker::RankerParams& params,
                    const ranker::EncoderConfig& cfg) {
  require_origin(batch, pairset::PairOrigin::Supervised, "grad_sup");
  FeatCache cache;
  RankerGrad g = RankerGrad::zeros_like(cfg);
  run_batch(make_views(batch.pairs, cache, cfg), params, cfg, false, nullptr, &g);
  check_finite(g);
  return g;
}

RankerGrad grad_combined(const pairset::PairBatch& self_batch,
                         const pairset::PairBatch& sup_batch,
                         const ranker::RankerParams& params,
                         const ranker::EncoderConfig& cfg, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("grad_combined: alpha must be in [0,1]");
  }
  RankerGrad g = grad_self(self_batch, params, cfg);
  g.scale(1.0 - alpha);
  g.add_scaled(grad_sup(sup_batch, params, cfg), alpha);
  check_finite(g);
  return g;
}

double pair_accuracy(const std::vector<pairset::RankedPair>& pairs,
                     const ranker::RankerParams& params, const ranker::EncoderConfig& cfg) {
  FeatCache cache;
  const auto out = run_batch(make_views(pairs, cache, cfg), params, cfg, false, nullptr, nullptr);
  return static_cast<double>(out.correct) / static_cast<double>(out.n);
}

bool EarlyStopper::observe(double valid_loss) {
  ++seen_;
  if (best_index_ < 0 || valid_loss < best_loss_) {
    best_loss_ = valid_loss;
    best_index_ = seen_;
    bad_ = 0;
    return true;
  }
  ++bad_;
  return false;
}

TrainResult train(const std::vector<pairset::RankedPair>& train_pairs,
                  const std::vector<pairset::RankedPair>& valid_pairs,
                  const std::vector<pairset::Hypothesis>& supervised_stream,
                  const TrainConfig& cfg, const ranker::EncoderConfig& enc_cfg) {
  cfg.validate();
  enc_cfg.validate();
  if (train_pairs.empty()) throw std::invalid_argument("train: no training pairs");
  if (valid_pairs.empty()) throw std::invalid_argument("train: no validation pairs");
  if (cfg.mode == TrainMode::Semi) {
    if (supervised_stream.size() < 2) {
      throw std::invalid_argument("train: semi mode needs at least 2 supervised hypotheses");
    }
    if (cfg.batch_size < 2) {
      throw std::invalid_argument("train: semi mode needs batch_size >= 2");
    }
    for (const auto& h : supervised_stream) {
      if (!h.ref_wer.has_value()) {
        throw std::invalid_argument("train: supervised hypothesis '" + h.utt_id + "/" +
                                    h.source_id + "' lacks ref_wer");
      }
    }
  }

  FeatCache cache;
  const std::vector<PairView> train_views = make_views(train_pairs, cache, enc_cfg);
  const std::vector<PairView> valid_views = make_views(valid_pairs, cache, enc_cfg);
  for (const auto& h : supervised_stream) intern(cache, h.text, enc_cfg);

  ranker::EncoderConfig init_cfg = enc_cfg;
  init_cfg.seed = cfg.seed;  // one seed governs init, shuffling and dropout
  ranker::RankerParams params = ranker::RankerParams::random_init(init_cfg);
  Velocity vel = Velocity::zeros(enc_cfg);

  Rng shuffle_rng(mix_seed(cfg.seed, kShuffleStream));
  Rng drop_rng(mix_seed(cfg.seed, kDropoutStream));
  Rng sup_rng(mix_seed(cfg.seed, kSupStream));

  std::vector<size_t> order(train_pairs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<size_t> sup_order(supervised_stream.size());
  std::iota(sup_order.begin(), sup_order.end(), size_t{0});
  size_t sup_cursor = sup_order.size();  // forces a shuffle before first use

  TrainResult res;
  res.params = params;
  EarlyStopper stopper(cfg.patience);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    shuffle_rng.shuffle(order);

    double self_sum = 0.0;
    size_t self_n = 0;
    double sup_sum = 0.0;
    size_t sup_n = 0;

    // A blown-up run surfaces as a non-finite logit in some forward pass;
    // keep the best parameters seen so far instead of propagating.
    try {
      for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
        const size_t stop = std::min(order.size(), start + cfg.batch_size);
        std::vector<PairView> batch;
        batch.reserve(stop - start);
        for (size_t i = start; i < stop; ++i) batch.push_back(train_views[order[i]]);

        RankerGrad g_self = RankerGrad::zeros_like(enc_cfg);
        const auto so = run_batch(batch, params, enc_cfg, true, &drop_rng, &g_self);
        self_sum += so.loss * static_cast<double>(so.n);
        self_n += so.n;

        if (cfg.mode == TrainMode::Semi) {
          std::vector<pairset::Hypothesis> chunk;
          chunk.reserve(cfg.batch_size);
          for (int b = 0; b < cfg.batch_size; ++b) {
            if (sup_cursor == sup_order.size()) {
              sup_rng.shuffle(sup_order);
              sup_cursor = 0;
            }
            chunk.push_back(supervised_stream[sup_order[sup_cursor++]]);
          }
          const pairset::PairBatch sb =
              pairset::form_supervised_batch(chunk, sup_rng.next_u64(), cfg.w_bal);
          g_self.scale(1.0 - cfg.alpha);
          if (!sb.pairs.empty()) {
            RankerGrad g_sup = RankerGrad::zeros_like(enc_cfg);
            const auto views = make_views(sb.pairs, cache, enc_cfg);
            const auto su = run_batch(views, params, enc_cfg, true, &drop_rng, &g_sup);
            sup_sum += su.loss * static_cast<double>(su.n);
            sup_n += su.n;
            g_self.add_scaled(g_sup, cfg.alpha);
          }
        }
        sgd_step(params, vel, g_self, cfg.learning_rate, cfg.momentum, enc_cfg);
      }

      const auto vo = run_batch(valid_views, params, enc_cfg, false, nullptr, nullptr);

      EpochRecord rec;
      rec.epoch = epoch;
      rec.loss_self = self_sum / static_cast<double>(self_n);
      if (sup_n > 0) rec.loss_sup = sup_sum / static_cast<double>(sup_n);
      if (cfg.mode == TrainMode::Semi) {
        rec.loss_total =
            cfg.alpha * rec.loss_sup.value_or(0.0) + (1.0 - cfg.alpha) * rec.loss_self;
      } else {
        rec.loss_total = rec.loss_self;
      }
      rec.valid_loss = vo.loss;
      rec.pair_acc = static_cast<double>(vo.correct) / static_cast<double>(vo.n);
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.log.push_back(rec);

      if (!std::isfinite(vo.loss)) {
        res.diverged = true;
        break;
      }
      if (stopper.observe(vo.loss)) {
        res.params = params;
        res.best_epoch = epoch;
      }
      if (stopper.should_stop()) break;
    } catch (const std::runtime_error&) {
      res.diverged = true;
      break;
    }
  }
  return res;
}

}  // namespace asrqe::training
