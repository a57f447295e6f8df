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

#include "asrqe/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "asrqe/jsonl.hpp"
#include "asrqe/textmetrics.hpp"

namespace asrqe::ranker {

namespace {

constexpr uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

uint64_t fnv1a64(const char* data, size_t len) {
  uint64_t h = kFnvOffset;
  for (size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= kFnvPrime;
  }
  return h;
}

constexpr uint64_t kInitStream = 0x1217;

}  // namespace

void EncoderConfig::validate() const {
  if (ngram_orders.empty()) throw std::invalid_argument("EncoderConfig: no n-gram orders");
  for (int n : ngram_orders) {
    if (n < 1) throw std::invalid_argument("EncoderConfig: n-gram order must be >= 1");
  }
  if (hash_dim == 0 || (hash_dim & (hash_dim - 1)) != 0) {
    throw std::invalid_argument("EncoderConfig: hash_dim must be a power of two");
  }
  if (hash_dim > (uint64_t{1} << 31)) {
    throw std::invalid_argument("EncoderConfig: hash_dim too large");
  }
  if (embed_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("EncoderConfig: dimensions must be >= 1");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("EncoderConfig: dropout must be in [0,1)");
  }
}

RankerParams RankerParams::zeros(const EncoderConfig& cfg) {
  cfg.validate();
  RankerParams p;
  p.encoder = Mat(cfg.hash_dim, cfg.embed_dim);
  p.head_w1 = Mat(cfg.embed_dim, cfg.hidden_dim);
  p.head_b1.assign(cfg.hidden_dim, 0.0);
  p.head_w2.assign(cfg.hidden_dim, 0.0);
  p.head_b2 = 0.0;
  return p;
}

RankerParams RankerParams::random_init(const EncoderConfig& cfg) {
  RankerParams p = zeros(cfg);
  Rng rng(mix_seed(cfg.seed, kInitStream));
  for (double& w : p.encoder.a) w = rng.range(-0.05, 0.05);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(cfg.embed_dim));
  for (double& w : p.head_w1.a) w = rng.range(-s1, s1);
  const double s2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_dim));
  for (double& w : p.head_w2) w = rng.range(-s2, s2);
  return p;
}

void RankerParams::validate_shapes(const EncoderConfig& cfg) const {
  if (encoder.rows != cfg.hash_dim || encoder.cols != static_cast<size_t>(cfg.embed_dim) ||
      head_w1.rows != static_cast<size_t>(cfg.embed_dim) ||
      head_w1.cols != static_cast<size_t>(cfg.hidden_dim) ||
      head_b1.size() != static_cast<size_t>(cfg.hidden_dim) ||
      head_w2.size() != static_cast<size_t>(cfg.hidden_dim)) {
    throw std::invalid_argument("RankerParams: tensor shapes do not match config");
  }
}

FeatureVec featurize(std::string_view text, const EncoderConfig& cfg) {
  cfg.validate();
  const std::string norm = textmetrics::normalize_text(text);
  FeatureVec out;
  if (norm.empty()) return out;

  const uint64_t mask = cfg.hash_dim - 1;
  std::map<uint32_t, double> counts;
  std::string padded;
  for (int n : cfg.ngram_orders) {
    padded.assign(static_cast<size_t>(n - 1), '^');
    padded += norm;
    padded.append(static_cast<size_t>(n - 1), '$');
    if (padded.size() < static_cast<size_t>(n)) continue;
    for (size_t i = 0; i + n <= padded.size(); ++i) {
      const uint32_t idx = static_cast<uint32_t>(fnv1a64(padded.data() + i, n) & mask);
      counts[idx] += 1.0;
    }
  }
  out.items.assign(counts.begin(), counts.end());
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    const double u = std::exp(-x);
    return 1.0 / (1.0 + u);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double pair_probability(double pos_logit, double neg_logit) {
  return sigmoid(pos_logit - neg_logit);
}

namespace {

double activate(Activation act, double x) {
  return act == Activation::Tanh ? std::tanh(x) : (x > 0.0 ? x : 0.0);
}

double head_from_hidden(const std::vector<double>& h, const RankerParams& params) {
  double logit = params.head_b2;
  for (size_t k = 0; k < h.size(); ++k) logit += params.head_w2[k] * h[k];
  return logit;
}

}  // namespace

ForwardTrace forward(const FeatureVec& features, const RankerParams& params,
                     const EncoderConfig& cfg, bool train_mode, Rng* rng) {
  params.validate_shapes(cfg);
  ForwardTrace t;
  t.embed.assign(cfg.embed_dim, 0.0);
  for (const auto& [idx, count] : features.items) {
    const double* row = &params.encoder.a[static_cast<size_t>(idx) * cfg.embed_dim];
    for (int j = 0; j < cfg.embed_dim; ++j) t.embed[j] += count * row[j];
  }

  t.h_pre.assign(cfg.hidden_dim, 0.0);
  for (int k = 0; k < cfg.hidden_dim; ++k) {
    double v = params.head_b1[k];
    for (int j = 0; j < cfg.embed_dim; ++j) v += t.embed[j] * params.head_w1(j, k);
    t.h_pre[k] = v;
  }
  t.h.resize(cfg.hidden_dim);
  for (int k = 0; k < cfg.hidden_dim; ++k) t.h[k] = activate(cfg.activation, t.h_pre[k]);

  const bool dropping = train_mode && cfg.dropout > 0.0;
  if (dropping) {
    if (!rng) throw std::invalid_argument("forward: train-mode dropout needs an rng");
    t.drop_mask.resize(cfg.hidden_dim);
    const double keep_scale = 1.0 / (1.0 - cfg.dropout);
    std::vector<double> dropped(cfg.hidden_dim);
    for (int k = 0; k < cfg.hidden_dim; ++k) {
      t.drop_mask[k] = rng->uniform() < cfg.dropout ? 0.0 : keep_scale;
      dropped[k] = t.h[k] * t.drop_mask[k];
    }
    t.logit = head_from_hidden(dropped, params);
  } else {
    t.logit = head_from_hidden(t.h, params);
  }

  if (!std::isfinite(t.logit)) {
    throw std::runtime_error("ranker: non-finite logit (check parameters for overflow)");
  }
  return t;
}

double score_features(const FeatureVec& features, const RankerParams& params,
                      const EncoderConfig& cfg, bool train_mode, Rng* rng) {
  return forward(features, params, cfg, train_mode, rng).logit;
}

double score(std::string_view text, const RankerParams& params, const EncoderConfig& cfg,
             bool train_mode, Rng* rng) {
  return score_features(featurize(text, cfg), params, cfg, train_mode, rng);
}

double score_embedding(const std::vector<double>& embedding, const RankerParams& params,
                       const EncoderConfig& cfg) {
  params.validate_shapes(cfg);
  if (embedding.size() != static_cast<size_t>(cfg.embed_dim)) {
    throw std::runtime_error("score_embedding: dimension mismatch: vector has " +
                             std::to_string(embedding.size()) + ", config expects " +
                             std::to_string(cfg.embed_dim));
  }
  std::vector<double> h(cfg.hidden_dim);
  for (int k = 0; k < cfg.hidden_dim; ++k) {
    double v = params.head_b1[k];
    for (int j = 0; j < cfg.embed_dim; ++j) v += embedding[j] * params.head_w1(j, k);
    h[k] = activate(cfg.activation, v);
  }
  const double logit = head_from_hidden(h, params);
  if (!std::isfinite(logit)) throw std::runtime_error("ranker: non-finite logit");
  return logit;
}

ExternalEmbeddings ExternalEmbeddings::load_jsonl(const std::filesystem::path& path) {
  ExternalEmbeddings out;
  jsonl::for_each_object(path, [&](const nlohmann::json& o, size_t lineno) {
    try {
      const auto text = o.at("text").get<std::string>();
      auto vec = o.at("vec").get<std::vector<double>>();
      if (out.dim_ == 0) {
        out.dim_ = static_cast<int>(vec.size());
      } else if (vec.size() != static_cast<size_t>(out.dim_)) {
        throw std::runtime_error("dimension mismatch: expected " + std::to_string(out.dim_) +
                                 ", got " + std::to_string(vec.size()));
      }
      out.by_text_[text] = std::move(vec);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": bad embedding record: " + e.what());
    }
  });
  return out;
}

const std::vector<double>& ExternalEmbeddings::lookup(const std::string& text) const {
  auto it = by_text_.find(text);
  if (it == by_text_.end()) {
    throw std::runtime_error("external embeddings: no vector for text '" + text + "'");
  }
  return it->second;
}

double score_external(const std::string& text, const ExternalEmbeddings& emb,
                      const RankerParams& params, const EncoderConfig& cfg) {
  const auto& vec = emb.lookup(text);
  if (emb.dim() != cfg.embed_dim) {
    throw std::runtime_error("external embeddings: dimension " + std::to_string(emb.dim()) +
                             " does not match embed_dim " + std::to_string(cfg.embed_dim));
  }
  return score_embedding(vec, params, cfg);
}

}  // namespace asrqe::ranker
