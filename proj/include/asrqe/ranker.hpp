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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asrqe/rng.hpp"

namespace asrqe::ranker {

enum class Activation { Tanh, Relu };

// Shared encoder + dense head geometry. The encoder is a trainable linear
// map over hashed character n-grams of the normalized text; the head is two
// dense layers (hidden width 32 by default) with dropout in-between during
// training.
struct EncoderConfig {
  std::vector<int> ngram_orders{2, 3, 4};
  uint64_t hash_dim = uint64_t{1} << 18;
  int embed_dim = 256;
  int hidden_dim = 32;
  double dropout = 0.10;
  Activation activation = Activation::Tanh;
  uint64_t seed = 0;

  void validate() const;
};

// Row-major dense matrix; small enough here that nothing fancier is needed.
struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(size_t r, size_t c) { return a[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return a[r * cols + c]; }
  bool operator==(const Mat&) const = default;
};

// Sparse hashed n-gram counts; indices are in [0, hash_dim), sorted.
struct FeatureVec {
  std::vector<std::pair<uint32_t, double>> items;
  bool empty() const { return items.empty(); }
};

// All trainable tensors of the Siamese branch (both branches share them).
struct RankerParams {
  Mat encoder;                  // hash_dim x embed_dim
  Mat head_w1;                  // embed_dim x hidden_dim
  std::vector<double> head_b1;  // hidden_dim
  std::vector<double> head_w2;  // hidden_dim
  double head_b2 = 0.0;

  static RankerParams zeros(const EncoderConfig& cfg);
  static RankerParams random_init(const EncoderConfig& cfg);
  void validate_shapes(const EncoderConfig& cfg) const;
  bool operator==(const RankerParams&) const = default;
};

// Hashes all character n-grams of the configured orders over the UTF-8 bytes
// of the normalized text. For order n the text is padded with n-1 leading '^'
// and n-1 trailing '$' bytes; the hash is 64-bit FNV-1a masked to hash_dim.
// Empty normalized text yields an empty FeatureVec.
FeatureVec featurize(std::string_view text, const EncoderConfig& cfg);

// Intermediates of one branch evaluation, kept for backpropagation.
struct ForwardTrace {
  std::vector<double> embed;      // encoder output
  std::vector<double> h_pre;      // hidden pre-activation
  std::vector<double> h;          // activated hidden
  std::vector<double> drop_mask;  // inverted-dropout scale per unit (train only)
  double logit = 0.0;
};

// One branch forward pass. Dropout is applied between the head layers only
// when train_mode is set and cfg.dropout > 0; rng must then be non-null.
// Throws if the logit is non-finite.
ForwardTrace forward(const FeatureVec& features, const RankerParams& params,
                     const EncoderConfig& cfg, bool train_mode = false,
                     Rng* rng = nullptr);

double score_features(const FeatureVec& features, const RankerParams& params,
                      const EncoderConfig& cfg, bool train_mode = false,
                      Rng* rng = nullptr);

// Featurize + forward; eval mode is a pure function of (text, params).
double score(std::string_view text, const RankerParams& params, const EncoderConfig& cfg,
             bool train_mode = false, Rng* rng = nullptr);

// Head-only forward for externally supplied embeddings (encoder bypassed).
double score_embedding(const std::vector<double>& embedding, const RankerParams& params,
                       const EncoderConfig& cfg);

// Numerically stable logistic function.
double sigmoid(double x);

// P(pos beats neg) = sigmoid(pos_logit - neg_logit).
double pair_probability(double pos_logit, double neg_logit);

// Pre-pooled per-text embeddings loaded from JSONL {"text": str, "vec": [...]};
// stands in for a pretrained-LM encoder. All vectors must share one dimension.
class ExternalEmbeddings {
 public:
  static ExternalEmbeddings load_jsonl(const std::filesystem::path& path);

  // Throws naming the text when absent.
  const std::vector<double>& lookup(const std::string& text) const;
  int dim() const { return dim_; }
  size_t size() const { return by_text_.size(); }

 private:
  std::unordered_map<std::string, std::vector<double>> by_text_;
  int dim_ = 0;
};

// Lookup + head; throws on a missing key or if the stored dimension does not
// match cfg.embed_dim.
double score_external(const std::string& text, const ExternalEmbeddings& emb,
                      const RankerParams& params, const EncoderConfig& cfg);

}  // namespace asrqe::ranker
