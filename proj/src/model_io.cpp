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

#include "asrqe/model_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace asrqe::model_io {

namespace {

void put_u8(std::ostream& out, uint8_t v) { out.put(static_cast<char>(v)); }

void put_u16(std::ostream& out, uint16_t v) {
  put_u8(out, static_cast<uint8_t>(v));
  put_u8(out, static_cast<uint8_t>(v >> 8));
}

void put_u32(std::ostream& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) put_u8(out, static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::ostream& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) put_u8(out, static_cast<uint8_t>(v >> (8 * i)));
}

void put_i32(std::ostream& out, int32_t v) { put_u32(out, static_cast<uint32_t>(v)); }

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<uint64_t>(v)); }

void put_bytes(std::ostream& out, const std::string& s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

[[noreturn]] void truncated(const std::filesystem::path& path) {
  throw std::runtime_error("model file truncated: " + path.string());
}

uint8_t get_u8(std::istream& in, const std::filesystem::path& path) {
  const int c = in.get();
  if (c == std::char_traits<char>::eof()) truncated(path);
  return static_cast<uint8_t>(c);
}

uint16_t get_u16(std::istream& in, const std::filesystem::path& path) {
  const uint16_t lo = get_u8(in, path);
  const uint16_t hi = get_u8(in, path);
  return static_cast<uint16_t>(lo | (hi << 8));
}

uint32_t get_u32(std::istream& in, const std::filesystem::path& path) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(get_u8(in, path)) << (8 * i);
  return v;
}

uint64_t get_u64(std::istream& in, const std::filesystem::path& path) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(get_u8(in, path)) << (8 * i);
  return v;
}

int32_t get_i32(std::istream& in, const std::filesystem::path& path) {
  return static_cast<int32_t>(get_u32(in, path));
}

double get_f64(std::istream& in, const std::filesystem::path& path) {
  return std::bit_cast<double>(get_u64(in, path));
}

std::string get_bytes(std::istream& in, const std::filesystem::path& path) {
  const uint64_t len = get_u64(in, path);
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (static_cast<uint64_t>(in.gcount()) != len) truncated(path);
  return s;
}

void put_vec(std::ostream& out, const std::vector<double>& v) {
  put_u64(out, v.size());
  for (double x : v) put_f64(out, x);
}

std::vector<double> get_vec(std::istream& in, const std::filesystem::path& path) {
  const uint64_t len = get_u64(in, path);
  std::vector<double> v(len);
  for (auto& x : v) x = get_f64(in, path);
  return v;
}

void put_mat(std::ostream& out, const ranker::Mat& m) {
  put_u64(out, m.rows);
  put_u64(out, m.cols);
  for (double x : m.a) put_f64(out, x);
}

ranker::Mat get_mat(std::istream& in, const std::filesystem::path& path) {
  const uint64_t rows = get_u64(in, path);
  const uint64_t cols = get_u64(in, path);
  ranker::Mat m(rows, cols);
  for (auto& x : m.a) x = get_f64(in, path);
  return m;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

void write_header(std::ostream& out, ModelKind kind) {
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<uint32_t>(kind));
}

ModelKind read_header(std::istream& in, const std::filesystem::path& path) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a model file (bad magic): " + path.string());
  }
  const uint32_t version = get_u32(in, path);
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported model format version " + std::to_string(version) +
                             " in '" + path.string() + "' (supported: " +
                             std::to_string(kFormatVersion) + ")");
  }
  const uint32_t kind = get_u32(in, path);
  if (kind != static_cast<uint32_t>(ModelKind::Ranker) &&
      kind != static_cast<uint32_t>(ModelKind::NgramBaseline)) {
    throw std::runtime_error("unknown model kind " + std::to_string(kind) + " in '" +
                             path.string() + "'");
  }
  return static_cast<ModelKind>(kind);
}

void expect_eof(std::istream& in, const std::filesystem::path& path) {
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("model file has trailing bytes: " + path.string());
  }
}

void check_write(std::ostream& out, const std::filesystem::path& path) {
  if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

RankerModel read_ranker_payload(std::istream& in, const std::filesystem::path& path) {
  RankerModel m;
  const uint32_t n_orders = get_u32(in, path);
  m.config.ngram_orders.clear();
  for (uint32_t i = 0; i < n_orders; ++i) m.config.ngram_orders.push_back(get_i32(in, path));
  m.config.hash_dim = get_u64(in, path);
  m.config.embed_dim = get_i32(in, path);
  m.config.hidden_dim = get_i32(in, path);
  m.config.dropout = get_f64(in, path);
  m.config.activation = get_u32(in, path) == 0 ? ranker::Activation::Tanh
                                               : ranker::Activation::Relu;
  m.config.seed = get_u64(in, path);
  m.config.validate();

  m.params.encoder = get_mat(in, path);
  m.params.head_w1 = get_mat(in, path);
  m.params.head_b1 = get_vec(in, path);
  m.params.head_w2 = get_vec(in, path);
  m.params.head_b2 = get_f64(in, path);
  m.params.validate_shapes(m.config);
  return m;
}

using baseline::Symbol;

baseline::NgramLM read_ngram_payload(std::istream& in, const std::filesystem::path& path) {
  baseline::NgramLM lm;
  lm.order = get_i32(in, path);
  lm.smoothing_k = get_f64(in, path);
  const uint64_t n_vocab = get_u64(in, path);
  lm.vocab.resize(n_vocab);
  for (auto& s : lm.vocab) s = get_u16(in, path);
  const uint64_t n_ctx = get_u64(in, path);
  for (uint64_t i = 0; i < n_ctx; ++i) {
    std::string key = get_bytes(in, path);
    const uint64_t n_entries = get_u64(in, path);
    auto& entries = lm.counts[std::move(key)];
    for (uint64_t j = 0; j < n_entries; ++j) {
      const Symbol sym = get_u16(in, path);
      entries[sym] = get_u64(in, path);
    }
  }
  return lm;
}

}  // namespace

void save_ranker(const std::filesystem::path& path, const RankerModel& model) {
  model.config.validate();
  model.params.validate_shapes(model.config);
  auto out = open_out(path);
  write_header(out, ModelKind::Ranker);

  put_u32(out, static_cast<uint32_t>(model.config.ngram_orders.size()));
  for (int n : model.config.ngram_orders) put_i32(out, n);
  put_u64(out, model.config.hash_dim);
  put_i32(out, model.config.embed_dim);
  put_i32(out, model.config.hidden_dim);
  put_f64(out, model.config.dropout);
  put_u32(out, model.config.activation == ranker::Activation::Tanh ? 0u : 1u);
  put_u64(out, model.config.seed);

  put_mat(out, model.params.encoder);
  put_mat(out, model.params.head_w1);
  put_vec(out, model.params.head_b1);
  put_vec(out, model.params.head_w2);
  put_f64(out, model.params.head_b2);
  check_write(out, path);
}

RankerModel load_ranker(const std::filesystem::path& path) {
  auto in = open_in(path);
  if (read_header(in, path) != ModelKind::Ranker) {
    throw std::runtime_error("'" + path.string() +
                             "' holds an n-gram baseline, expected a ranker model");
  }
  RankerModel m = read_ranker_payload(in, path);
  expect_eof(in, path);
  return m;
}

void save_ngram(const std::filesystem::path& path, const baseline::NgramLM& lm) {
  auto out = open_out(path);
  write_header(out, ModelKind::NgramBaseline);
  put_i32(out, lm.order);
  put_f64(out, lm.smoothing_k);
  put_u64(out, lm.vocab.size());
  for (Symbol s : lm.vocab) put_u16(out, s);

  std::vector<const std::string*> keys;
  keys.reserve(lm.counts.size());
  for (const auto& [key, entries] : lm.counts) {
    (void)entries;
    keys.push_back(&key);
  }
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });

  put_u64(out, keys.size());
  for (const auto* key : keys) {
    put_bytes(out, *key);
    const auto& entries = lm.counts.at(*key);
    put_u64(out, entries.size());
    for (const auto& [sym, count] : entries) {
      put_u16(out, sym);
      put_u64(out, count);
    }
  }
  check_write(out, path);
}

baseline::NgramLM load_ngram(const std::filesystem::path& path) {
  auto in = open_in(path);
  if (read_header(in, path) != ModelKind::NgramBaseline) {
    throw std::runtime_error("'" + path.string() +
                             "' holds a ranker model, expected an n-gram baseline");
  }
  baseline::NgramLM lm = read_ngram_payload(in, path);
  expect_eof(in, path);
  return lm;
}

ModelKind peek_kind(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_header(in, path);
}

std::variant<RankerModel, baseline::NgramLM> load_any(const std::filesystem::path& path) {
  auto in = open_in(path);
  const ModelKind kind = read_header(in, path);
  if (kind == ModelKind::Ranker) {
    RankerModel m = read_ranker_payload(in, path);
    expect_eof(in, path);
    return m;
  }
  baseline::NgramLM lm = read_ngram_payload(in, path);
  expect_eof(in, path);
  return lm;
}

}  // namespace asrqe::model_io
