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
#include <variant>

#include "asrqe/baseline_lm.hpp"
#include "asrqe/ranker.hpp"

namespace asrqe::model_io {

// Binary model container: 8-byte magic, format version, model kind, payload.
// Integers and IEEE-754 doubles are little-endian. Serialization is
// deterministic: identical models produce identical bytes.
inline constexpr char kMagic[8] = {'A', 'S', 'R', 'Q', 'E', 'M', 'D', 'L'};
inline constexpr uint32_t kFormatVersion = 1;

enum class ModelKind : uint32_t { Ranker = 1, NgramBaseline = 2 };

struct RankerModel {
  ranker::EncoderConfig config;
  ranker::RankerParams params;
};

void save_ranker(const std::filesystem::path& path, const RankerModel& model);
RankerModel load_ranker(const std::filesystem::path& path);

void save_ngram(const std::filesystem::path& path, const baseline::NgramLM& lm);
baseline::NgramLM load_ngram(const std::filesystem::path& path);

// Reads the header only; errors mirror load_any.
ModelKind peek_kind(const std::filesystem::path& path);

// Dispatches on the stored kind. A wrong magic, a version other than
// kFormatVersion (the error names both the found and the supported version),
// an unknown kind, or a truncated payload all throw.
std::variant<RankerModel, baseline::NgramLM> load_any(const std::filesystem::path& path);

}  // namespace asrqe::model_io
