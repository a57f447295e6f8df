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

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "json.hpp"

namespace asrqe::jsonl {

// Applies fn to every non-empty line parsed as a JSON object. Malformed
// lines raise with the file name and 1-based line number.
void for_each_object(const std::filesystem::path& path,
                     const std::function<void(const nlohmann::json&, size_t)>& fn);

// Line-oriented JSON writer; UTF-8, LF endings.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);
  void write(const nlohmann::json& obj);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace asrqe::jsonl
