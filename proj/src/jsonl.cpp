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

#include "asrqe/jsonl.hpp"

#include <stdexcept>

namespace asrqe::jsonl {

void for_each_object(const std::filesystem::path& path,
                     const std::function<void(const nlohmann::json&, size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": malformed JSONL line: " + e.what());
    }
    if (!obj.is_object()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected a JSON object");
    }
    fn(obj, lineno);
  }
}

Writer::Writer(const std::filesystem::path& path) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary);  // binary: keep LF endings everywhere
  if (!out_) throw std::runtime_error("cannot write " + path.string());
}

void Writer::write(const nlohmann::json& obj) {
  out_ << obj.dump() << '\n';
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

void Writer::close() {
  out_.close();
  if (out_.fail()) throw std::runtime_error("close failed: " + path_.string());
}

}  // namespace asrqe::jsonl
