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

#include "asrqe/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace asrqe::manifest {

std::string now_iso8601_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::json o{{"command", m.command},
                   {"config", m.config},
                   {"inputs", m.inputs},
                   {"outputs", m.outputs},
                   {"seed", m.seed},
                   {"format_version", m.format_version},
                   {"started_at", m.started_at},
                   {"finished_at", m.finished_at}};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << o.dump(2) << "\n";
  if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

RunManifest read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  nlohmann::json o;
  try {
    in >> o;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": malformed manifest: " + e.what());
  }
  RunManifest m;
  try {
    m.command = o.at("command").get<std::string>();
    m.config = o.at("config");
    m.inputs = o.at("inputs").get<std::vector<std::string>>();
    m.outputs = o.at("outputs").get<std::vector<std::string>>();
    m.seed = o.at("seed").get<uint64_t>();
    m.format_version = o.at("format_version").get<uint32_t>();
    m.started_at = o.at("started_at").get<std::string>();
    m.finished_at = o.at("finished_at").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": manifest missing field: " + e.what());
  }
  return m;
}

}  // namespace asrqe::manifest
