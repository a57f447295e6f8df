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
#include <vector>

#include "json.hpp"

namespace asrqe::manifest {

// Every command writes one of these next to its outputs: enough to audit a
// run and to replay it (see the rerun command).
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();  // resolved flag values
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  uint64_t seed = 0;
  uint32_t format_version = 1;
  std::string started_at;   // ISO 8601 UTC
  std::string finished_at;
};

void write(const std::filesystem::path& path, const RunManifest& m);
RunManifest read(const std::filesystem::path& path);

std::string now_iso8601_utc();

}  // namespace asrqe::manifest
