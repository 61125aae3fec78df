// Copyright 2026 The ddos-embed Authors
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

// File helpers for the command-line tool: input digests, run manifests and
// write-then-rename output.

#ifndef DDOS_TOOLS_RUN_FILES_HPP_
#define DDOS_TOOLS_RUN_FILES_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ddos_tool {

class ToolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FileDigest {
  std::string sha256_hex;
  std::uintmax_t bytes = 0;
};

// Throws ToolError naming the path when the file cannot be read.
FileDigest DigestFile(const std::filesystem::path& path);

// Writes `contents` to a sibling temporary file and renames it over `path`,
// so readers never observe a partial file. Creates parent directories.
void WriteAtomically(const std::filesystem::path& path,
                     const std::string& contents);

struct RunManifest {
  std::string command;
  std::string tool_version;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::filesystem::path input;
  FileDigest input_digest;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::uint64_t> seeds;
  // "flag", "config" or "entropy".
  std::string seed_source;

  nlohmann::ordered_json ToJson() const;
};

}  // namespace ddos_tool

#endif  // DDOS_TOOLS_RUN_FILES_HPP_
