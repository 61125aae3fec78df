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

#include "run_files.hpp"

#include <atomic>
#include <fstream>
#include <memory>
#include <system_error>

#include <openssl/evp.h>
#include <unistd.h>

namespace ddos_tool {

namespace fs = std::filesystem;

FileDigest DigestFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ToolError("cannot open '" + path.string() + "'");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw ToolError("sha256 initialization failed");
  }
  FileDigest out;
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const std::streamsize got = in.gcount();
    if (got <= 0) break;
    EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(got));
    out.bytes += static_cast<std::uintmax_t>(got);
  }
  if (in.bad()) throw ToolError("error reading '" + path.string() + "'");

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &length);
  static constexpr char kHex[] = "0123456789abcdef";
  out.sha256_hex.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) {
    out.sha256_hex.push_back(kHex[digest[k] >> 4]);
    out.sha256_hex.push_back(kHex[digest[k] & 0xf]);
  }
  return out;
}

void WriteAtomically(const fs::path& path, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw ToolError("cannot create directory '" +
                      path.parent_path().string() + "': " + ec.message());
    }
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw ToolError("cannot write '" + path.string() + "'");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ToolError("cannot rename onto '" + path.string() + "'");
  }
}

nlohmann::ordered_json RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["config"] = config;
  if (!input.empty()) {
    j["input"] = {{"path", input.string()},
                  {"sha256", input_digest.sha256_hex},
                  {"bytes", input_digest.bytes}};
  }
  auto& outs = j["outputs"] = nlohmann::ordered_json::array();
  for (const fs::path& p : outputs) outs.push_back(p.string());
  j["seeds"] = seeds;
  j["seed_source"] = seed_source;
  return j;
}

}  // namespace ddos_tool
