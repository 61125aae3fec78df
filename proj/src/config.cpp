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

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <string>

#include "errors.hpp"

namespace ddos {

namespace {

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value, std::size_t line,
              const char* type_name) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ParseError(line, "key '" + std::string(key) + "' expects " +
                               type_name + ", got '" + std::string(value) + "'");
  }
  return out;
}

int ParseInt(std::string_view key, std::string_view value, std::size_t line) {
  return ParseNumber<int>(key, value, line, "an integer");
}

double ParseReal(std::string_view key, std::string_view value,
                 std::size_t line) {
  return ParseNumber<double>(key, value, line, "a real number");
}

bool ParseBool(std::string_view key, std::string_view value, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError(line, "key '" + std::string(key) +
                             "' expects true or false, got '" +
                             std::string(value) + "'");
}

}  // namespace

void ApplyConfigValue(TrainConfig& cfg, std::string_view raw_key,
                      std::string_view value, std::size_t line) {
  std::string key(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  value = Trim(value);

  if (key == "d") {
    cfg.dim = ParseInt(key, value, line);
  } else if (key == "nb") {
    cfg.num_bins = ParseInt(key, value, line);
  } else if (key == "encoder") {
    if (value == "lookup") {
      cfg.encoder = EncoderKind::kLookup;
    } else if (value == "linear") {
      cfg.encoder = EncoderKind::kLinear;
    } else {
      throw ParseError(line, "key 'encoder' expects lookup or linear, got '" +
                                 std::string(value) + "'");
    }
  } else if (key == "order") {
    cfg.similarity_order = ParseInt(key, value, line);
  } else if (key == "epochs") {
    cfg.epochs = ParseInt(key, value, line);
  } else if (key == "lr") {
    cfg.learning_rate = ParseReal(key, value, line);
  } else if (key == "neg_ratio") {
    cfg.neg_ratio = ParseReal(key, value, line);
  } else if (key == "pos_batch") {
    cfg.pos_batch = ParseInt(key, value, line);
  } else if (key == "seed") {
    cfg.seed = ParseNumber<std::uint64_t>(key, value, line,
                                          "a non-negative integer");
  } else if (key == "freeze_intercept") {
    cfg.freeze_intercept = ParseBool(key, value, line);
  } else if (key == "init_scale") {
    cfg.init_scale = ParseReal(key, value, line);
  } else {
    throw ParseError(line, "unknown key '" + std::string(raw_key) + "'");
  }
}

TrainConfig LoadConfig(std::istream& in, TrainConfig base) {
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::string_view line(text);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    ApplyConfigValue(base, key, line.substr(eq + 1), line_no);
  }
  return base;
}

TrainConfig LoadConfigFile(const std::filesystem::path& path,
                           TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return LoadConfig(in, base);
}

}  // namespace ddos
