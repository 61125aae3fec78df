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

#ifndef DDOS_CONFIG_HPP_
#define DDOS_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string_view>

#include "trainer.hpp"

namespace ddos {

// Sets one field from its textual value. Keys: d, nb, encoder, order,
// epochs, lr, neg_ratio, pos_batch, seed, freeze_intercept, init_scale
// ('-' and '_' are interchangeable). Throws ParseError naming the key.
void ApplyConfigValue(TrainConfig& cfg, std::string_view key,
                      std::string_view value, std::size_t line = 0);

// Plain `key = value` lines; '#' starts a comment. Keys not present keep
// their value from `base`.
TrainConfig LoadConfig(std::istream& in, TrainConfig base = {});
TrainConfig LoadConfigFile(const std::filesystem::path& path,
                           TrainConfig base = {});

}  // namespace ddos

#endif  // DDOS_CONFIG_HPP_
