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

#ifndef DDOS_TEXT_IO_HPP_
#define DDOS_TEXT_IO_HPP_

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

namespace ddos {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

// Writes through a temporary sibling file and renames it over `path`, so
// readers never observe a partially written file. Throws IoError.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& body);

}  // namespace ddos

#endif  // DDOS_TEXT_IO_HPP_
