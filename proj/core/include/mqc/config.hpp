// Copyright 2026 The mqcdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mqc {

// Plain-text key-value configuration:
//
//   # comment
//   [section]
//   key = value
//
// Every value remembers where it came from so errors can point at it.
struct ConfigEntry {
  std::string value;
  std::string origin;  // "file:line" or "--set"
};

class ConfigDocument {
 public:
  using Section = std::map<std::string, ConfigEntry>;

  static ConfigDocument parse(std::string_view text, const std::string& source);
  static ConfigDocument load(const std::string& path);

  // Layers other on top of this document (other wins).
  void merge(const ConfigDocument& other);
  // "section.key=value"; the key is the text after the last dot.
  void apply_override(const std::string& assignment);
  void set(const std::string& section, const std::string& key, const std::string& value,
           const std::string& origin);

  const ConfigEntry* find(const std::string& section, const std::string& key) const;
  const ConfigEntry& at(const std::string& section, const std::string& key) const;  // throws ConfigError
  const std::map<std::string, Section>& sections() const { return sections_; }

  std::string dump() const;
  nlohmann::json to_json() const;

 private:
  std::map<std::string, Section> sections_;
};

// Typed readers; all throw ConfigError naming the entry's origin.
double to_real(const ConfigEntry& e, const std::string& what);
long to_integer(const ConfigEntry& e, const std::string& what);
bool to_bool(const ConfigEntry& e, const std::string& what);
std::vector<double> to_reals(const ConfigEntry& e, const std::string& what, std::size_t count);
std::vector<std::string> to_words(const ConfigEntry& e);

}  // namespace mqc
