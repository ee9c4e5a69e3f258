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

#include "mqc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mqc/data.hpp"
#include "mqc/errors.hpp"

namespace mqc {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char ch) { return std::isspace(ch) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.' || c == '-';
  });
}

[[noreturn]] void bad(const ConfigEntry& e, const std::string& what, const std::string& expected) {
  throw ConfigError(e.origin + ": " + what + " = '" + e.value + "': expected " + expected);
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::string_view text, const std::string& source) {
  ConfigDocument doc;
  std::istringstream in{std::string(text)};
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    if (auto h = line.find_first_of("#;"); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError(where + ": bad section name '" + section + "'");
      doc.sections_[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    if (section.empty()) throw ConfigError(where + ": key outside of any [section]");
    std::string key = trim(line.substr(0, eq));
    if (!valid_name(key) || key.find('.') != std::string::npos)
      throw ConfigError(where + ": bad key name '" + key + "'");
    if (doc.find(section, key)) throw ConfigError(where + ": duplicate key '" + key + "' in [" + section + "]");
    doc.sections_[section][key] = ConfigEntry{trim(line.substr(eq + 1)), where};
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) { return parse(data::read_file(path), path); }

void ConfigDocument::merge(const ConfigDocument& other) {
  for (const auto& [name, sec] : other.sections_) {
    auto& mine = sections_[name];
    for (const auto& [key, entry] : sec) mine[key] = entry;
  }
}

void ConfigDocument::apply_override(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected section.key=value");
  std::string lhs = trim(assignment.substr(0, eq));
  auto dot = lhs.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
    throw ConfigError("--set " + assignment + ": expected section.key=value");
  std::string section = lhs.substr(0, dot), key = lhs.substr(dot + 1);
  if (!valid_name(section) || !valid_name(key))
    throw ConfigError("--set " + assignment + ": bad section or key name");
  set(section, key, trim(assignment.substr(eq + 1)), "--set " + lhs);
}

void ConfigDocument::set(const std::string& section, const std::string& key, const std::string& value,
                         const std::string& origin) {
  sections_[section][key] = ConfigEntry{value, origin};
}

const ConfigEntry* ConfigDocument::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const ConfigEntry& ConfigDocument::at(const std::string& section, const std::string& key) const {
  if (const auto* e = find(section, key)) return *e;
  throw ConfigError("missing required key '" + key + "' in [" + section + "]");
}

std::string ConfigDocument::dump() const {
  std::ostringstream o;
  bool first = true;
  for (const auto& [name, sec] : sections_) {
    if (!first) o << "\n";
    first = false;
    o << "[" << name << "]\n";
    for (const auto& [key, entry] : sec) o << key << " = " << entry.value << "\n";
  }
  return o.str();
}

nlohmann::json ConfigDocument::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, sec] : sections_)
    for (const auto& [key, entry] : sec) j[name][key] = entry.value;
  return j;
}

double to_real(const ConfigEntry& e, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(e.value, &used);
    if (used != e.value.size() || !std::isfinite(v)) bad(e, what, "a finite number");
    return v;
  } catch (const std::logic_error&) {
    bad(e, what, "a finite number");
  }
}

long to_integer(const ConfigEntry& e, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(e.value, &used);
    if (used != e.value.size()) bad(e, what, "an integer");
    return v;
  } catch (const std::logic_error&) {
    bad(e, what, "an integer");
  }
}

bool to_bool(const ConfigEntry& e, const std::string& what) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  bad(e, what, "true or false");
}

std::vector<double> to_reals(const ConfigEntry& e, const std::string& what, std::size_t count) {
  std::vector<double> out;
  for (const auto& w : to_words(e)) out.push_back(to_real(ConfigEntry{w, e.origin}, what));
  if (out.size() != count) bad(e, what, std::to_string(count) + " numbers");
  return out;
}

std::vector<std::string> to_words(const ConfigEntry& e) {
  std::string s = e.value;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace mqc
