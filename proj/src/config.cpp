// Copyright 2026 The clinvec Authors
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

#include "clinvec/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "clinvec/error.hpp"

namespace clinvec {

namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw UsageError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

Config Config::Parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    if (key.empty()) {
      throw UsageError("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.values_[key] = Trim(std::string_view(trimmed).substr(eq + 1));
  }
  return cfg;
}

Config Config::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::string Config::GetString(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::GetDouble(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : ParseNumber<double>(key, it->second);
}

std::int64_t Config::GetInt(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : ParseNumber<std::int64_t>(key, it->second);
}

std::uint64_t Config::GetU64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : ParseNumber<std::uint64_t>(key, it->second);
}

bool Config::GetBool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw UsageError("config key '" + key + "': expected a boolean, got '" + it->second + "'");
}

std::vector<std::string> Config::GetList(const std::string& key,
                                         const std::vector<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::string> items;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> Config::GetDoubleList(const std::string& key,
                                          const std::vector<double>& fallback) const {
  if (!Has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : GetList(key, {})) out.push_back(ParseNumber<double>(key, item));
  return out;
}

std::vector<int> Config::GetIntList(const std::string& key,
                                    const std::vector<int>& fallback) const {
  if (!Has(key)) return fallback;
  std::vector<int> out;
  for (const auto& item : GetList(key, {})) out.push_back(ParseNumber<int>(key, item));
  return out;
}

void Config::RequireKnownKeys(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (known.count(key) == 0) throw UsageError("unknown config key '" + key + "'");
  }
}

std::string Config::Canonical(const std::string& prefix) const {
  std::string out;
  for (const auto& [key, value] : values_) {
    if (key.compare(0, prefix.size(), prefix) != 0) continue;
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace clinvec
