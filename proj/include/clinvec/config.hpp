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

#ifndef CLINVEC_CONFIG_HPP_
#define CLINVEC_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace clinvec {

// Flat `section.key = value` text. `#` starts a comment; blank lines are
// ignored. Later assignments override earlier ones.
class Config {
 public:
  Config() = default;
  static Config Parse(const std::string& text);
  static Config Load(const std::filesystem::path& path);

  void Set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool Has(const std::string& key) const { return values_.count(key) != 0; }

  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  std::int64_t GetInt(const std::string& key, std::int64_t fallback) const;
  std::uint64_t GetU64(const std::string& key, std::uint64_t fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  // Comma-separated list; empty items are dropped.
  std::vector<std::string> GetList(const std::string& key,
                                   const std::vector<std::string>& fallback) const;
  std::vector<double> GetDoubleList(const std::string& key,
                                    const std::vector<double>& fallback) const;
  std::vector<int> GetIntList(const std::string& key, const std::vector<int>& fallback) const;

  // Throws UsageError naming the first key not in `known`.
  void RequireKnownKeys(const std::set<std::string>& known) const;

  // Keys whose name starts with `prefix`, rendered canonically.
  std::string Canonical(const std::string& prefix = "") const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace clinvec

#endif  // CLINVEC_CONFIG_HPP_
