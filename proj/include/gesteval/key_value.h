// Copyright 2026 The gesteval Authors.
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

#ifndef GESTEVAL_KEY_VALUE_H_
#define GESTEVAL_KEY_VALUE_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gesteval {

// Flat `key = value` document. Blank lines and lines starting with '#' are
// ignored; values may be comma separated number lists.
class KeyValueDocument {
 public:
  static KeyValueDocument parse(const std::string& text);
  static KeyValueDocument load(const std::filesystem::path& path);

  bool contains(const std::string& key) const;
  const std::string& raw(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  // Comma separated list of exactly `count` numbers.
  std::vector<double> numbers(const std::string& key, std::size_t count) const;
  int line_of(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
};

}  // namespace gesteval

#endif  // GESTEVAL_KEY_VALUE_H_
