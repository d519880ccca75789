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

#include "gesteval/key_value.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gesteval/errors.h"

namespace gesteval {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, int line) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("not a number: '" + t + "'", line);
  }
  return value;
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(const std::string& text) {
  KeyValueDocument doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (doc.entries_.count(key)) throw ParseError("duplicate key '" + key + "'", lineno);
    doc.entries_[key] = trim(t.substr(eq + 1));
    doc.lines_[key] = lineno;
  }
  return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool KeyValueDocument::contains(const std::string& key) const {
  return entries_.count(key) != 0;
}

const std::string& KeyValueDocument::raw(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ParseError("missing key '" + key + "'");
  return it->second;
}

int KeyValueDocument::line_of(const std::string& key) const {
  const auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

double KeyValueDocument::number(const std::string& key) const {
  return parse_number(raw(key), line_of(key));
}

double KeyValueDocument::number_or(const std::string& key, double fallback) const {
  return contains(key) ? number(key) : fallback;
}

std::vector<double> KeyValueDocument::numbers(const std::string& key,
                                              std::size_t count) const {
  const std::string& text = raw(key);
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma - start), line_of(key)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != count) {
    throw ParseError("key '" + key + "' expects " + std::to_string(count) +
                         " values, got " + std::to_string(out.size()),
                     line_of(key));
  }
  return out;
}

}  // namespace gesteval
