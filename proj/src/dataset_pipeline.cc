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

#include "gesteval/dataset_pipeline.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "gesteval/errors.h"
#include "gesteval/text.h"

namespace gesteval {
namespace {

constexpr double kSnapTolerance = 1e-9;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool try_parse(const std::string& cell, double& value) {
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  return !cell.empty() && ec == std::errc() && ptr == end;
}

double parse_cell(const std::string& cell, int line) {
  double v = 0.0;
  if (!try_parse(cell, v)) throw ParseError("non-numeric cell '" + cell + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite cell '" + cell + "'", line);
  return v;
}

// Comment metadata ('#key,value') and the remaining non-empty lines.
struct CsvText {
  std::map<std::string, std::pair<std::string, int>> meta;
  std::vector<std::pair<std::string, int>> lines;
};

CsvText read_csv_text(std::istream& in) {
  CsvText text;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto comma = t.find(',');
      if (comma != std::string::npos) {
        text.meta[trim(std::string_view(t).substr(1, comma - 1))] = {
            trim(std::string_view(t).substr(comma + 1)), lineno};
      }
      continue;
    }
    text.lines.emplace_back(t, lineno);
  }
  return text;
}

double meta_number(const CsvText& text, const std::string& key) {
  const auto it = text.meta.find(key);
  if (it == text.meta.end()) throw ParseError("missing '#" + key + "' metadata line");
  return parse_cell(it->second.first, it->second.second);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

PoseStream::PoseStream(std::vector<Pose> poses, double native_rate_hz)
    : poses_(std::move(poses)), native_rate_hz_(native_rate_hz) {
  if (!(native_rate_hz_ > 0.0)) throw StructuralError("stream rate must be positive");
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    if (!poses_[i].timestamp) throw StructuralError("stream pose without timestamp");
    if (i > 0 && !(*poses_[i].timestamp > *poses_[i - 1].timestamp)) {
      throw StructuralError("stream timestamps must be strictly increasing");
    }
  }
}

PoseStream PoseStream::uniform(std::vector<Pose> poses, double rate_hz, double t0) {
  for (std::size_t i = 0; i < poses.size(); ++i) {
    poses[i].timestamp = t0 + static_cast<double>(i) / rate_hz;
  }
  return PoseStream(std::move(poses), rate_hz);
}

PoseStream resample(const PoseStream& stream, double target_hz) {
  if (!(target_hz > 0.0)) throw StructuralError("target rate must be positive");
  if (stream.size() < 2) {
    throw StructuralError("resampling needs at least two poses");
  }
  const double t0 = stream.time(0);
  const double t_end = stream.time(stream.size() - 1);
  const auto count = static_cast<long>(
      std::floor((t_end - t0) * target_hz + kSnapTolerance * target_hz)) + 1;

  std::vector<Pose> out;
  out.reserve(count);
  int left = 0;
  for (long k = 0; k < count; ++k) {
    double t = t0 + static_cast<double>(k) / target_hz;
    if (std::abs(t - t_end) <= kSnapTolerance) t = t_end;
    while (left + 1 < stream.size() - 1 && stream.time(left + 1) <= t) ++left;
    const Pose& a = stream.pose(left);
    const Pose& b = stream.pose(left + 1);
    const double ta = *a.timestamp;
    const double tb = *b.timestamp;
    Pose p;
    p.timestamp = t;
    if (t == ta) {
      p.values = a.values;
      p.clamped = a.clamped;
    } else if (t == tb) {
      p.values = b.values;
      p.clamped = b.clamped;
    } else {
      const double alpha = (t - ta) / (tb - ta);
      for (int j = 0; j < kJointCount; ++j) {
        p.values[j] = a.values[j] + alpha * (b.values[j] - a.values[j]);
      }
      p.clamped = a.clamped | b.clamped;
    }
    out.push_back(p);
  }
  return PoseStream(std::move(out), target_hz);
}

std::pair<PoseStream, PoseStream> match_lengths(const PoseStream& a, const PoseStream& b) {
  if (a.empty() || b.empty()) throw StructuralError("cannot match an empty stream");
  const auto n = static_cast<std::size_t>(std::min(a.size(), b.size()));
  auto head = [n](const PoseStream& s) {
    std::vector<Pose> poses(s.poses().begin(), s.poses().begin() + n);
    return PoseStream(std::move(poses), s.native_rate_hz());
  };
  return {head(a), head(b)};
}

GestureDataset window(const PoseStream& stream, int mu, int stride, std::string source_tag) {
  if (mu <= 0) throw StructuralError("window length mu must be positive");
  if (stride < 0) throw StructuralError("window stride must be non-negative");
  if (stride == 0) stride = mu;
  if (stream.size() < mu) {
    throw StructuralError("stream of " + std::to_string(stream.size()) +
                          " poses is shorter than mu=" + std::to_string(mu));
  }
  const double dt = 1.0 / stream.native_rate_hz();
  std::vector<UnitOfMovement> units;
  for (int start = 0; start + mu <= stream.size(); start += stride) {
    units.push_back(flatten_window(
        std::span<const Pose>(stream.poses()).subspan(start, mu), dt));
  }
  return GestureDataset(std::move(units), std::move(source_tag), stream.native_rate_hz());
}

void write_dataset(std::ostream& out, const GestureDataset& ds) {
  out << "#mu," << ds.mu() << "\n";
  out << "#rate_hz," << format_double(ds.sample_rate_hz()) << "\n";
  out << "#source," << ds.source_tag() << "\n";
  const auto labels = column_labels(ds.mu());
  for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << labels[c];
  out << "\n";
  for (const auto& u : ds.units()) {
    const auto& flat = u.flat();
    for (std::size_t c = 0; c < flat.size(); ++c) {
      out << (c ? "," : "") << format_double(flat[c]);
    }
    out << "\n";
  }
}

GestureDataset read_dataset(std::istream& in) {
  const CsvText text = read_csv_text(in);
  const double mu_value = meta_number(text, "mu");
  if (mu_value < 1 || mu_value != std::floor(mu_value)) {
    throw ParseError("'#mu' must be a positive integer", text.meta.at("mu").second);
  }
  const int mu = static_cast<int>(mu_value);
  const double rate = meta_number(text, "rate_hz");
  if (!(rate > 0.0)) throw ParseError("'#rate_hz' must be positive", text.meta.at("rate_hz").second);
  const auto source_it = text.meta.find("source");
  const std::string source = source_it == text.meta.end() ? "" : source_it->second.first;

  const std::size_t width = static_cast<std::size_t>(kJointCount) * mu;
  std::size_t first = 0;
  if (!text.lines.empty()) {
    const auto cells = split_csv(text.lines[0].first);
    double probe = 0.0;
    if (!try_parse(cells[0], probe)) {
      if (cells.size() != width) {
        throw ParseError("header has " + std::to_string(cells.size()) +
                             " columns but mu=" + std::to_string(mu) + " needs " +
                             std::to_string(width),
                         text.lines[0].second);
      }
      first = 1;
    }
  }
  const double dt = 1.0 / rate;
  std::vector<UnitOfMovement> units;
  for (std::size_t r = first; r < text.lines.size(); ++r) {
    const auto& [line, lineno] = text.lines[r];
    const auto cells = split_csv(line);
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " values, got " +
                           std::to_string(cells.size()),
                       lineno);
    }
    std::vector<double> flat(width);
    for (std::size_t c = 0; c < width; ++c) flat[c] = parse_cell(cells[c], lineno);
    units.emplace_back(mu, std::move(flat), dt);
  }
  if (units.empty()) throw ParseError("dataset file has no rows");
  return GestureDataset(std::move(units), source, rate);
}

void save_dataset(const GestureDataset& ds, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_dataset(out, ds);
}

GestureDataset load_dataset(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_dataset(in);
}

void write_pose_stream(std::ostream& out, const PoseStream& stream) {
  out << "#rate_hz," << format_double(stream.native_rate_hz()) << "\n";
  out << "timestamp";
  for (auto name : kJointNames) out << "," << name;
  out << "\n";
  for (const auto& p : stream.poses()) {
    out << format_double(*p.timestamp);
    for (double v : p.values) out << "," << format_double(v);
    out << "\n";
  }
}

PoseStream read_pose_stream(std::istream& in) {
  const CsvText text = read_csv_text(in);
  const double rate = meta_number(text, "rate_hz");
  if (!(rate > 0.0)) throw ParseError("'#rate_hz' must be positive");
  constexpr std::size_t width = kJointCount + 1;
  std::vector<Pose> poses;
  for (std::size_t r = 0; r < text.lines.size(); ++r) {
    const auto& [line, lineno] = text.lines[r];
    const auto cells = split_csv(line);
    double probe = 0.0;
    if (r == 0 && !try_parse(cells[0], probe)) {
      if (cells.size() != width) throw ParseError("pose header needs 15 columns", lineno);
      continue;
    }
    if (cells.size() != width) {
      throw ParseError("expected 15 values (timestamp + 14 joints), got " +
                           std::to_string(cells.size()),
                       lineno);
    }
    Pose p;
    p.timestamp = parse_cell(cells[0], lineno);
    for (int j = 0; j < kJointCount; ++j) p.values[j] = parse_cell(cells[j + 1], lineno);
    if (!poses.empty() && !(*p.timestamp > *poses.back().timestamp)) {
      throw ParseError("timestamps must be strictly increasing", lineno);
    }
    poses.push_back(p);
  }
  return PoseStream(std::move(poses), rate);
}

void save_pose_stream(const PoseStream& stream, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_pose_stream(out, stream);
}

PoseStream load_pose_stream(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pose_stream(in);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  const CsvText text = read_csv_text(in);
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < text.lines.size(); ++r) {
    const auto& [line, lineno] = text.lines[r];
    const auto cells = split_csv(line);
    double probe = 0.0;
    if (r == 0 && !try_parse(cells[0], probe)) continue;
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c, lineno));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged matrix row", lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file has no rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

}  // namespace gesteval
