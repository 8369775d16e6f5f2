/*
 * Copyright (c) 2026, the ism authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ism/dataset.hpp"
#include "ism/graph.hpp"

namespace ism {

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& field, const std::string& path, std::size_t row) {
  const std::string t = trim(field);
  if (t.empty()) throw IoError(path + ": row " + std::to_string(row) + ": empty coordinate field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw IoError(path + ": row " + std::to_string(row) + ": not a number: '" + t + "'");
  return v;
}

/// Shortest decimal text that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Load a dataset from comma-separated text, one point per row. When
/// `labeled`, the final column is the class id; an empty final field means
/// unlabeled. Row numbers in errors are 1-based over data rows.
template <typename Scalar = double>
DatasetT<Scalar> load_csv(const std::string& path, bool labeled, bool header = false) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  DatasetT<Scalar> out;
  std::vector<std::vector<Scalar>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  bool first = true;
  if (header) std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    auto fields = detail::split_fields(line);
    if (first) {
      width = fields.size();
      if (labeled && width < 2) throw IoError(path + ": row 1: expected at least one coordinate and a label");
      first = false;
    } else if (fields.size() != width) {
      throw IoError(path + ": row " + std::to_string(row) + ": expected " + std::to_string(width) +
                    " fields, got " + std::to_string(fields.size()));
    }
    const std::size_t ncoord = labeled ? width - 1 : width;
    std::vector<Scalar> coords(ncoord);
    for (std::size_t c = 0; c < ncoord; ++c)
      coords[c] = static_cast<Scalar>(detail::parse_double(fields[c], path, row));
    rows.push_back(std::move(coords));
    if (labeled) {
      const std::string t = detail::trim(fields.back());
      if (t.empty()) {
        labels.push_back(kUnlabeled);
      } else {
        int v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || p != t.data() + t.size())
          throw IoError(path + ": row " + std::to_string(row) + ": not an integer label: '" + t + "'");
        if (v < 0) throw IoError(path + ": row " + std::to_string(row) + ": negative class id");
        labels.push_back(v);
      }
    }
  }
  if (rows.empty()) throw IoError(path + ": no data rows");

  out.points.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c) out.points(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
  out.labels = std::move(labels);
  out.ids = default_ids<Scalar>(out.num_points());
  validate(out);
  return out;
}

/// Write a dataset as CSV; emits a trailing label column iff the dataset has
/// labels (empty field for unlabeled points).
template <typename Scalar>
void save_csv(const DatasetT<Scalar>& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (Index i = 0; i < data.num_points(); ++i) {
    for (Index c = 0; c < data.dim(); ++c) {
      if (c) out << ',';
      out << detail::format_double(static_cast<double>(data.points(i, c)));
    }
    if (data.has_labels()) {
      out << ',';
      const int l = data.labels[static_cast<std::size_t>(i)];
      if (l != kUnlabeled) out << l;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

/// Debug export of the k-NN edge list as (i, j, d_ij) rows.
template <typename Scalar>
void save_edges_csv(const NeighborGraphT<Scalar>& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& e : graph.edges)
    out << e.i << ',' << e.j << ',' << detail::format_double(static_cast<double>(e.d)) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace ism
