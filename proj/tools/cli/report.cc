// Copyright 2026 The onoff Authors
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


#include "report.h"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "json.hpp"

namespace onoff::cli {
namespace {

std::string CsvCell(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Numbers go out as JSON numbers, everything else as strings.
nlohmann::ordered_json JsonCell(const std::string& v) {
  double d = 0.0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, d);
  if (!v.empty() && res.ec == std::errc() && res.ptr == end) {
    std::int64_t i = 0;
    const auto ri = std::from_chars(v.data(), end, i);
    if (ri.ec == std::errc() && ri.ptr == end) return i;
    return d;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  return v;
}

void RenderTable(const Report& r, std::ostream& out) {
  for (const auto& [k, v] : r.config) out << "# " << k << " = " << v << '\n';
  if (!r.summary.empty()) {
    std::size_t w = 0;
    for (const auto& kv : r.summary) w = std::max(w, kv.first.size());
    out << '\n';
    for (const auto& [k, v] : r.summary) {
      out << k << std::string(w - k.size() + 2, ' ') << v << '\n';
    }
  }
  if (r.columns.empty()) return;
  std::vector<std::size_t> width(r.columns.size());
  for (std::size_t c = 0; c < r.columns.size(); ++c) width[c] = r.columns[c].size();
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) text += "  ";
      text += cells[c];
      if (c + 1 < cells.size()) text += std::string(width[c] - cells[c].size(), ' ');
    }
    out << text << '\n';
  };
  out << '\n';
  line(r.columns);
  for (const auto& row : r.rows) line(row);
}

void RenderCsv(const Report& r, std::ostream& out) {
  for (const auto& [k, v] : r.config) out << "# " << k << '=' << v << '\n';
  if (r.csv_body) {
    for (const auto& [k, v] : r.summary) out << "# result." << k << '=' << v << '\n';
    out << *r.csv_body;
    return;
  }
  if (r.columns.empty()) {
    out << "key,value\n";
    for (const auto& [k, v] : r.summary) out << CsvCell(k) << ',' << CsvCell(v) << '\n';
    return;
  }
  for (const auto& [k, v] : r.summary) out << "# result." << k << '=' << v << '\n';
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    out << (c ? "," : "") << CsvCell(r.columns[c]);
  }
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << CsvCell(row[c]);
    out << '\n';
  }
}

void RenderJson(const Report& r, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) doc["config"][k] = JsonCell(v);
  doc["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.summary) doc["summary"][k] = JsonCell(v);
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < r.columns.size(); ++c) {
      obj[r.columns[c]] = JsonCell(row[c]);
    }
    doc["rows"].push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace

void Render(const Report& report, Format format, std::ostream& out) {
  switch (format) {
    case Format::kTable: RenderTable(report, out); break;
    case Format::kCsv: RenderCsv(report, out); break;
    case Format::kJson: RenderJson(report, out); break;
  }
}

}  // namespace onoff::cli
