// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Tiny CSV layer for the measure and kernel file formats. Numbers are written
// with %.17g so a load/store round trip is bit-exact for binary64.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pdext/errors.hpp"

namespace pdext {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // allow trailing spaces only
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  require(end != begin && end && *end == '\0', errc::io_failure,
          "not a number: '" + s + "'");
  return v;
}

// Rows of comma-separated fields. Blank lines are skipped; no quoting, no
// header row. Leading/trailing whitespace per field is trimmed by parse.
inline std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_failure, "cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char ch : line)
      if (ch != ' ' && ch != '\t') { blank = false; break; }
    if (blank) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    rows.push_back(std::move(fields));
  }
  return rows;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), errc::io_failure, "cannot write " + path);
  out << body;
  require(out.good(), errc::io_failure, "write failed for " + path);
}

}  // namespace pdext
