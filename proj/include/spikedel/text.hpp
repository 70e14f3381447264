/*
 * Copyright 2026 The spikedel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spikedel/common.hpp"

namespace spikedel::text {

/// Shortest representation that round-trips through from_chars.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

inline std::vector<std::string_view> split(std::string_view line,
                                           char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = line.find(sep, begin);
    out.push_back(line.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view field, const char* what) {
  field = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ProvenanceError(std::string("cannot parse ") + what + ": '" +
                          std::string(field) + "'");
  }
  return value;
}

/// Reads CSV rows after checking the header line verbatim.
inline std::vector<std::string> read_csv_body(std::istream& in,
                                              std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw ProvenanceError("unexpected CSV header: '" + line + "'");
  }
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) rows.push_back(std::move(line));
  }
  return rows;
}

}  // namespace spikedel::text
