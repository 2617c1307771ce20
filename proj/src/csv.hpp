/*
 * Copyright 2026 The hitalert Authors
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

#ifndef HITALERT_SRC_CSV_HPP
#define HITALERT_SRC_CSV_HPP

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hitalert::csv
{

/// Splits one CSV line, honoring double-quoted fields with "" escapes.
inline std::vector<std::string> split(std::string_view line)
{
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    const char c = line[i];
    if (quoted)
    {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
      {
        field += '"';
        ++i;
      }
      else if (c == '"')
        quoted = false;
      else
        field += c;
    }
    else if (c == '"')
      quoted = true;
    else if (c == ',')
      fields.push_back(std::move(field)), field.clear();
    else if (c != '\r')
      field += c;
  }
  fields.push_back(std::move(field));
  return fields;
}

inline std::string quote(std::string_view field)
{
  if (field.find_first_of(",\"\n") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field)
  {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Shortest representation that parses back to the same double.
inline std::string format_double(double value)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

inline std::optional<double> to_double(std::string_view text)
{
  if (text.empty() || text == "NA")
    return std::nullopt;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    return std::nullopt;
  return value;
}

inline std::optional<long long> to_int(std::string_view text)
{
  if (text.empty() || text == "NA")
    return std::nullopt;
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    return std::nullopt;
  return value;
}

}  // namespace hitalert::csv

#endif  // HITALERT_SRC_CSV_HPP
