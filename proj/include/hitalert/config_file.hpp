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

// Flat `key = value` text dialect shared by config files and scenario specs.

#ifndef HITALERT_CONFIG_FILE_HPP
#define HITALERT_CONFIG_FILE_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <hitalert/core.hpp>

namespace hitalert
{

struct KeyValue
{
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
std::vector<KeyValue> parse_key_values(std::istream& in);

/// Parses a distance with an optional `ft` or `yd` suffix; bare numbers are yards.
double parse_distance(std::string_view text);

double parse_number(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);
std::string_view trim(std::string_view text);

/// Applies the entries of a config file on top of a profile (`profile = pilot|game`
/// resets to that profile first) and validates the result.
PredictorConfig load_config(std::istream& in);
PredictorConfig load_config_file(const std::filesystem::path& path);

}  // namespace hitalert

#endif  // HITALERT_CONFIG_FILE_HPP
