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

#include <hitalert/config_file.hpp>

#include <charconv>
#include <fstream>
#include <istream>

namespace hitalert
{

std::string_view trim(std::string_view text)
{
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<KeyValue> parse_key_values(std::istream& in)
{
  std::vector<KeyValue> entries;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw))
  {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::BadConfig, "line " + std::to_string(line_no) + ": expected `key = value`");
    const auto key = trim(line.substr(0, eq));
    if (key.empty())
      throw Error(Errc::BadConfig, "line " + std::to_string(line_no) + ": empty key");
    entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return entries;
}

double parse_number(std::string_view text, std::string_view what)
{
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw Error(Errc::BadConfig, std::string(what) + ": not a number: '" + std::string(text) + "'");
  return value;
}

int parse_int(std::string_view text, std::string_view what)
{
  text = trim(text);
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(Errc::BadConfig, std::string(what) + ": not an integer: '" + std::string(text) + "'");
  return value;
}

double parse_distance(std::string_view text)
{
  text = trim(text);
  const bool feet = text.ends_with("ft");
  if (feet || text.ends_with("yd"))
    text.remove_suffix(2);
  const double value = parse_number(text, "distance");
  return feet ? feet_to_yards(value) : value;
}

namespace
{

bool parse_bool(std::string_view text, std::string_view what)
{
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes")
    return true;
  if (text == "false" || text == "0" || text == "no")
    return false;
  throw Error(Errc::BadConfig, std::string(what) + ": expected true/false");
}

std::array<double, 3> parse_weights(std::string_view text)
{
  std::array<double, 3> weights{};
  std::size_t count = 0;
  while (!text.empty())
  {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (count == 3)
      throw Error(Errc::WeightsNotNormalized, "smoothing_weights takes exactly 3 values");
    weights[count++] = parse_number(item, "smoothing_weights");
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  if (count != 3)
    throw Error(Errc::WeightsNotNormalized, "smoothing_weights takes exactly 3 values");
  return weights;
}

void apply(PredictorConfig& config, const KeyValue& kv)
{
  const std::string_view key = kv.key;
  const std::string_view value = kv.value;
  if (key == "profile")
  {
    if (value == "pilot")
      config = PredictorConfig::pilot();
    else if (value == "game")
      config = PredictorConfig::game();
    else
      throw Error(Errc::BadConfig, "profile: expected pilot or game");
  }
  else if (key == "threshold")
    config.threshold = parse_distance(value);
  else if (key == "smoothing_weights")
    config.smoothing_weights = parse_weights(value);
  else if (key == "sample_dt")
    config.sample_dt = parse_number(value, key);
  else if (key == "estimator")
  {
    if (value == "constant_speed")
      config.estimator = Estimator::ConstantSpeed;
    else if (value == "given_velocity")
      config.estimator = Estimator::GivenVelocity;
    else
      throw Error(Errc::BadConfig, "estimator: expected constant_speed or given_velocity");
  }
  else if (key == "max_staleness")
    config.max_staleness = parse_int(value, key);
  else if (key == "hysteresis_factor")
    config.hysteresis_factor = parse_number(value, key);
  else if (key == "release_frames")
    config.release_frames = parse_int(value, key);
  else if (key == "min_event_gap")
    config.min_event_gap = parse_int(value, key);
  else if (key == "match_tolerance")
    config.match_tolerance = parse_int(value, key);
  else if (key == "smoothing_order")
  {
    if (value == "tag_then_fuse")
      config.smoothing_order = SmoothingOrder::TagThenFuse;
    else if (value == "fuse_then_tag")
      config.smoothing_order = SmoothingOrder::FuseThenTag;
    else
      throw Error(Errc::BadConfig, "smoothing_order: expected tag_then_fuse or fuse_then_tag");
  }
  else if (key == "refractory")
    config.refractory_s = parse_number(value, key);
  else if (key == "vibration_ms")
    config.vibration_ms = parse_int(value, key);
  else if (key == "page_both")
    config.page_both = parse_bool(value, key);
  else
    throw Error(Errc::BadConfig, "line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
}

}  // namespace

PredictorConfig load_config(std::istream& in)
{
  PredictorConfig config;
  for (const auto& kv : parse_key_values(in))
    apply(config, kv);
  validate_config(config);
  return config;
}

PredictorConfig load_config_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::Io, "cannot open config file " + path.string());
  return load_config(in);
}

}  // namespace hitalert
