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

#include <hitalert/ingest.hpp>

#include <algorithm>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>

#include <json.hpp>

#include <hitalert/config_file.hpp>

#include "csv.hpp"

namespace hitalert
{

namespace
{

struct Columns
{
  std::optional<std::size_t> game_id, play_id, frame_id, nfl_id, display_name, jersey, team, x, y, s,
      dir, dis, o, event;
};

Columns map_header(const std::vector<std::string>& header)
{
  Columns cols;
  for (std::size_t i = 0; i < header.size(); ++i)
  {
    const std::string_view name = trim(header[i]);
    if (name == "gameId")
      cols.game_id = i;
    else if (name == "playId")
      cols.play_id = i;
    else if (name == "frame.id" || name == "frameId")
      cols.frame_id = i;
    else if (name == "nflId")
      cols.nfl_id = i;
    else if (name == "displayName")
      cols.display_name = i;
    else if (name == "jerseyNumber")
      cols.jersey = i;
    else if (name == "team" || name == "club")
      cols.team = i;
    else if (name == "x")
      cols.x = i;
    else if (name == "y")
      cols.y = i;
    else if (name == "s")
      cols.s = i;
    else if (name == "dir")
      cols.dir = i;
    else if (name == "dis")
      cols.dis = i;
    else if (name == "o")
      cols.o = i;
    else if (name == "event")
      cols.event = i;
  }
  return cols;
}

std::string_view field(const std::vector<std::string>& row, const std::optional<std::size_t>& col)
{
  if (!col || *col >= row.size())
    return {};
  return row[*col];
}

std::optional<std::string> text_field(const std::vector<std::string>& row,
                                      const std::optional<std::size_t>& col)
{
  const auto value = field(row, col);
  if (value.empty() || value == "NA")
    return std::nullopt;
  return std::string(value);
}

}  // namespace

CsvParseResult parse_tracking_csv(std::istream& in, const std::optional<PlayFilter>& filter,
                                  const FieldBounds& bounds)
{
  CsvParseResult result;
  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::EmptyInput, "tracking file is empty");
  if (line.starts_with("\xEF\xBB\xBF"))
    line.erase(0, 3);

  const Columns cols = map_header(csv::split(line));
  if (!cols.x || !cols.y || !cols.frame_id)
    throw Error(Errc::MissingHeader, "expected a header with x, y and frame.id columns");

  while (std::getline(in, line))
  {
    if (trim(line).empty())
      continue;
    const auto row = csv::split(line);

    const auto x = csv::to_double(field(row, cols.x));
    const auto y = csv::to_double(field(row, cols.y));
    const auto frame = csv::to_int(field(row, cols.frame_id));
    if (!x || !y || !frame || !std::isfinite(*x) || !std::isfinite(*y) || *frame < 1)
    {
      ++result.skipped;
      continue;
    }

    TrackingRecord record;
    record.game_id = std::string(field(row, cols.game_id));
    record.play_id = std::string(field(row, cols.play_id));
    if (filter && (record.game_id != filter->game_id || record.play_id != filter->play_id))
      continue;

    record.frame_id = *frame;
    record.pos = {*x, *y};
    if (!bounds.contains(record.pos))
    {
      ++result.out_of_bounds;
      continue;
    }
    record.display_name = text_field(row, cols.display_name);
    record.jersey = text_field(row, cols.jersey);
    record.team = text_field(row, cols.team);
    record.event = text_field(row, cols.event);
    record.speed = csv::to_double(field(row, cols.s));
    record.dir = csv::to_double(field(row, cols.dir));
    record.distance = csv::to_double(field(row, cols.dis));
    record.orientation = csv::to_double(field(row, cols.o));

    const auto nfl_id = text_field(row, cols.nfl_id);
    const bool football = record.display_name == "football" || record.team == "ball" || record.team == "football";
    record.player_id = (!nfl_id || football) ? std::string(ball_id) : *nfl_id;

    result.records.push_back(std::move(record));
  }
  return result;
}

void write_tracking_csv(std::ostream& out, const std::vector<TrackingRecord>& records)
{
  const auto opt_num = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string("NA"); };
  const auto opt_text = [](const std::optional<std::string>& v) { return v ? csv::quote(*v) : std::string("NA"); };

  out << "gameId,playId,frame.id,nflId,displayName,jerseyNumber,team,x,y,s,dir,dis,o,event\n";
  for (const auto& r : records)
  {
    out << csv::quote(r.game_id) << ',' << csv::quote(r.play_id) << ',' << r.frame_id << ','
        << (r.player_id == ball_id ? std::string("NA") : csv::quote(r.player_id)) << ','
        << opt_text(r.display_name) << ',' << opt_text(r.jersey) << ',' << opt_text(r.team) << ','
        << csv::format_double(r.pos.x) << ',' << csv::format_double(r.pos.y) << ',' << opt_num(r.speed) << ','
        << opt_num(r.dir) << ',' << opt_num(r.distance) << ',' << opt_num(r.orientation) << ','
        << opt_text(r.event) << '\n';
  }
}

std::optional<Vec2> extract_given_velocity(const TrackingRecord& record)
{
  if (!record.speed || !record.dir)
    return std::nullopt;
  // Dataset convention: 0 deg points along +y, angles grow clockwise.
  const double radians = *record.dir * std::numbers::pi / 180.0;
  return Vec2{*record.speed * std::sin(radians), *record.speed * std::cos(radians)};
}

Roster roster_from_records(const std::vector<TrackingRecord>& records)
{
  Roster roster;
  std::set<std::string, std::less<>> seen;
  for (const auto& record : records)
  {
    if (record.player_id == ball_id || !seen.insert(record.player_id).second)
      continue;
    roster.add(PlayerId{record.player_id, {record.player_id + "/L", record.player_id + "/R"}},
               record.display_name.value_or(record.player_id));
  }
  return roster;
}

BatchResult records_to_batches(std::vector<TrackingRecord> records, const Roster& roster, double sample_dt,
                               bool strict)
{
  std::stable_sort(records.begin(), records.end(),
                   [](const TrackingRecord& a, const TrackingRecord& b) { return a.frame_id < b.frame_id; });

  BatchResult result;
  std::set<std::string, std::less<>> tags_in_frame;
  for (const auto& record : records)
  {
    const PlayerId* player = roster.find(record.player_id);
    if (!player)
    {
      if (strict)
        throw Error(Errc::UnknownPlayer, "player '" + record.player_id + "' is not in the roster");
      ++result.dropped;
      continue;
    }

    if (result.batches.empty() || result.batches.back().frame != record.frame_id)
    {
      FrameBatch batch;
      batch.frame = record.frame_id;
      batch.t = static_cast<double>(record.frame_id - 1) * sample_dt;
      result.batches.push_back(std::move(batch));
      tags_in_frame.clear();
    }
    auto& batch = result.batches.back();

    bool duplicate = false;
    for (const auto& tag : player->tag_ids)
      duplicate = duplicate || tags_in_frame.contains(tag);
    if (duplicate)
    {
      ++result.dropped;
      continue;
    }
    for (const auto& tag : player->tag_ids)
    {
      tags_in_frame.insert(tag);
      batch.samples.push_back(TagSample{tag, batch.t, record.pos, std::nullopt});
    }
    if (auto velocity = extract_given_velocity(record))
      batch.given_velocity.emplace(player->id, *velocity);
  }
  return result;
}

TagSample parse_feed_line(std::string_view line)
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse(line.begin(), line.end());
  }
  catch (const nlohmann::json::out_of_range& e)
  {
    // Literals like 1e400 overflow a double.
    if (e.id == 406)
      throw Error(Errc::NonFiniteCoordinate, "number out of range");
    throw Error(Errc::MalformedJson, e.what());
  }
  catch (const nlohmann::json::exception& e)
  {
    throw Error(Errc::MalformedJson, e.what());
  }
  if (!doc.is_object())
    throw Error(Errc::MalformedJson, "feed line is not a JSON object");

  const auto require = [&](const char* name) -> const nlohmann::json& {
    const auto it = doc.find(name);
    if (it == doc.end() || it->is_null())
      throw Error(Errc::MissingField, name);
    return *it;
  };
  const auto number = [&](const char* name) {
    const auto& value = require(name);
    if (!value.is_number())
      throw Error(Errc::MalformedJson, std::string(name) + " is not a number");
    return value.get<double>();
  };

  const auto& tag = require("tag");
  if (!tag.is_string() || tag.get_ref<const std::string&>().empty())
    throw Error(Errc::MalformedJson, "tag must be a non-empty string");

  TagSample sample;
  sample.tag_id = tag.get<std::string>();
  sample.t = number("t");
  const double x = number("x");
  const double y = number("y");
  if (!std::isfinite(x) || !std::isfinite(y))
    throw Error(Errc::NonFiniteCoordinate, "x/y must be finite");
  if (!std::isfinite(sample.t) || sample.t < 0.0)
    throw Error(Errc::NonFiniteCoordinate, "t must be finite and non-negative");

  std::string unit = "ft";
  if (const auto it = doc.find("unit"); it != doc.end())
  {
    if (!it->is_string())
      throw Error(Errc::MalformedJson, "unit must be a string");
    unit = it->get<std::string>();
  }
  if (unit == "ft")
    sample.pos = {feet_to_yards(x), feet_to_yards(y)};
  else if (unit == "yd")
    sample.pos = {x, y};
  else
    throw Error(Errc::MalformedJson, "unit must be ft or yd");

  if (const auto it = doc.find("q"); it != doc.end() && !it->is_null())
  {
    if (!it->is_number())
      throw Error(Errc::MalformedJson, "q is not a number");
    const double q = it->get<double>();
    if (std::isfinite(q))
      sample.quality = std::clamp(q, 0.0, 1.0);
  }
  return sample;
}

std::string format_feed_line(const TagSample& sample)
{
  nlohmann::ordered_json doc;
  doc["tag"] = sample.tag_id;
  doc["t"] = sample.t;
  doc["x"] = sample.pos.x;
  doc["y"] = sample.pos.y;
  doc["unit"] = "yd";
  if (sample.quality)
    doc["q"] = *sample.quality;
  return doc.dump();
}

}  // namespace hitalert
