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

#ifndef HITALERT_INGEST_HPP
#define HITALERT_INGEST_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <hitalert/core.hpp>
#include <hitalert/roster.hpp>

namespace hitalert
{

/// One row of a Big Data Bowl style tracking file.
struct TrackingRecord
{
  std::string game_id;
  std::string play_id;
  std::int64_t frame_id = 1;
  std::string player_id;  // nflId, or "ball"
  std::optional<std::string> display_name;
  std::optional<std::string> jersey;
  std::optional<std::string> team;
  Vec2 pos;
  std::optional<double> speed;        // yd/s
  std::optional<double> dir;          // degrees, clockwise from +y
  std::optional<double> distance;     // yd travelled since previous frame
  std::optional<double> orientation;  // degrees; read but unused
  std::optional<std::string> event;

  friend bool operator==(const TrackingRecord&, const TrackingRecord&) = default;
};

struct FieldBounds
{
  Vec2 min{-10.0, -10.0};
  Vec2 max{130.0, 63.4};

  bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
};

struct PlayFilter
{
  std::string game_id;
  std::string play_id;
};

struct CsvParseResult
{
  std::vector<TrackingRecord> records;
  std::size_t skipped = 0;        // unparseable mandatory fields
  std::size_t out_of_bounds = 0;
};

inline constexpr std::string_view ball_id = "ball";

/// Throws EmptyInput on an empty stream, MissingHeader when the first line
/// lacks x, y and frame.id columns.
CsvParseResult parse_tracking_csv(std::istream& in, const std::optional<PlayFilter>& filter = {},
                                  const FieldBounds& bounds = {});

/// Writes records with the column set parse_tracking_csv reads.
void write_tracking_csv(std::ostream& out, const std::vector<TrackingRecord>& records);

/// Velocity from the dataset's speed and direction columns.
std::optional<Vec2> extract_given_velocity(const TrackingRecord& record);

/// Every sample of one sampling instant.
struct FrameBatch
{
  std::int64_t frame = 0;
  double t = 0.0;
  std::vector<TagSample> samples;
  std::map<std::string, Vec2, std::less<>> given_velocity;  // per player
};

struct BatchResult
{
  std::vector<FrameBatch> batches;
  std::size_t dropped = 0;
};

/// Groups records into one batch per frame id; each record yields one sample
/// per tag of its player. Unmapped players throw UnknownPlayer when strict,
/// otherwise they are dropped and counted.
BatchResult records_to_batches(std::vector<TrackingRecord> records, const Roster& roster,
                               double sample_dt, bool strict = false);

/// Roster with two synthetic tags `<id>/L` and `<id>/R` per non-ball player,
/// in order of first appearance.
Roster roster_from_records(const std::vector<TrackingRecord>& records);

/// Parses one line of the live feed; positions come back in yards.
TagSample parse_feed_line(std::string_view line);

/// Inverse of parse_feed_line, always in yards.
std::string format_feed_line(const TagSample& sample);

}  // namespace hitalert

#endif  // HITALERT_INGEST_HPP
