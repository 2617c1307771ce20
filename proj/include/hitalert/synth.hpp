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

// Scenario-driven synthetic tracking data: players follow piecewise-linear
// routes, each carrying two shoulder tags with optional Gaussian noise and
// per-sample dropout.

#ifndef HITALERT_SYNTH_HPP
#define HITALERT_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <hitalert/core.hpp>
#include <hitalert/ingest.hpp>

namespace hitalert
{

struct Waypoint
{
  double t = 0.0;
  Vec2 pos;
};

struct ScenarioPlayer
{
  std::string id;
  std::vector<Waypoint> route;  // strictly increasing times

  /// Route position; held before the first and after the last waypoint.
  Vec2 position_at(double t) const;
  Vec2 velocity_at(double t) const;
};

struct Scenario
{
  double sample_dt = 0.1;
  std::optional<double> duration;  // default: last waypoint time
  double noise_sigma = 0.0;        // yd, per tag and axis
  double dropout = 0.0;            // per tag sample
  std::uint64_t seed = 1;
  double shoulder_width = 0.5;     // yd between the two tags
  std::string game_id = "synthetic";
  std::string play_id = "1";
  std::vector<ScenarioPlayer> players;

  double end_time() const;
  std::int64_t frame_count() const;
};

/// Keys: sample_dt, duration, noise_sigma, dropout, seed, shoulder_width,
/// game_id, play_id, and `player.<id> = t x y; t x y; ...`. Throws BadSpec.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Throws BadSpec.
void validate_scenario(const Scenario& scenario);

struct SynthStream
{
  double sample_dt = 0.1;
  std::vector<std::vector<TagSample>> frames;  // tag samples per frame, tags `<id>/L`, `<id>/R`
  std::vector<TrackingRecord> records;         // per-player rows
};

SynthStream synthesize(const Scenario& scenario);

void write_ndjson(std::ostream& out, const SynthStream& stream);

/// Frame batches exactly as the feed path would assemble them.
std::vector<FrameBatch> to_batches(const SynthStream& stream);

}  // namespace hitalert

#endif  // HITALERT_SYNTH_HPP
