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

#include <hitalert/synth.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include <hitalert/config_file.hpp>

namespace hitalert
{

namespace
{

std::size_t segment_index(const std::vector<Waypoint>& route, double t)
{
  std::size_t i = 0;
  while (i + 2 < route.size() && t >= route[i + 1].t)
    ++i;
  return i;
}

std::vector<Waypoint> parse_route(std::string_view text, const std::string& id)
{
  std::vector<Waypoint> route;
  while (!trim(text).empty())
  {
    const auto semi = text.find(';');
    const auto item = trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (item.empty())
      continue;

    double values[3];
    std::size_t count = 0;
    std::string_view rest = item;
    while (!rest.empty())
    {
      const auto space = rest.find_first_of(" \t");
      const auto token = rest.substr(0, space);
      if (count == 3)
        throw Error(Errc::BadSpec, "player." + id + ": waypoint needs `t x y`");
      try
      {
        values[count++] = parse_number(token, "waypoint");
      }
      catch (const Error& e)
      {
        throw Error(Errc::BadSpec, "player." + id + ": " + e.what());
      }
      rest = space == std::string_view::npos ? std::string_view{} : trim(rest.substr(space));
    }
    if (count != 3)
      throw Error(Errc::BadSpec, "player." + id + ": waypoint needs `t x y`");
    route.push_back(Waypoint{values[0], Vec2{values[1], values[2]}});
  }
  return route;
}

}  // namespace

Vec2 ScenarioPlayer::position_at(double t) const
{
  if (route.size() == 1 || t <= route.front().t)
    return route.front().pos;
  if (t >= route.back().t)
    return route.back().pos;
  const auto i = segment_index(route, t);
  const auto& a = route[i];
  const auto& b = route[i + 1];
  const double u = (t - a.t) / (b.t - a.t);
  return a.pos + (b.pos - a.pos) * u;
}

Vec2 ScenarioPlayer::velocity_at(double t) const
{
  if (route.size() == 1 || t < route.front().t || t >= route.back().t)
    return {};
  const auto i = segment_index(route, t);
  return (route[i + 1].pos - route[i].pos) / (route[i + 1].t - route[i].t);
}

double Scenario::end_time() const
{
  if (duration)
    return *duration;
  double end = 0.0;
  for (const auto& player : players)
    end = std::max(end, player.route.back().t);
  return end;
}

std::int64_t Scenario::frame_count() const
{
  return static_cast<std::int64_t>(std::floor(end_time() / sample_dt + 1e-9)) + 1;
}

void validate_scenario(const Scenario& scenario)
{
  if (!(scenario.sample_dt > 0.0))
    throw Error(Errc::BadSpec, "sample_dt must be > 0");
  if (!(scenario.noise_sigma >= 0.0))
    throw Error(Errc::BadSpec, "noise_sigma must be >= 0");
  if (!(scenario.dropout >= 0.0 && scenario.dropout <= 1.0))
    throw Error(Errc::BadSpec, "dropout must be within [0, 1]");
  if (!(scenario.shoulder_width >= 0.0))
    throw Error(Errc::BadSpec, "shoulder_width must be >= 0");
  if (scenario.duration && !(*scenario.duration >= 0.0))
    throw Error(Errc::BadSpec, "duration must be >= 0");

  std::set<std::string> ids;
  for (const auto& player : scenario.players)
  {
    if (player.id.empty() || player.id.find('/') != std::string::npos)
      throw Error(Errc::BadSpec, "player id must be non-empty and contain no '/'");
    if (!ids.insert(player.id).second)
      throw Error(Errc::BadSpec, "duplicate player " + player.id);
    if (player.route.empty())
      throw Error(Errc::BadSpec, "player." + player.id + " has no waypoints");
    for (std::size_t i = 0; i < player.route.size(); ++i)
    {
      if (!(player.route[i].t >= 0.0) || !player.route[i].pos.finite())
        throw Error(Errc::BadSpec, "player." + player.id + ": bad waypoint");
      if (i > 0 && !(player.route[i].t > player.route[i - 1].t))
        throw Error(Errc::BadSpec, "player." + player.id + ": overlapping waypoint times");
    }
  }
}

Scenario parse_scenario(std::istream& in)
{
  Scenario scenario;
  std::vector<KeyValue> entries;
  try
  {
    entries = parse_key_values(in);
  }
  catch (const Error& e)
  {
    throw Error(Errc::BadSpec, e.what());
  }

  for (const auto& kv : entries)
  {
    try
    {
      if (kv.key == "sample_dt")
        scenario.sample_dt = parse_number(kv.value, kv.key);
      else if (kv.key == "duration")
        scenario.duration = parse_number(kv.value, kv.key);
      else if (kv.key == "noise_sigma")
        scenario.noise_sigma = parse_distance(kv.value);
      else if (kv.key == "dropout")
        scenario.dropout = parse_number(kv.value, kv.key);
      else if (kv.key == "seed")
        scenario.seed = static_cast<std::uint64_t>(parse_number(kv.value, kv.key));
      else if (kv.key == "shoulder_width")
        scenario.shoulder_width = parse_distance(kv.value);
      else if (kv.key == "game_id")
        scenario.game_id = kv.value;
      else if (kv.key == "play_id")
        scenario.play_id = kv.value;
      else if (kv.key.starts_with("player."))
      {
        const std::string id = kv.key.substr(7);
        scenario.players.push_back(ScenarioPlayer{id, parse_route(kv.value, id)});
      }
      else
        throw Error(Errc::BadSpec, "unknown key '" + kv.key + "'");
    }
    catch (const Error& e)
    {
      if (e.code() == Errc::BadSpec)
        throw;
      throw Error(Errc::BadSpec, "line " + std::to_string(kv.line) + ": " + e.what());
    }
  }
  validate_scenario(scenario);
  return scenario;
}

Scenario load_scenario_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::Io, "cannot open scenario " + path.string());
  return parse_scenario(in);
}

SynthStream synthesize(const Scenario& scenario)
{
  validate_scenario(scenario);

  SynthStream stream;
  stream.sample_dt = scenario.sample_dt;
  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<Vec2> last_heading(scenario.players.size(), Vec2{1.0, 0.0});
  const std::int64_t frames = scenario.frame_count();
  stream.frames.resize(static_cast<std::size_t>(frames));

  for (std::int64_t k = 0; k < frames; ++k)
  {
    const double t = static_cast<double>(k) * scenario.sample_dt;
    auto& samples = stream.frames[static_cast<std::size_t>(k)];
    for (std::size_t p = 0; p < scenario.players.size(); ++p)
    {
      const auto& player = scenario.players[p];
      const Vec2 centre = player.position_at(t);
      const Vec2 velocity = player.velocity_at(t);
      const double speed = velocity.norm();
      if (speed > 0.0)
        last_heading[p] = velocity / speed;
      const Vec2 normal{-last_heading[p].y, last_heading[p].x};
      const Vec2 half = normal * (scenario.shoulder_width / 2.0);

      // Draw every variate even for dropped samples so streams stay aligned across settings.
      const std::array<Vec2, 2> nominal{centre + half, centre - half};
      const std::array<const char*, 2> suffix{"/L", "/R"};
      std::array<std::optional<Vec2>, 2> observed;
      for (std::size_t tag = 0; tag < 2; ++tag)
      {
        const bool dropped = uniform(rng) < scenario.dropout;
        const Vec2 jitter{noise(rng) * scenario.noise_sigma, noise(rng) * scenario.noise_sigma};
        if (dropped)
          continue;
        observed[tag] = nominal[tag] + jitter;
        samples.push_back(TagSample{player.id + suffix[tag], t, *observed[tag], std::nullopt});
      }
      if (!observed[0] && !observed[1])
        continue;

      TrackingRecord record;
      record.game_id = scenario.game_id;
      record.play_id = scenario.play_id;
      record.frame_id = k + 1;
      record.player_id = player.id;
      record.display_name = player.id;
      if (observed[0] && observed[1])
        record.pos = (*observed[0] + *observed[1]) / 2.0;
      else if (observed[0])
        record.pos = *observed[0] - half;
      else
        record.pos = *observed[1] + half;
      record.speed = speed;
      double dir = std::atan2(velocity.x, velocity.y) * 180.0 / std::numbers::pi;
      if (dir < 0.0)
        dir += 360.0;
      record.dir = dir;
      record.distance = speed * scenario.sample_dt;
      stream.records.push_back(std::move(record));
    }
  }
  return stream;
}

void write_ndjson(std::ostream& out, const SynthStream& stream)
{
  for (const auto& frame : stream.frames)
  {
    for (const auto& sample : frame)
      out << format_feed_line(sample) << '\n';
  }
}

std::vector<FrameBatch> to_batches(const SynthStream& stream)
{
  std::vector<FrameBatch> batches;
  for (std::size_t k = 0; k < stream.frames.size(); ++k)
  {
    if (stream.frames[k].empty())
      continue;
    FrameBatch batch;
    batch.frame = static_cast<std::int64_t>(k);
    batch.t = static_cast<double>(k) * stream.sample_dt;
    batch.samples = stream.frames[k];
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace hitalert
