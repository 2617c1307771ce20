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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include <hitalert/predictor.hpp>
#include <hitalert/tracking.hpp>

#include "oracles.hpp"

namespace
{

using hitalert::CollisionEvent;
using hitalert::PlayerState;
using hitalert::Vec2;

PlayerState state_of(const std::string& id, std::int64_t frame, Vec2 pos, Vec2 vel = {}, int staleness = 0)
{
  PlayerState s;
  s.player = id;
  s.frame = frame;
  s.t = static_cast<double>(frame) * 0.1;
  s.pos = pos;
  s.vel = vel;
  s.staleness = staleness;
  return s;
}

// Closed-form kinematics for a player following a + b t.
struct Linear
{
  std::string id;
  Vec2 a;
  Vec2 b;

  PlayerState at(std::int64_t frame) const
  {
    const double t = static_cast<double>(frame) * 0.1;
    return state_of(id, frame, a + b * t, b);
  }
  oracle::Trajectory trajectory() const
  {
    return [a = a, b = b](double t) { return oracle::Point{a.x + b.x * t, a.y + b.y * t}; };
  }
};

std::vector<CollisionEvent> run(const std::function<std::vector<PlayerState>(std::int64_t)>& frame_states,
                                int frames, const hitalert::PredictorConfig& config)
{
  hitalert::PairTable table;
  std::vector<CollisionEvent> events;
  for (int k = 0; k < frames; ++k)
  {
    const auto players = frame_states(k);
    auto step = hitalert::step_frame(table, players, config);
    events.insert(events.end(), step.events.begin(), step.events.end());
  }
  return events;
}

TEST(PairDistance, Examples)
{
  const auto a = state_of("a", 0, {0, 0});
  const auto b = state_of("b", 0, {3, 4});
  EXPECT_DOUBLE_EQ(hitalert::pair_distance_now(a, b), 5.0);
  EXPECT_DOUBLE_EQ(hitalert::pair_distance_now(a, a), 0.0);

  // Closing at 4 yd/s combined from 10 yd apart: 9.6 after one step.
  const auto p = state_of("p", 0, {0, 0}, {2, 0});
  const auto q = state_of("q", 0, {10, 0}, {-2, 0});
  EXPECT_NEAR(hitalert::pair_distance_next(p, q, 0.1), 9.6, 1e-12);

  const auto r = state_of("r", 0, {0, 0}, {1, 0});
  const auto s = state_of("s", 0, {7, 0}, {1, 0});
  EXPECT_NEAR(hitalert::pair_distance_next(r, s, 0.1), 7.0, 1e-12);
}

TEST(Predictor, HeadOnFiresWhereExactRuleSays)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const Linear a{"A", {0, 0}, {2, 0}};
  const Linear b{"B", {10, 0}, {-2, 0}};
  const auto table = oracle::distance_table(a.trajectory(), b.trajectory(), 0.1, 51);
  const auto expected = oracle::first_predicted_fire(table, 2.0 / 3.0);
  ASSERT_TRUE(expected);

  const auto events = run([&](std::int64_t k) { return std::vector{a.at(k), b.at(k)}; }, 51, config);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].frame, *expected);
  EXPECT_EQ(events[0].frame, 23);
  EXPECT_EQ(events[0].pair, hitalert::PlayerPair("A", "B"));
  ASSERT_TRUE(events[0].min_predicted_distance);
  EXPECT_LT(*events[0].min_predicted_distance, config.threshold);
}

TEST(Predictor, StationaryPlayersNeverFire)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const auto events = run(
      [](std::int64_t k) {
        return std::vector{state_of("a", k, {0, 0}), state_of("b", k, {0.3, 0})};
      },
      50, config);
  // Already close but not closing in: no threat.
  EXPECT_TRUE(events.empty());
}

TEST(Predictor, ParallelPlayersNeverFire)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const Linear a{"a", {0, 0}, {3, 0}};
  const Linear b{"b", {0, 3}, {3, 0}};
  EXPECT_TRUE(run([&](std::int64_t k) { return std::vector{a.at(k), b.at(k)}; }, 100, config).empty());
}

// B runs through A, turns, and runs back: two separate episodes.
TEST(Predictor, CrossingTwiceGivesTwoEpisodes)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const auto b_pos = [](double t) { return t <= 5.0 ? 2.0 * t : 20.0 - 2.0 * t; };
  const auto b_vel = [](double t) { return t < 5.0 ? 2.0 : -2.0; };
  const int frames = 101;

  std::vector<double> measured, next_true;
  std::vector<bool> fires;
  for (int k = 0; k < frames; ++k)
  {
    const double t = k * 0.1;
    measured.push_back(std::abs(b_pos(t) - 5.0));
    // What the exact-velocity extrapolation sees.
    next_true.push_back(std::abs(b_pos(t) + b_vel(t) * 0.1 - 5.0));
    fires.push_back(next_true.back() < config.threshold && next_true.back() < measured.back());
  }
  const auto onsets = oracle::episode_onsets(measured, fires, config.threshold * config.hysteresis_factor,
                                             config.release_frames, config.min_event_gap);
  ASSERT_EQ(onsets.size(), 2u);

  const auto events = run(
      [&](std::int64_t k) {
        const double t = static_cast<double>(k) * 0.1;
        return std::vector{state_of("A", k, {5, 0}), state_of("B", k, {b_pos(t), 0}, {b_vel(t), 0})};
      },
      frames, config);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].frame, onsets[0]);
  EXPECT_EQ(events[1].frame, onsets[1]);
}

TEST(Predictor, FullRosterPairCounts)
{
  const auto config = hitalert::PredictorConfig::pilot();
  std::vector<PlayerState> players;
  for (int i = 0; i < 22; ++i)
    players.push_back(state_of("p" + std::to_string(i), 0, {5.0 * (i % 11), 10.0 * (i / 11)}));
  hitalert::PairTable table;
  const auto step = hitalert::step_frame(table, players, config);
  EXPECT_EQ(step.pairs_evaluated, 231u);
  EXPECT_TRUE(step.events.empty());
  EXPECT_EQ(table.size(), 231u);

  hitalert::PairTable empty;
  EXPECT_EQ(hitalert::step_frame(empty, std::span<const PlayerState>{}, config).pairs_evaluated, 0u);
}

TEST(Predictor, OnlyTheClosingPairOfThreeFires)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const Linear a{"a", {0, 0}, {2, 0}};
  const Linear b{"b", {4, 0}, {-2, 0}};
  const Linear c{"c", {50, 50}, {0, 0}};
  const auto events = run([&](std::int64_t k) { return std::vector{a.at(k), b.at(k), c.at(k)}; }, 20, config);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].pair, hitalert::PlayerPair("a", "b"));
}

TEST(Predictor, StalePlayersAreSkipped)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const auto a = state_of("a", 0, {0, 0}, {2, 0});
  const auto b = state_of("b", 0, {0.5, 0}, {-2, 0}, config.max_staleness + 1);
  hitalert::PairState pair{hitalert::PlayerPair("a", "b")};
  try
  {
    hitalert::step_pair(pair, a, b, config);
    FAIL();
  }
  catch (const hitalert::Error& e)
  {
    EXPECT_EQ(e.code(), hitalert::Errc::StalePlayer);
  }

  hitalert::PairTable table;
  const std::vector players{a, b, state_of("c", 0, {9, 9}, {}, hitalert::never_seen)};
  const auto step = hitalert::step_frame(table, players, config);
  EXPECT_EQ(step.pairs_evaluated, 0u);
  EXPECT_TRUE(step.events.empty());

  // At the staleness limit the player still counts.
  const std::vector held{a, state_of("b", 0, {0.5, 0}, {-2, 0}, config.max_staleness)};
  EXPECT_EQ(hitalert::step_frame(table, held, config).events.size(), 1u);
}

TEST(Predictor, ReleaseNeedsConsecutiveFramesAndGap)
{
  hitalert::EpisodeRule rule{1.0, 1.5, 2, 5};
  hitalert::PairState state{hitalert::PlayerPair("a", "b"), hitalert::PairPhase::Alerted, 0.0, 0, 10};
  EXPECT_FALSE(hitalert::try_release(state, 2.0, 11, rule));
  EXPECT_FALSE(hitalert::try_release(state, 1.0, 12, rule));  // not above 1.5: counter resets
  EXPECT_EQ(state.frames_above_release, 0);
  EXPECT_FALSE(hitalert::try_release(state, 2.0, 13, rule));
  EXPECT_FALSE(hitalert::try_release(state, 2.0, 14, rule));  // two frames above, gap only 4
  EXPECT_TRUE(hitalert::try_release(state, 2.0, 15, rule));
  EXPECT_EQ(state.phase, hitalert::PairPhase::Clear);
  EXPECT_FALSE(hitalert::try_release(state, 2.0, 16, rule));
}

// Random players on a small field, moving with occasional turns; states are
// exact so every property below is about the state machine alone.
struct RandomPlay
{
  std::vector<std::vector<PlayerState>> frames;

  RandomPlay(std::uint64_t seed, int players, int frame_count)
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 8.0);
    std::uniform_real_distribution<double> speed(-3.0, 3.0);
    std::bernoulli_distribution turn(0.05);
    std::vector<Vec2> pos, vel;
    for (int i = 0; i < players; ++i)
    {
      pos.push_back({coord(rng), coord(rng)});
      vel.push_back({speed(rng), speed(rng)});
    }
    for (int k = 0; k < frame_count; ++k)
    {
      std::vector<PlayerState> states;
      for (int i = 0; i < players; ++i)
      {
        if (turn(rng))
          vel[i] = {speed(rng), speed(rng)};
        states.push_back(state_of("p" + std::to_string(i), k, pos[i], vel[i]));
        pos[i] = pos[i] + vel[i] * 0.1;
      }
      frames.push_back(std::move(states));
    }
  }

  std::vector<CollisionEvent> events(const hitalert::PredictorConfig& config) const
  {
    return run([&](std::int64_t k) { return frames[k]; }, static_cast<int>(frames.size()), config);
  }
};

TEST(PredictorProperty, EveryFireIsAThreat)
{
  const auto config = hitalert::PredictorConfig::pilot();
  std::size_t total = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
  {
    const RandomPlay play(seed, 6, 200);
    for (const auto& event : play.events(config))
    {
      ++total;
      std::map<std::string, PlayerState> at;
      for (const auto& s : play.frames[event.frame])
        at[s.player] = s;
      const auto& a = at[event.pair.first()];
      const auto& b = at[event.pair.second()];
      const double now = std::hypot(a.pos.x - b.pos.x, a.pos.y - b.pos.y);
      const Vec2 na = a.pos + a.vel * 0.1;
      const Vec2 nb = b.pos + b.vel * 0.1;
      const double next = std::hypot(na.x - nb.x, na.y - nb.y);
      ASSERT_LT(next, config.threshold);
      ASSERT_LT(next, now);
    }
  }
  EXPECT_GT(total, 50u);
}

TEST(PredictorProperty, NoDuplicateAlertsWithinAnEpisode)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const double release = config.threshold * config.hysteresis_factor;
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
  {
    const RandomPlay play(seed, 6, 200);
    std::map<hitalert::PlayerPair, std::vector<std::int64_t>> fired;
    for (const auto& event : play.events(config))
      fired[event.pair].push_back(event.frame);

    for (const auto& [pair, frames] : fired)
    {
      for (std::size_t i = 1; i < frames.size(); ++i)
      {
        ASSERT_GE(frames[i] - frames[i - 1], config.min_event_gap);
        // Somewhere in between the pair was clear of the release distance
        // for release_frames frames in a row.
        int run_above = 0, best = 0;
        for (std::int64_t k = frames[i - 1] + 1; k < frames[i]; ++k)
        {
          std::map<std::string, Vec2> at;
          for (const auto& s : play.frames[k])
            at[s.player] = s.pos;
          const Vec2 d = at[pair.first()] - at[pair.second()];
          run_above = std::hypot(d.x, d.y) > release ? run_above + 1 : 0;
          best = std::max(best, run_above);
        }
        ASSERT_GE(best, config.release_frames);
      }
    }
  }
}

TEST(PredictorProperty, RigidMotionInvariant)
{
  const auto config = hitalert::PredictorConfig::pilot();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> shift(-40.0, 40.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    RandomPlay play(seed, 5, 150);
    const auto before = play.events(config);
    const double theta = angle(rng);
    const double c = std::cos(theta), s = std::sin(theta);
    const Vec2 offset{shift(rng), shift(rng)};
    for (auto& frame : play.frames)
    {
      for (auto& p : frame)
      {
        p.pos = Vec2{c * p.pos.x - s * p.pos.y, s * p.pos.x + c * p.pos.y} + offset;
        p.vel = Vec2{c * p.vel.x - s * p.vel.y, s * p.vel.x + c * p.vel.y};
      }
    }
    const auto after = play.events(config);
    ASSERT_EQ(before.size(), after.size()) << "seed " << seed;
    for (std::size_t i = 0; i < before.size(); ++i)
    {
      ASSERT_EQ(before[i].pair, after[i].pair);
      ASSERT_EQ(before[i].frame, after[i].frame);
    }
  }
}

TEST(PredictorProperty, LargerThresholdFiresNoLater)
{
  auto tight = hitalert::PredictorConfig::pilot();
  auto loose = hitalert::PredictorConfig::game();
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
  {
    const RandomPlay play(seed, 6, 200);
    std::map<hitalert::PlayerPair, std::int64_t> first_tight, first_loose;
    for (const auto& e : play.events(tight))
      first_tight.try_emplace(e.pair, e.frame);
    for (const auto& e : play.events(loose))
      first_loose.try_emplace(e.pair, e.frame);
    for (const auto& [pair, frame] : first_tight)
    {
      ASSERT_TRUE(first_loose.contains(pair));
      ASSERT_LE(first_loose[pair], frame);
    }
  }
}

TEST(PredictorProperty, Deterministic)
{
  const auto config = hitalert::PredictorConfig::pilot();
  const RandomPlay play(7, 8, 300);
  const auto x = play.events(config);
  const auto y = play.events(config);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    EXPECT_EQ(x[i].pair, y[i].pair);
    EXPECT_EQ(x[i].frame, y[i].frame);
    EXPECT_EQ(x[i].min_predicted_distance, y[i].min_predicted_distance);
  }
}

}  // namespace
