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
#include <sstream>

#include <hitalert/synth.hpp>

#include "oracles.hpp"

namespace
{

using hitalert::Vec2;

hitalert::Scenario parse(const std::string& text)
{
  std::istringstream in(text);
  return hitalert::parse_scenario(in);
}

const char* head_on = "sample_dt = 0.1\n"
                      "duration = 5\n"
                      "player.A = 0 0 0; 5 10 0\n"
                      "player.B = 0 10 0; 5 0 0\n";

std::map<std::string, Vec2> centres(const std::vector<hitalert::TagSample>& samples)
{
  std::map<std::string, std::pair<Vec2, int>> sums;
  for (const auto& s : samples)
  {
    auto& [sum, n] = sums[s.tag_id.substr(0, s.tag_id.find('/'))];
    sum = sum + s.pos;
    ++n;
  }
  std::map<std::string, Vec2> out;
  for (const auto& [id, entry] : sums)
    out[id] = entry.first / entry.second;
  return out;
}

TEST(Scenario, RoutesInterpolateAndHold)
{
  const auto scenario = parse("player.A = 1 0 0; 3 4 2; 4 4 2\n");
  const auto& a = scenario.players.at(0);
  EXPECT_EQ(a.position_at(0.0), (Vec2{0, 0}));
  EXPECT_EQ(a.position_at(2.0), (Vec2{2, 1}));
  EXPECT_EQ(a.position_at(10.0), (Vec2{4, 2}));
  EXPECT_EQ(a.velocity_at(0.5), (Vec2{0, 0}));
  EXPECT_EQ(a.velocity_at(2.0), (Vec2{2, 1}));
  EXPECT_EQ(a.velocity_at(3.5), (Vec2{0, 0}));
  EXPECT_EQ(scenario.frame_count(), 41);
}

TEST(Scenario, RejectsBadSpecs)
{
  for (const char* text : {"player.A = 0 0 0; 0 1 1\n", "noise_sigma = -1\nplayer.A = 0 0 0\n",
                           "dropout = 1.5\nplayer.A = 0 0 0\n", "colour = red\n", "player.A = 0 0\n",
                           "player.A = 0 0 0\nplayer.A = 1 1 1\n", "sample_dt = 0\nplayer.A = 0 0 0\n",
                           "player.A/L = 0 0 0\n", "player.A = 0 nan 0\n"})
  {
    try
    {
      parse(text);
      ADD_FAILURE() << "accepted: " << text;
    }
    catch (const hitalert::Error& e)
    {
      EXPECT_EQ(e.code(), hitalert::Errc::BadSpec) << text;
      EXPECT_TRUE(e.is_config_error());
    }
  }
}

TEST(Synthesize, HeadOnCrossesThresholdWhereGeometrySays)
{
  const auto stream = hitalert::synthesize(parse(head_on));
  ASSERT_EQ(stream.frames.size(), 51u);

  const auto a = [](double t) { return oracle::Point{2.0 * t, 0.0}; };
  const auto b = [](double t) { return oracle::Point{10.0 - 2.0 * t, 0.0}; };
  const auto table = oracle::distance_table(a, b, 0.1, 51);
  const auto expected = oracle::first_below(table, 2.0 / 3.0);
  ASSERT_TRUE(expected);
  EXPECT_EQ(*expected, 24);

  std::optional<int> observed;
  for (std::size_t k = 0; k < stream.frames.size() && !observed; ++k)
  {
    const auto c = centres(stream.frames[k]);
    if (hitalert::distance(c.at("A"), c.at("B")) < 2.0 / 3.0)
      observed = static_cast<int>(k);
  }
  EXPECT_EQ(observed, expected);
}

TEST(Synthesize, TagsStraddleTheCentreAcrossTheHeading)
{
  const auto stream = hitalert::synthesize(parse(head_on));
  for (const auto& frame : stream.frames)
  {
    ASSERT_EQ(frame.size(), 4u);
    // A runs along +x, so its left tag sits at +y.
    EXPECT_EQ(frame[0].tag_id, "A/L");
    EXPECT_NEAR(frame[0].pos.y, 0.25, 1e-12);
    EXPECT_NEAR(frame[1].pos.y, -0.25, 1e-12);
    EXPECT_NEAR(hitalert::distance(frame[0].pos, frame[1].pos), 0.5, 1e-12);
  }
}

TEST(Synthesize, StationaryPlayerIsConstant)
{
  const auto stream = hitalert::synthesize(parse("duration = 2\nplayer.S = 0 3 4\n"));
  for (const auto& frame : stream.frames)
  {
    ASSERT_EQ(frame.size(), 2u);
    EXPECT_EQ(frame[0].pos, stream.frames[0][0].pos);
    EXPECT_EQ(frame[1].pos, stream.frames[0][1].pos);
  }
}

TEST(Synthesize, SeededStreamsAreReproducible)
{
  const std::string noisy = std::string(head_on) + "noise_sigma = 0.2\ndropout = 0.1\nseed = 42\n";
  const auto bytes = [](const hitalert::Scenario& s) {
    std::ostringstream out;
    hitalert::write_ndjson(out, hitalert::synthesize(s));
    return out.str();
  };
  const auto first = bytes(parse(noisy));
  EXPECT_EQ(first, bytes(parse(noisy)));
  auto reseeded = parse(noisy);
  reseeded.seed = 43;
  EXPECT_NE(first, bytes(reseeded));
}

TEST(Synthesize, NoiseAndDropoutRates)
{
  auto scenario = parse("duration = 200\nplayer.S = 0 0 0\nnoise_sigma = 0.3\ndropout = 0.2\nseed = 5\n");
  scenario.shoulder_width = 0.0;
  const auto stream = hitalert::synthesize(scenario);
  double sum_sq = 0.0;
  std::size_t kept = 0;
  for (const auto& frame : stream.frames)
  {
    for (const auto& s : frame)
    {
      sum_sq += s.pos.x * s.pos.x + s.pos.y * s.pos.y;
      ++kept;
    }
  }
  const double offered = 2.0 * static_cast<double>(stream.frames.size());
  EXPECT_NEAR(static_cast<double>(kept) / offered, 0.8, 0.02);
  EXPECT_NEAR(std::sqrt(sum_sq / (2.0 * static_cast<double>(kept))), 0.3, 0.01);

  scenario.dropout = 1.0;
  for (const auto& frame : hitalert::synthesize(scenario).frames)
    EXPECT_TRUE(frame.empty());
}

TEST(Synthesize, BatchesAndRecordsAgree)
{
  auto scenario = parse(std::string(head_on) + "dropout = 0.3\nseed = 9\n");
  const auto stream = hitalert::synthesize(scenario);
  const auto batches = hitalert::to_batches(stream);
  std::size_t samples = 0;
  for (const auto& frame : stream.frames)
    samples += frame.size();
  std::size_t batched = 0;
  for (const auto& batch : batches)
  {
    EXPECT_FALSE(batch.samples.empty());
    EXPECT_NEAR(batch.t, static_cast<double>(batch.frame) * 0.1, 1e-12);
    batched += batch.samples.size();
  }
  EXPECT_EQ(batched, samples);

  // One tracking row per player per frame with at least one tag seen, frames numbered from 1.
  ASSERT_FALSE(stream.records.empty());
  EXPECT_EQ(stream.records.front().frame_id, 1);
  std::ostringstream csv;
  hitalert::write_tracking_csv(csv, stream.records);
  std::istringstream in(csv.str());
  const auto parsed = hitalert::parse_tracking_csv(in);
  EXPECT_EQ(parsed.records.size(), stream.records.size());
  EXPECT_EQ(parsed.skipped, 0u);
}

}  // namespace
