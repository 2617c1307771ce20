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

#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unistd.h>

#include <hitalert/harness.hpp>
#include <hitalert/synth.hpp>

namespace
{

using hitalert::TagSample;

class MemorySink : public hitalert::ByteSink
{
public:
  void write(std::string_view bytes) override
  {
    std::lock_guard lock(mutex_);
    data_ += bytes;
  }
  std::string data()
  {
    std::lock_guard lock(mutex_);
    return data_;
  }

private:
  std::mutex mutex_;
  std::string data_;
};

std::string source_path(const std::string& relative)
{
  return std::string(HITALERT_SOURCE_DIR) + "/" + relative;
}

hitalert::SynthStream scenario_stream(const std::string& name)
{
  return hitalert::synthesize(hitalert::load_scenario_file(source_path("scenarios/" + name)));
}

std::string ndjson_of(const hitalert::SynthStream& stream)
{
  std::ostringstream out;
  hitalert::write_ndjson(out, stream);
  return out.str();
}

// Feeds `text` through a pipe into run_live and returns what it paged.
hitalert::LiveResult live_over_pipe(const std::string& text, MemorySink& sink)
{
  int fds[2];
  EXPECT_EQ(::pipe(fds), 0);
  hitalert::UniqueFd read_end(fds[0]);
  std::thread writer([fd = fds[1], &text] {
    std::size_t done = 0;
    while (done < text.size())
    {
      const auto n = ::write(fd, text.data() + done, text.size() - done);
      if (n <= 0)
        break;
      done += static_cast<std::size_t>(n);
    }
    ::close(fd);
  });
  hitalert::LiveOptions opts;
  opts.config = hitalert::PredictorConfig::pilot();
  opts.feed_fd = read_end.get();
  opts.sink = &sink;
  auto result = hitalert::run_live(opts);
  writer.join();
  return result;
}

TEST(FrameAssembler, GroupsByFrameRelativeToFirstSample)
{
  hitalert::FrameAssembler assembler(0.1);
  EXPECT_FALSE(assembler.push({"a", 100.0, {}, std::nullopt}));
  EXPECT_FALSE(assembler.push({"b", 100.02, {}, std::nullopt}));
  EXPECT_FALSE(assembler.push({"b", 100.03, {}, std::nullopt}));  // same tag, same frame
  const auto first = assembler.push({"a", 100.1, {}, std::nullopt});
  ASSERT_TRUE(first);
  EXPECT_EQ(first->frame, 0);
  EXPECT_EQ(first->samples.size(), 2u);
  EXPECT_EQ(assembler.duplicate_samples(), 1u);

  EXPECT_FALSE(assembler.push({"c", 100.0, {}, std::nullopt}));  // frame 0 is closed
  EXPECT_EQ(assembler.late_samples(), 1u);

  // Frames 2 and 3 were skipped by the feed.
  const auto second = assembler.push({"a", 100.4, {}, std::nullopt});
  ASSERT_TRUE(second);
  EXPECT_EQ(second->frame, 1);
  const auto last = assembler.close_open();
  ASSERT_TRUE(last);
  EXPECT_EQ(last->frame, 4);
  EXPECT_NEAR(last->t, 100.4, 1e-9);
  EXPECT_FALSE(assembler.close_open());
}

TEST(LatencyHistogramTest, BucketsAndPercentiles)
{
  hitalert::LatencyHistogram h;
  for (double us : {0.5, 1.0, 1.5, 3.0, 1000.0})
    h.add(us);
  EXPECT_EQ(h.count(), 5u);
  EXPECT_EQ(h.buckets()[0], 1u);
  EXPECT_EQ(h.buckets()[1], 2u);
  EXPECT_EQ(h.buckets()[2], 1u);
  EXPECT_EQ(h.buckets()[10], 1u);
  EXPECT_DOUBLE_EQ(h.percentile(0.5), 1.5);
  EXPECT_DOUBLE_EQ(h.percentile(1.0), 1000.0);
  EXPECT_DOUBLE_EQ(h.percentile(0.0), 0.5);
  EXPECT_DOUBLE_EQ(hitalert::LatencyHistogram{}.percentile(0.5), 0.0);
}

TEST(EngineTest, FillsSkippedFramesAndIgnoresOldOnes)
{
  hitalert::Roster roster;
  roster.add({"a", {"a/L", "a/R"}});
  roster.add({"b", {"b/L", "b/R"}});
  hitalert::Engine engine(hitalert::PredictorConfig::pilot(), roster);

  hitalert::FrameBatch first{0, 0.0, {{"a/L", 0.0, {0, 0}, std::nullopt}}, {}};
  auto out = engine.process(first);
  EXPECT_EQ(out.frames, 1u);
  ASSERT_EQ(out.states.size(), 2u);

  hitalert::FrameBatch later{3, 0.3, {{"a/L", 0.3, {0, 0}, std::nullopt}, {"zz", 0.3, {1, 1}, std::nullopt}}, {}};
  out = engine.process(later);
  EXPECT_EQ(out.frames, 3u);
  ASSERT_EQ(out.states.size(), 2u);
  EXPECT_EQ(out.states[0].frame, 3);
  EXPECT_EQ(out.states[0].staleness, 0);
  EXPECT_EQ(out.states[1].staleness, hitalert::never_seen);
  EXPECT_EQ(engine.unknown_tags(), 1u);

  EXPECT_EQ(engine.process(first).frames, 0u);
  EXPECT_EQ(engine.out_of_order_batches(), 1u);
}

TEST(EngineTest, OneStatePerRosteredPlayerEveryFrame)
{
  const auto stream = scenario_stream("pileup.scn");
  hitalert::Engine engine(hitalert::PredictorConfig::pilot(), hitalert::Roster::inferring());
  std::int64_t expected_frame = 0;
  for (const auto& batch : hitalert::to_batches(stream))
  {
    const auto out = engine.process(batch);
    expected_frame += static_cast<std::int64_t>(out.frames);
    ASSERT_EQ(out.states.size(), engine.roster().players().size());
    for (const auto& state : out.states)
      ASSERT_EQ(state.frame, expected_frame - 1);
  }
  EXPECT_EQ(engine.roster().players().size(), 5u);
}

TEST(Replay, HeadOnEndToEnd)
{
  hitalert::ReplayOptions opts;
  opts.config = hitalert::PredictorConfig::pilot();
  const auto stream = scenario_stream("head_on.scn");
  const auto result = hitalert::replay_batches(hitalert::to_batches(stream), hitalert::Roster::inferring(), opts);
  ASSERT_EQ(result.events.size(), 1u);
  EXPECT_EQ(result.events[0].frame, 23);
  ASSERT_EQ(result.actual.size(), 1u);
  EXPECT_EQ(result.actual[0].frame, 24);
  const auto& report = result.reports.at(0).report;
  EXPECT_EQ(report.false_positives, 0u);
  EXPECT_EQ(report.false_negatives, 0u);
  EXPECT_EQ(result.stats.latency.count(), result.stats.frames_processed);
  EXPECT_EQ(result.stats.frames_processed, 51u);
}

TEST(Replay, PacedReplayMatchesUnpaced)
{
  const auto batches = hitalert::to_batches(scenario_stream("crossing_twice.scn"));
  hitalert::ReplayOptions fast;
  fast.config = hitalert::PredictorConfig::pilot();
  hitalert::ReplayOptions paced = fast;
  paced.speed = 20.0;
  const auto x = hitalert::replay_batches(batches, hitalert::Roster::inferring(), fast);
  const auto y = hitalert::replay_batches(batches, hitalert::Roster::inferring(), paced);
  EXPECT_EQ(hitalert::format_event_log(x.events), hitalert::format_event_log(y.events));
  EXPECT_EQ(x.events.size(), 2u);
  // 100 frame intervals at 20x real time.
  EXPECT_GE(y.stats.wall_clock_s, 0.45);
}

TEST(Replay, FilesOfEachKind)
{
  hitalert::ReplayOptions opts;
  opts.config = hitalert::PredictorConfig::pilot();

  const auto metrics = hitalert::replay_file(source_path("fixtures/table1.csv"), opts);
  EXPECT_TRUE(metrics.metrics_only);
  ASSERT_EQ(metrics.reports.size(), 2u);
  EXPECT_EQ(metrics.reports[0].report.true_positives, 6u);

  const auto dir = std::filesystem::temp_directory_path();
  const auto empty = dir / "hitalert_empty_play.csv";
  std::ofstream(empty) << "\n\n";
  const auto nothing = hitalert::replay_file(empty, opts);
  EXPECT_EQ(nothing.stats.frames_processed, 0u);
  EXPECT_TRUE(nothing.events.empty());

  const auto feed = dir / "hitalert_head_on.ndjson";
  std::ofstream(feed) << ndjson_of(scenario_stream("head_on.scn")) << "{not json\n";
  const auto replayed = hitalert::replay_file(feed, opts);
  EXPECT_EQ(replayed.events.size(), 1u);
  EXPECT_EQ(replayed.stats.malformed_lines, 1u);

  std::filesystem::remove(empty);
  std::filesystem::remove(feed);
  EXPECT_THROW(hitalert::replay_file(dir / "hitalert_missing_file.csv", opts), hitalert::Error);
}

TEST(Live, HeadOnPagesBothPlayers)
{
  MemorySink sink;
  const auto result = live_over_pipe(ndjson_of(scenario_stream("head_on.scn")), sink);
  ASSERT_EQ(result.events.size(), 1u);
  EXPECT_EQ(result.events[0].frame, 23);
  EXPECT_EQ(sink.data(), "PAGE 1 500\r\nPAGE 2 500\r\n");
  EXPECT_EQ(result.stats.commands_sent, 2u);
  EXPECT_EQ(result.stats.frames_processed, 51u);
}

TEST(Live, LoneRunnerAndBadLines)
{
  MemorySink sink;
  std::string text = "{\"tag\":\"solo/L\",\"t\":0.0,\"x\":0,\"y\":0,\"unit\":\"yd\"}\n"
                     "garbage\n"
                     "{\"tag\":\"solo/L\",\"t\":0.1,\"x\":0.2,\"y\":0,\"unit\":\"yd\"}\n"
                     "{\"tag\":\"solo/L\",\"t\":0.2,\"x\":1.2,\"y\":0}\n";
  const auto result = live_over_pipe(text, sink);
  EXPECT_TRUE(result.events.empty());
  EXPECT_TRUE(sink.data().empty());
  EXPECT_EQ(result.stats.malformed_lines, 1u);
  EXPECT_EQ(result.stats.frames_processed, 3u);
}

TEST(Live, MatchesReplayOnAPileup)
{
  const auto stream = scenario_stream("pileup.scn");
  hitalert::ReplayOptions opts;
  opts.config = hitalert::PredictorConfig::pilot();
  const auto replayed = hitalert::replay_batches(hitalert::to_batches(stream), hitalert::Roster::inferring(), opts);

  MemorySink sink;
  const auto live = live_over_pipe(ndjson_of(stream), sink);
  EXPECT_EQ(hitalert::format_event_log(live.events), hitalert::format_event_log(replayed.events));
  EXPECT_GT(live.stats.suppressed, 0u);
  EXPECT_EQ(live.commands.size() + live.stats.suppressed, 2 * live.events.size());
}

}  // namespace
