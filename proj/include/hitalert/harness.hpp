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

#ifndef HITALERT_HARNESS_HPP
#define HITALERT_HARNESS_HPP

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <hitalert/alerts.hpp>
#include <hitalert/core.hpp>
#include <hitalert/evaluation.hpp>
#include <hitalert/ingest.hpp>
#include <hitalert/io.hpp>
#include <hitalert/predictor.hpp>
#include <hitalert/roster.hpp>
#include <hitalert/tracking.hpp>

namespace hitalert
{

/// Groups feed samples into frames. A frame closes when a sample of a later
/// frame arrives or when the caller closes it (timeout, end of stream).
class FrameAssembler
{
public:
  explicit FrameAssembler(double sample_dt) : sample_dt_(sample_dt) {}

  /// Returns the frame this sample closed, if any. Samples for frames that
  /// are already closed, or repeating a tag within a frame, are dropped.
  std::optional<FrameBatch> push(TagSample sample);
  std::optional<FrameBatch> close_open();

  bool has_open() const noexcept { return open_.has_value(); }
  std::size_t late_samples() const noexcept { return late_; }
  std::size_t duplicate_samples() const noexcept { return duplicates_; }

private:
  double sample_dt_;
  std::optional<double> t0_;
  std::optional<FrameBatch> open_;
  std::optional<std::int64_t> last_closed_;
  std::size_t late_ = 0;
  std::size_t duplicates_ = 0;
};

/// Power-of-two microsecond buckets; bucket 0 holds [0, 1) us, bucket i holds
/// [2^(i-1), 2^i) us, the last bucket is open-ended.
class LatencyHistogram
{
public:
  static constexpr std::size_t bucket_count = 24;

  void add(double microseconds);

  std::uint64_t count() const noexcept { return total_; }
  const std::array<std::uint64_t, bucket_count>& buckets() const noexcept { return buckets_; }

  /// Exact percentile over the recorded samples, q in [0, 1].
  double percentile(double q) const;

private:
  std::array<std::uint64_t, bucket_count> buckets_{};
  std::uint64_t total_ = 0;
  std::vector<double> samples_;
};

struct RunStats
{
  std::uint64_t frames_processed = 0;
  std::uint64_t events_predicted = 0;
  LatencyHistogram latency;
  std::size_t skipped_rows = 0;
  std::size_t dropped_records = 0;
  std::size_t malformed_lines = 0;
  std::size_t late_samples = 0;
  std::size_t duplicate_samples = 0;
  std::size_t unknown_tags = 0;
  std::size_t commands_sent = 0;
  std::size_t suppressed = 0;
  std::size_t unmapped = 0;
  std::size_t outbox_dropped = 0;
  double wall_clock_s = 0.0;

  std::string to_text() const;
};

struct FrameOutput
{
  std::vector<PlayerState> states;  // last processed frame
  std::vector<CollisionEvent> events;
  std::uint64_t frames = 0;         // including gap frames filled in
};

/// Tracking plus prediction over a frame stream. Frames skipped by the input
/// are stepped with no samples so every player advances once per frame.
class Engine
{
public:
  Engine(PredictorConfig config, Roster roster);

  FrameOutput process(const FrameBatch& batch);

  const PredictorConfig& config() const noexcept { return config_; }
  const Roster& roster() const noexcept { return roster_; }
  std::size_t unknown_tags() const noexcept { return unknown_tags_; }
  std::size_t out_of_order_batches() const noexcept { return out_of_order_; }

private:
  void step(std::int64_t frame, double t, const FrameBatch* batch, FrameOutput& out);
  void sync_tracks();

  PredictorConfig config_;
  Roster roster_;
  std::vector<TrackState> tracks_;
  PairTable pairs_;
  std::optional<std::int64_t> last_frame_;
  std::size_t unknown_tags_ = 0;
  std::size_t out_of_order_ = 0;
};

struct ReplayOptions
{
  PredictorConfig config;
  std::optional<Roster> roster;   // default: inferred from the data
  double speed = 0.0;             // 0 = as fast as possible, k = k times real time
  bool strict = false;
  std::optional<PlayFilter> filter;
};

struct ReplayResult
{
  std::vector<CollisionEvent> events;
  std::vector<CollisionEvent> actual;
  std::vector<NamedReport> reports;
  RunStats stats;
  bool metrics_only = false;
};

/// Runs batches through an Engine, pacing frames when opts.speed > 0, and
/// matches the predictions against ground truth from the raw positions.
ReplayResult replay_batches(const std::vector<FrameBatch>& batches, Roster roster, const ReplayOptions& opts);

/// Replays a tracking CSV, a feed NDJSON file, or (metrics only) an incident table.
ReplayResult replay_file(const std::filesystem::path& path, const ReplayOptions& opts);

struct LiveOptions
{
  std::string feed_uri = "-";
  std::string sink_uri = "-";
  PredictorConfig config;
  std::optional<Roster> roster;
  RetryPolicy retry;
  std::size_t queue_capacity = 4096;
  std::size_t outbox_capacity = 256;
  std::optional<int> feed_fd;  // borrowed descriptor instead of feed_uri
  ByteSink* sink = nullptr;    // borrowed sink instead of sink_uri
};

struct LiveResult
{
  std::vector<CollisionEvent> events;
  std::vector<PagerCommand> commands;
  RunStats stats;
};

/// Feed reader -> frame processor -> pager outbox, until end of feed.
/// Throws ConnectionLost or Io when the feed cannot be (re)opened.
LiveResult run_live(const LiveOptions& opts);

}  // namespace hitalert

#endif  // HITALERT_HARNESS_HPP
