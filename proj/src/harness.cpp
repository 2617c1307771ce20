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

#include <hitalert/harness.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <hitalert/config_file.hpp>

namespace hitalert
{

using Clock = std::chrono::steady_clock;

namespace
{

double micros_since(Clock::time_point start)
{
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

}  // namespace

std::optional<FrameBatch> FrameAssembler::push(TagSample sample)
{
  if (!t0_)
    t0_ = sample.t;
  const auto frame = static_cast<std::int64_t>(std::llround((sample.t - *t0_) / sample_dt_));
  if (frame < 0 || (last_closed_ && frame <= *last_closed_) || (open_ && frame < open_->frame))
  {
    ++late_;
    return std::nullopt;
  }

  std::optional<FrameBatch> closed;
  if (open_ && frame > open_->frame)
    closed = close_open();
  if (!open_)
  {
    open_.emplace();
    open_->frame = frame;
    open_->t = *t0_ + static_cast<double>(frame) * sample_dt_;
  }

  const bool repeated = std::any_of(open_->samples.begin(), open_->samples.end(),
                                    [&](const TagSample& s) { return s.tag_id == sample.tag_id; });
  if (repeated)
    ++duplicates_;
  else
    open_->samples.push_back(std::move(sample));
  return closed;
}

std::optional<FrameBatch> FrameAssembler::close_open()
{
  if (!open_)
    return std::nullopt;
  last_closed_ = open_->frame;
  auto batch = std::move(*open_);
  open_.reset();
  return batch;
}

void LatencyHistogram::add(double microseconds)
{
  microseconds = std::max(0.0, microseconds);
  std::size_t bucket = 0;
  if (microseconds >= 1.0)
    bucket = std::min<std::size_t>(bucket_count - 1, static_cast<std::size_t>(std::floor(std::log2(microseconds))) + 1);
  ++buckets_[bucket];
  ++total_;
  samples_.push_back(microseconds);
}

double LatencyHistogram::percentile(double q) const
{
  if (samples_.empty())
    return 0.0;
  std::vector<double> sorted = samples_;
  std::sort(sorted.begin(), sorted.end());
  const double rank = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - static_cast<double>(lo));
}

std::string RunStats::to_text() const
{
  std::ostringstream out;
  out << "frames_processed=" << frames_processed << '\n'
      << "events_predicted=" << events_predicted << '\n'
      << "latency_us_p50=" << latency.percentile(0.5) << '\n'
      << "latency_us_p99=" << latency.percentile(0.99) << '\n'
      << "latency_us_max=" << latency.percentile(1.0) << '\n'
      << "latency_histogram_us=";
  const auto& buckets = latency.buckets();
  for (std::size_t i = 0; i < buckets.size(); ++i)
  {
    if (buckets[i] == 0)
      continue;
    const auto upper = std::uint64_t{1} << i;
    out << "<" << upper << ":" << buckets[i] << ' ';
  }
  out << '\n'
      << "skipped_rows=" << skipped_rows << '\n'
      << "dropped_records=" << dropped_records << '\n'
      << "malformed_lines=" << malformed_lines << '\n'
      << "late_samples=" << late_samples << '\n'
      << "duplicate_samples=" << duplicate_samples << '\n'
      << "unknown_tags=" << unknown_tags << '\n'
      << "commands_sent=" << commands_sent << '\n'
      << "suppressed=" << suppressed << '\n'
      << "unmapped=" << unmapped << '\n'
      << "outbox_dropped=" << outbox_dropped << '\n'
      << "wall_clock_s=" << wall_clock_s << '\n';
  return out.str();
}

Engine::Engine(PredictorConfig config, Roster roster) : config_(config), roster_(std::move(roster))
{
  validate_config(config_);
  sync_tracks();
}

void Engine::sync_tracks()
{
  const auto& players = roster_.players();
  for (std::size_t i = 0; i < players.size(); ++i)
  {
    if (i < tracks_.size())
    {
      // Inference can attach a second tag to a known player.
      if (tracks_[i].player().tag_ids.size() != players[i].tag_ids.size())
      {
        TrackState rebuilt(players[i]);
        tracks_[i] = std::move(rebuilt);
      }
      continue;
    }
    tracks_.emplace_back(players[i]);
  }
}

FrameOutput Engine::process(const FrameBatch& batch)
{
  FrameOutput out;
  if (last_frame_ && batch.frame <= *last_frame_)
  {
    ++out_of_order_;
    return out;
  }
  for (const auto& sample : batch.samples)
  {
    if (!roster_.resolve_tag(sample.tag_id))
      ++unknown_tags_;
  }
  sync_tracks();

  if (last_frame_)
  {
    for (std::int64_t frame = *last_frame_ + 1; frame < batch.frame; ++frame)
      step(frame, batch.t - static_cast<double>(batch.frame - frame) * config_.sample_dt, nullptr, out);
  }
  step(batch.frame, batch.t, &batch, out);
  last_frame_ = batch.frame;
  return out;
}

void Engine::step(std::int64_t frame, double t, const FrameBatch* batch, FrameOutput& out)
{
  std::vector<PlayerState> states;
  states.reserve(tracks_.size());
  for (auto& track : tracks_)
  {
    if (batch)
      states.push_back(advance_track(track, *batch, config_));
    else
      states.push_back(track.advance(frame, t, {}, std::nullopt, config_));
  }
  auto step = step_frame(pairs_, states, config_);
  out.events.insert(out.events.end(), step.events.begin(), step.events.end());
  out.states = std::move(states);
  ++out.frames;
}

ReplayResult replay_batches(const std::vector<FrameBatch>& batches, Roster roster, const ReplayOptions& opts)
{
  ReplayResult result;
  Engine engine(opts.config, std::move(roster));
  const auto start = Clock::now();
  const double dt = opts.config.sample_dt;

  for (const auto& batch : batches)
  {
    if (opts.speed > 0.0)
    {
      const double offset_s = static_cast<double>(batch.frame - batches.front().frame) * dt / opts.speed;
      std::this_thread::sleep_until(start + std::chrono::duration_cast<Clock::duration>(
                                                std::chrono::duration<double>(offset_s)));
    }
    const auto begin = Clock::now();
    auto out = engine.process(batch);
    result.stats.latency.add(micros_since(begin));
    ++result.stats.frames_processed;
    result.events.insert(result.events.end(), out.events.begin(), out.events.end());
  }
  result.stats.events_predicted = result.events.size();
  result.stats.unknown_tags = engine.unknown_tags();
  result.stats.wall_clock_s = std::chrono::duration<double>(Clock::now() - start).count();

  Roster truth_roster = engine.roster();
  const auto frames = raw_player_states(batches, truth_roster);
  result.actual = detect_actual(frames, GroundTruthConfig::from(opts.config));
  result.reports.push_back(
      NamedReport{"predicted_frame", match_events(result.events, result.actual, opts.config.match_tolerance)});
  return result;
}

namespace
{

std::vector<FrameBatch> assemble_feed(std::istream& in, double dt, RunStats& stats)
{
  FrameAssembler assembler(dt);
  std::vector<FrameBatch> batches;
  std::string line;
  while (std::getline(in, line))
  {
    if (trim(line).empty())
      continue;
    TagSample sample;
    try
    {
      sample = parse_feed_line(line);
    }
    catch (const Error&)
    {
      ++stats.malformed_lines;
      continue;
    }
    if (auto closed = assembler.push(std::move(sample)))
      batches.push_back(std::move(*closed));
  }
  if (auto closed = assembler.close_open())
    batches.push_back(std::move(*closed));
  stats.late_samples = assembler.late_samples();
  stats.duplicate_samples = assembler.duplicate_samples();
  return batches;
}

}  // namespace

ReplayResult replay_file(const std::filesystem::path& path, const ReplayOptions& opts)
{
  validate_config(opts.config);
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::Io, "cannot open " + path.string());

  std::string first;
  std::streampos first_pos = in.tellg();
  while (std::getline(in, first) && trim(first).empty())
    first_pos = in.tellg();
  if (trim(first).empty())
    return replay_batches({}, opts.roster.value_or(Roster::inferring()), opts);
  in.clear();
  in.seekg(first_pos);

  if (trim(first).starts_with('{'))
  {
    RunStats ingest_stats;
    const auto batches = assemble_feed(in, opts.config.sample_dt, ingest_stats);
    auto result = replay_batches(batches, opts.roster.value_or(Roster::inferring()), opts);
    result.stats.malformed_lines = ingest_stats.malformed_lines;
    result.stats.late_samples = ingest_stats.late_samples;
    result.stats.duplicate_samples = ingest_stats.duplicate_samples;
    return result;
  }

  if (looks_like_incident_table(std::string(trim(first))))
  {
    ReplayResult result;
    result.metrics_only = true;
    const auto table = load_incident_table(in);
    result.actual = table.actual;
    for (std::size_t v = 0; v < table.variants.size(); ++v)
    {
      result.reports.push_back(
          NamedReport{table.variants[v], match_events(table.predicted[v], table.actual, opts.config.match_tolerance)});
    }
    return result;
  }

  auto parsed = parse_tracking_csv(in, opts.filter);
  const Roster roster = opts.roster ? *opts.roster : roster_from_records(parsed.records);
  auto batched = records_to_batches(std::move(parsed.records), roster, opts.config.sample_dt, opts.strict);
  auto result = replay_batches(batched.batches, roster, opts);
  result.stats.skipped_rows = parsed.skipped + parsed.out_of_bounds;
  result.stats.dropped_records = batched.dropped;
  return result;
}

LiveResult run_live(const LiveOptions& opts)
{
  validate_config(opts.config);
  LiveResult result;
  const auto start = Clock::now();

  std::unique_ptr<ByteSink> owned_sink;
  ByteSink* sink = opts.sink;
  if (!sink)
  {
    owned_sink = open_sink(parse_endpoint(opts.sink_uri), opts.retry);
    sink = owned_sink.get();
  }

  std::optional<Endpoint> feed;
  UniqueFd feed_fd;
  if (!opts.feed_fd)
  {
    feed = parse_endpoint(opts.feed_uri);
    feed_fd = open_source(*feed, opts.retry);
  }

  BoundedQueue<TagSample> samples(opts.queue_capacity);
  std::atomic<std::size_t> malformed{0};
  std::exception_ptr reader_error;

  std::thread reader([&] {
    try
    {
      int fd = opts.feed_fd ? *opts.feed_fd : feed_fd.get();
      LineReader lines(fd);
      for (;;)
      {
        std::optional<std::string> line;
        try
        {
          line = lines.next_line();
        }
        catch (const Error&)
        {
          if (!feed || feed->kind != Endpoint::Kind::Tcp)
            throw;
          // Dropped connection: reconnect and resume with a fresh buffer.
          feed_fd = open_source(*feed, opts.retry);
          fd = feed_fd.get();
          lines = LineReader(fd);
          continue;
        }
        if (!line)
          break;
        if (trim(*line).empty())
          continue;
        try
        {
          if (!samples.push(parse_feed_line(*line)))
            break;
        }
        catch (const Error&)
        {
          ++malformed;
        }
      }
    }
    catch (...)
    {
      reader_error = std::current_exception();
    }
    samples.close();
  });

  Roster roster = opts.roster.value_or(Roster::inferring());
  Engine engine(opts.config, roster);
  // The dispatcher reads pager ids from the engine's roster, which grows as tags are inferred.
  Dispatcher dispatcher(engine.roster(), opts.config.refractory_s, opts.config.vibration_ms, opts.config.page_both);
  Outbox outbox(*sink, opts.outbox_capacity);
  FrameAssembler assembler(opts.config.sample_dt);

  const auto frame_timeout = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(1.5 * opts.config.sample_dt));
  Clock::time_point opened_at{};

  const auto handle = [&](const FrameBatch& batch) {
    const auto closed_at = Clock::now();
    auto out = engine.process(batch);
    auto commands = dispatcher.dispatch(out.events);
    for (const auto& command : commands)
      outbox.post(encode_command(command));
    result.stats.latency.add(micros_since(closed_at));
    ++result.stats.frames_processed;
    result.events.insert(result.events.end(), out.events.begin(), out.events.end());
    result.commands.insert(result.commands.end(), commands.begin(), commands.end());
  };

  for (;;)
  {
    std::optional<Clock::time_point> deadline;
    if (assembler.has_open())
      deadline = opened_at + frame_timeout;
    TagSample sample;
    const auto status = samples.pop(sample, deadline);
    if (status == BoundedQueue<TagSample>::Status::Closed)
      break;
    if (status == BoundedQueue<TagSample>::Status::Timeout)
    {
      if (auto batch = assembler.close_open())
        handle(*batch);
      continue;
    }
    const bool had_open = assembler.has_open();
    auto closed = assembler.push(std::move(sample));
    if (closed)
      handle(*closed);
    if (assembler.has_open() && (!had_open || closed))
      opened_at = Clock::now();
  }
  if (auto batch = assembler.close_open())
    handle(*batch);

  reader.join();
  outbox.close();

  result.stats.events_predicted = result.events.size();
  result.stats.malformed_lines = malformed.load();
  result.stats.late_samples = assembler.late_samples();
  result.stats.duplicate_samples = assembler.duplicate_samples();
  result.stats.unknown_tags = engine.unknown_tags();
  result.stats.commands_sent = outbox.written();
  result.stats.suppressed = dispatcher.stats().suppressed;
  result.stats.unmapped = dispatcher.stats().unmapped;
  result.stats.outbox_dropped = outbox.dropped();
  result.stats.wall_clock_s = std::chrono::duration<double>(Clock::now() - start).count();

  if (reader_error)
    std::rethrow_exception(reader_error);
  return result;
}

}  // namespace hitalert
