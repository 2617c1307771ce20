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

#include <hitalert/tracking.hpp>

#include <algorithm>

namespace hitalert
{

namespace
{

constexpr double min_axis_separation = 1e-6;  // yd
constexpr double orientation_speed_gate = 0.5;  // yd/s
constexpr double min_anchor_spacing = 1e-9;  // s

}  // namespace

bool TagHistory::push(const TagSample& sample)
{
  if (size_ > 0 && !(sample.t > ring_[0].t))
    return false;
  std::shift_right(ring_.begin(), ring_.end(), 1);
  ring_[0] = sample;
  size_ = std::min(size_ + 1, capacity);
  return true;
}

SmoothedPoint smooth_history(const TagHistory& history, const std::array<double, 3>& weights)
{
  const auto samples = history.samples();
  if (samples.empty())
    throw Error(Errc::EmptyHistory, "tag " + history.tag_id() + " has no samples");

  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    total += weights[i];
  if (!(total > 0.0))
    return {samples[0].pos, samples[0].t};

  Vec2 pos;
  double t = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
  {
    const double w = weights[i] / total;
    pos = pos + samples[i].pos * w;
    t += samples[i].t * w;
  }
  return {pos, t};
}

Fusion fuse_player(std::span<const Vec2> tag_positions)
{
  if (tag_positions.empty())
    throw Error(Errc::NoTags, "no tag positions to fuse");
  if (tag_positions.size() == 1)
    return {tag_positions[0], std::nullopt};

  const Vec2 a = tag_positions[0];
  const Vec2 b = tag_positions[1];
  Fusion fusion{Vec2{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0}, std::nullopt};
  const Vec2 span = b - a;
  const double separation = span.norm();
  if (separation > min_axis_separation)
    fusion.shoulder_axis = span / separation;
  return fusion;
}

Vec2 estimate_velocity(const PlayerState& prev, Vec2 pos_now, double dt)
{
  if (!(dt > 0.0))
    throw Error(Errc::ZeroDt, "velocity needs a positive time step");
  const double elapsed = dt * static_cast<double>(prev.staleness + 1);
  return (pos_now - prev.pos) / elapsed;
}

TrackState::TrackState(PlayerId player) : player_(std::move(player))
{
  for (const auto& tag : player_.tag_ids)
    tags_.emplace(tag, TagTrack{TagHistory(tag), std::nullopt});
}

std::optional<SmoothedPoint> TrackState::smooth_tags_then_fuse(std::span<const TagSample> fresh,
                                                               const PredictorConfig& config,
                                                               std::optional<Vec2>& axis)
{
  std::vector<Vec2> points;
  std::vector<TagTrack*> tracks;
  double t = 0.0;
  for (const auto& sample : fresh)
  {
    auto& track = tags_.find(sample.tag_id)->second;
    const auto smoothed = smooth_history(track.history, config.smoothing_weights);
    points.push_back(smoothed.pos);
    tracks.push_back(&track);
    t += smoothed.t;
  }
  t /= static_cast<double>(points.size());

  if (points.size() == 2)
  {
    const Fusion fusion = fuse_player(points);
    axis = fusion.shoulder_axis;
    // Offsets come from the raw pair: the smoothed points may sit at
    // different effective times and would fold motion into the offset.
    const Vec2 raw_centre = (fresh[0].pos + fresh[1].pos) / 2.0;
    tracks[0]->offset = fresh[0].pos - raw_centre;
    tracks[1]->offset = fresh[1].pos - raw_centre;
    return SmoothedPoint{fusion.pos, t};
  }
  // A lone tag sits off the player's centre; remove its last known offset.
  const Vec2 centre = points[0] - tracks[0]->offset.value_or(Vec2{});
  return SmoothedPoint{fuse_player(std::span(&centre, 1)).pos, t};
}

std::optional<SmoothedPoint> TrackState::fuse_then_smooth(std::span<const TagSample> fresh,
                                                          const PredictorConfig& config,
                                                          std::optional<Vec2>& axis)
{
  TagSample fused{"fused", 0.0, {}, std::nullopt};
  if (fresh.size() == 2)
  {
    const std::array<Vec2, 2> points{fresh[0].pos, fresh[1].pos};
    const Fusion fusion = fuse_player(points);
    axis = fusion.shoulder_axis;
    tags_.find(fresh[0].tag_id)->second.offset = points[0] - fusion.pos;
    tags_.find(fresh[1].tag_id)->second.offset = points[1] - fusion.pos;
    fused.pos = fusion.pos;
    fused.t = (fresh[0].t + fresh[1].t) / 2.0;
  }
  else
  {
    const auto& track = tags_.find(fresh[0].tag_id)->second;
    fused.pos = fresh[0].pos - track.offset.value_or(Vec2{});
    fused.t = fresh[0].t;
  }
  if (!fused_history_.push(fused))
    return std::nullopt;
  return smooth_history(fused_history_, config.smoothing_weights);
}

PlayerState TrackState::advance(std::int64_t frame, double t, std::span<const TagSample> samples,
                                std::optional<Vec2> given_velocity, const PredictorConfig& config)
{
  // Fresh samples, ordered as the player's tags are listed.
  std::vector<TagSample> fresh;
  for (const auto& tag : player_.tag_ids)
  {
    auto& track = tags_.find(tag)->second;
    for (const auto& sample : samples)
    {
      if (sample.tag_id == tag && track.history.push(sample))
      {
        fresh.push_back(sample);
        break;
      }
    }
  }

  std::optional<SmoothedPoint> smoothed;
  std::optional<Vec2> axis;
  if (!fresh.empty())
  {
    smoothed = config.smoothing_order == SmoothingOrder::TagThenFuse
                   ? smooth_tags_then_fuse(fresh, config, axis)
                   : fuse_then_smooth(fresh, config, axis);
  }

  if (!smoothed)
  {
    PlayerState held = last_.value_or(PlayerState{player_.id, frame, t, {}, {}, std::nullopt, never_seen});
    held.frame = frame;
    held.t = t;
    if (held.staleness != never_seen)
      ++held.staleness;
    last_ = held;
    return held;
  }

  Vec2 velocity;
  if (config.estimator == Estimator::GivenVelocity && given_velocity)
    velocity = *given_velocity;
  else if (anchor_ && smoothed->t - anchor_->t > min_anchor_spacing)
  {
    PlayerState previous;
    previous.pos = anchor_->pos;
    velocity = estimate_velocity(previous, smoothed->pos, smoothed->t - anchor_->t);
  }
  else if (last_)
    velocity = last_->vel;
  anchor_ = smoothed;

  PlayerState state;
  state.player = player_.id;
  state.frame = frame;
  state.t = t;
  // The weighted mean trails the newest sample; carry it forward to the frame time.
  state.pos = smoothed->pos + velocity * (t - smoothed->t);
  state.vel = velocity;
  state.staleness = 0;
  if (velocity.norm() > orientation_speed_gate)
    state.orientation = heading_of(velocity);
  else if (axis)
    state.orientation = heading_of(Vec2{-axis->y, axis->x});
  else if (last_)
    state.orientation = last_->orientation;

  last_ = state;
  return state;
}

PlayerState advance_track(TrackState& track, const FrameBatch& batch, const PredictorConfig& config)
{
  std::optional<Vec2> given;
  if (const auto it = batch.given_velocity.find(track.player().id); it != batch.given_velocity.end())
    given = it->second;
  return track.advance(batch.frame, batch.t, batch.samples, given, config);
}

}  // namespace hitalert
