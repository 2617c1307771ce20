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

#ifndef HITALERT_TRACKING_HPP
#define HITALERT_TRACKING_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <hitalert/core.hpp>
#include <hitalert/ingest.hpp>

namespace hitalert
{

/// The last three accepted samples of one tag, newest first.
class TagHistory
{
public:
  static constexpr std::size_t capacity = 3;

  TagHistory() = default;
  explicit TagHistory(std::string tag_id) : tag_id_(std::move(tag_id)) {}

  /// Rejects samples that are not strictly newer than the newest one held.
  bool push(const TagSample& sample);

  const std::string& tag_id() const noexcept { return tag_id_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::span<const TagSample> samples() const noexcept { return {ring_.data(), size_}; }

private:
  std::string tag_id_;
  std::array<TagSample, capacity> ring_{};
  std::size_t size_ = 0;
};

/// Weighted mean of a history together with the equally weighted timestamp.
/// For samples on a straight line, `pos` is the line's point at time `t`.
struct SmoothedPoint
{
  Vec2 pos;
  double t = 0.0;
};

/// Weights apply newest first and are renormalized over the samples present.
/// Throws EmptyHistory.
SmoothedPoint smooth_history(const TagHistory& history, const std::array<double, 3>& weights);

inline Vec2 smooth_tag(const TagHistory& history, const std::array<double, 3>& weights)
{
  return smooth_history(history, weights).pos;
}

struct Fusion
{
  Vec2 pos;
  std::optional<Vec2> shoulder_axis;  // unit vector from first to second tag
};

/// Midpoint of one or two tag positions. Throws NoTags.
Fusion fuse_player(std::span<const Vec2> tag_positions);

/// Finite difference from prev.pos; a stale prev stretches dt over the missed frames.
/// Throws ZeroDt.
Vec2 estimate_velocity(const PlayerState& prev, Vec2 pos_now, double dt);

inline Vec2 extrapolate(const PlayerState& state, double dt)
{
  return state.pos + state.vel * dt;
}

/// Staleness reported for a player that has never produced a sample.
inline constexpr int never_seen = std::numeric_limits<int>::max();

/// Per-player estimator state.
class TrackState
{
public:
  explicit TrackState(PlayerId player);

  const PlayerId& player() const noexcept { return player_; }
  const std::optional<PlayerState>& last() const noexcept { return last_; }

  /// Consumes this player's samples for one frame. `samples` may contain
  /// other players' tags; they are ignored.
  PlayerState advance(std::int64_t frame, double t, std::span<const TagSample> samples,
                      std::optional<Vec2> given_velocity, const PredictorConfig& config);

private:
  struct TagTrack
  {
    TagHistory history;
    std::optional<Vec2> offset;  // from the player centre, learnt while both tags report
  };

  std::optional<SmoothedPoint> smooth_tags_then_fuse(std::span<const TagSample> fresh,
                                                     const PredictorConfig& config,
                                                     std::optional<Vec2>& axis);
  std::optional<SmoothedPoint> fuse_then_smooth(std::span<const TagSample> fresh,
                                                const PredictorConfig& config, std::optional<Vec2>& axis);

  PlayerId player_;
  std::map<std::string, TagTrack, std::less<>> tags_;
  TagHistory fused_history_{"fused"};
  std::optional<SmoothedPoint> anchor_;
  std::optional<PlayerState> last_;
};

/// Advances one player by one frame from the samples of `batch`.
PlayerState advance_track(TrackState& track, const FrameBatch& batch, const PredictorConfig& config);

}  // namespace hitalert

#endif  // HITALERT_TRACKING_HPP
