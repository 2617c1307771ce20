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

// Domain types shared by every stage of the pipeline. All distances are in
// yards; conversions from feet happen once, where data or config enters.

#ifndef HITALERT_CORE_HPP
#define HITALERT_CORE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <hitalert/error.hpp>

namespace hitalert
{

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

constexpr double feet_to_yards(double feet) { return feet / 3.0; }

/// Angle of v in the field frame, normalized to [0, 2*pi).
double heading_of(Vec2 v);

struct TagSample
{
  std::string tag_id;
  double t = 0.0;  // seconds
  Vec2 pos;        // yards
  std::optional<double> quality;
};

/// A player and the one or two tags it carries.
struct PlayerId
{
  std::string id;
  std::vector<std::string> tag_ids;
};

struct PlayerState
{
  std::string player;
  std::int64_t frame = 0;
  double t = 0.0;
  Vec2 pos;
  Vec2 vel;                          // yards per second
  std::optional<double> orientation; // radians, [0, 2*pi)
  int staleness = 0;
};

enum class Estimator
{
  ConstantSpeed,
  GivenVelocity,
};

enum class SmoothingOrder
{
  TagThenFuse,
  FuseThenTag,
};

struct PredictorConfig
{
  double threshold = feet_to_yards(2.0);
  std::array<double, 3> smoothing_weights{0.5, 0.3, 0.2};  // newest first
  double sample_dt = 0.1;
  Estimator estimator = Estimator::ConstantSpeed;
  int max_staleness = 3;
  double hysteresis_factor = 1.5;
  int release_frames = 2;
  int min_event_gap = 5;
  int match_tolerance = 5;
  SmoothingOrder smoothing_order = SmoothingOrder::TagThenFuse;

  // alert dispatch
  double refractory_s = 1.0;
  int vibration_ms = 500;
  bool page_both = true;

  /// Pilot-test profile: 2 ft threshold.
  static PredictorConfig pilot();
  /// In-game profile: 3 ft (1 yd) threshold.
  static PredictorConfig game();
};

/// Throws Error naming the first violated invariant.
void validate_config(const PredictorConfig& config);

/// Unordered pair of player ids, stored with first < second.
class PlayerPair
{
public:
  PlayerPair() = default;
  PlayerPair(std::string a, std::string b);

  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }
  bool contains(const std::string& player) const noexcept
  {
    return first_ == player || second_ == player;
  }

  friend auto operator<=>(const PlayerPair&, const PlayerPair&) = default;

private:
  std::string first_;
  std::string second_;
};

enum class EventKind
{
  Predicted,
  Actual,
};

struct CollisionEvent
{
  PlayerPair pair;
  std::int64_t frame = 0;
  double t = 0.0;
  EventKind kind = EventKind::Predicted;
  std::optional<double> min_predicted_distance;  // Predicted only
};

struct EventMatch
{
  PlayerPair pair;
  std::int64_t predicted_frame = 0;
  std::int64_t actual_frame = 0;

  std::int64_t timing_error() const noexcept { return predicted_frame - actual_frame; }
};

struct MatchReport
{
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::vector<EventMatch> matches;
  std::vector<CollisionEvent> unmatched_predicted;
  std::vector<CollisionEvent> unmatched_actual;

  /// FP / (TP + FP), or 0 when nothing was predicted.
  double false_alarm_rate() const noexcept;
  std::vector<std::int64_t> timing_errors() const;
};

}  // namespace hitalert

#endif  // HITALERT_CORE_HPP
