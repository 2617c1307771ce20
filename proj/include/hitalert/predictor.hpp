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

#ifndef HITALERT_PREDICTOR_HPP
#define HITALERT_PREDICTOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <hitalert/core.hpp>

namespace hitalert
{

double pair_distance_now(const PlayerState& a, const PlayerState& b);

/// Distance after extrapolating both players by dt.
double pair_distance_next(const PlayerState& a, const PlayerState& b, double dt);

enum class PairPhase
{
  Clear,
  Alerted,
};

struct PairState
{
  PlayerPair pair;
  PairPhase phase = PairPhase::Clear;
  double last_measured_distance = 0.0;
  int frames_above_release = 0;
  std::int64_t fired_frame = 0;
};

/// When an open episode may close: the distance has to stay above
/// threshold * hysteresis_factor for release_frames consecutive frames, and
/// min_event_gap frames must have passed since the episode opened.
struct EpisodeRule
{
  double threshold = 0.0;
  double hysteresis_factor = 1.5;
  int release_frames = 2;
  int min_event_gap = 5;

  static EpisodeRule from(const PredictorConfig& config)
  {
    return {config.threshold, config.hysteresis_factor, config.release_frames, config.min_event_gap};
  }
};

/// Feeds the measured distance of an Alerted pair into the release counter.
/// Returns true and resets the phase to Clear when the episode closes.
bool try_release(PairState& state, double measured, std::int64_t frame, const EpisodeRule& rule);

struct PairStep
{
  PairState state;
  std::optional<CollisionEvent> event;
};

/// One frame of the per-pair state machine. Fires when the next-step
/// distance is under the threshold and strictly below the current distance.
/// Throws StalePlayer when either player exceeds max_staleness.
PairStep step_pair(const PairState& state, const PlayerState& a, const PlayerState& b,
                   const PredictorConfig& config);

using PairTable = std::map<PlayerPair, PairState>;

struct FrameStep
{
  std::vector<CollisionEvent> events;  // sorted by pair
  std::size_t pairs_evaluated = 0;
};

/// Runs step_pair over every pair of non-stale players in `players`.
FrameStep step_frame(PairTable& pairs, std::span<const PlayerState> players, const PredictorConfig& config);

}  // namespace hitalert

#endif  // HITALERT_PREDICTOR_HPP
