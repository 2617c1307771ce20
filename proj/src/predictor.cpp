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

#include <hitalert/predictor.hpp>

#include <algorithm>

#include <hitalert/tracking.hpp>

namespace hitalert
{

double pair_distance_now(const PlayerState& a, const PlayerState& b)
{
  return distance(a.pos, b.pos);
}

double pair_distance_next(const PlayerState& a, const PlayerState& b, double dt)
{
  return distance(extrapolate(a, dt), extrapolate(b, dt));
}

bool try_release(PairState& state, double measured, std::int64_t frame, const EpisodeRule& rule)
{
  if (state.phase != PairPhase::Alerted)
    return false;
  if (measured > rule.threshold * rule.hysteresis_factor)
    ++state.frames_above_release;
  else
    state.frames_above_release = 0;

  if (state.frames_above_release >= rule.release_frames && frame - state.fired_frame >= rule.min_event_gap)
  {
    state.phase = PairPhase::Clear;
    state.frames_above_release = 0;
    return true;
  }
  return false;
}

PairStep step_pair(const PairState& state, const PlayerState& a, const PlayerState& b,
                   const PredictorConfig& config)
{
  if (a.staleness > config.max_staleness || b.staleness > config.max_staleness)
    throw Error(Errc::StalePlayer, "stale player in pair " + state.pair.first() + "/" + state.pair.second());

  PairStep step{state, std::nullopt};
  const double now = pair_distance_now(a, b);
  const double next = pair_distance_next(a, b, config.sample_dt);
  step.state.last_measured_distance = now;

  if (step.state.phase == PairPhase::Alerted)
  {
    try_release(step.state, now, a.frame, EpisodeRule::from(config));
    return step;
  }

  if (next < config.threshold && next < now)
  {
    step.state.phase = PairPhase::Alerted;
    step.state.fired_frame = a.frame;
    step.state.frames_above_release = 0;
    step.event = CollisionEvent{state.pair, a.frame, a.t, EventKind::Predicted, next};
  }
  return step;
}

FrameStep step_frame(PairTable& pairs, std::span<const PlayerState> players, const PredictorConfig& config)
{
  std::vector<const PlayerState*> eligible;
  eligible.reserve(players.size());
  for (const auto& player : players)
  {
    if (player.staleness <= config.max_staleness)
      eligible.push_back(&player);
  }

  FrameStep result;
  for (std::size_t i = 0; i < eligible.size(); ++i)
  {
    for (std::size_t j = i + 1; j < eligible.size(); ++j)
    {
      const PlayerState* a = eligible[i];
      const PlayerState* b = eligible[j];
      PlayerPair pair(a->player, b->player);
      if (pair.first() != a->player)
        std::swap(a, b);

      auto it = pairs.find(pair);
      if (it == pairs.end())
        it = pairs.emplace(pair, PairState{pair}).first;

      auto step = step_pair(it->second, *a, *b, config);
      it->second = std::move(step.state);
      if (step.event)
        result.events.push_back(std::move(*step.event));
      ++result.pairs_evaluated;
    }
  }
  std::sort(result.events.begin(), result.events.end(),
            [](const CollisionEvent& x, const CollisionEvent& y) { return x.pair < y.pair; });
  return result;
}

}  // namespace hitalert
