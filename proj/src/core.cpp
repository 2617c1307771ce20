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

#include <hitalert/core.hpp>

#include <numbers>

namespace hitalert
{

double heading_of(Vec2 v)
{
  double angle = std::atan2(v.y, v.x);
  if (angle < 0.0)
    angle += 2.0 * std::numbers::pi;
  // atan2 can round up to exactly 2*pi for tiny negative angles.
  if (angle >= 2.0 * std::numbers::pi)
    angle = 0.0;
  return angle;
}

PredictorConfig PredictorConfig::pilot()
{
  return PredictorConfig{};
}

PredictorConfig PredictorConfig::game()
{
  PredictorConfig config;
  config.threshold = feet_to_yards(3.0);
  return config;
}

void validate_config(const PredictorConfig& config)
{
  if (!(config.threshold > 0.0) || !std::isfinite(config.threshold))
    throw Error(Errc::NonPositiveThreshold, "threshold must be > 0, got " + std::to_string(config.threshold));

  double sum = 0.0;
  for (double w : config.smoothing_weights)
  {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(Errc::WeightsNotNormalized, "smoothing weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(Errc::WeightsNotNormalized, "smoothing weights sum to " + std::to_string(sum) + ", expected 1");
  if (config.smoothing_weights[0] <= 0.0)
    throw Error(Errc::WeightsNotNormalized, "newest-sample weight must be > 0");

  if (!(config.sample_dt > 0.0) || !std::isfinite(config.sample_dt))
    throw Error(Errc::NonPositiveSampleDt, "sample_dt must be > 0");

  if (!(config.hysteresis_factor > 1.0) || !std::isfinite(config.hysteresis_factor))
    throw Error(Errc::BadHysteresis, "hysteresis_factor must be > 1");
  if (config.release_frames < 1)
    throw Error(Errc::BadHysteresis, "release_frames must be >= 1");

  if (config.match_tolerance < 0)
    throw Error(Errc::NegativeTolerance, "match_tolerance must be >= 0");
  if (config.min_event_gap < 0)
    throw Error(Errc::NegativeTolerance, "min_event_gap must be >= 0");
  if (config.max_staleness < 0)
    throw Error(Errc::NegativeTolerance, "max_staleness must be >= 0");

  if (!(config.refractory_s >= 0.0))
    throw Error(Errc::BadConfig, "refractory must be >= 0");
  if (config.vibration_ms < 100 || config.vibration_ms > 5000)
    throw Error(Errc::BadConfig, "vibration_ms must be within [100, 5000]");
}

PlayerPair::PlayerPair(std::string a, std::string b)
{
  if (a == b)
    throw Error(Errc::BadConfig, "pair members must be distinct: " + a);
  if (b < a)
    std::swap(a, b);
  first_ = std::move(a);
  second_ = std::move(b);
}

double MatchReport::false_alarm_rate() const noexcept
{
  const std::size_t predicted = true_positives + false_positives;
  if (predicted == 0)
    return 0.0;
  return static_cast<double>(false_positives) / static_cast<double>(predicted);
}

std::vector<std::int64_t> MatchReport::timing_errors() const
{
  std::vector<std::int64_t> errors;
  errors.reserve(matches.size());
  for (const auto& match : matches)
    errors.push_back(match.timing_error());
  return errors;
}

}  // namespace hitalert
