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

#ifndef HITALERT_EVALUATION_HPP
#define HITALERT_EVALUATION_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <hitalert/core.hpp>
#include <hitalert/ingest.hpp>
#include <hitalert/predictor.hpp>

namespace hitalert
{

struct GroundTruthConfig
{
  double threshold = feet_to_yards(2.0);
  double hysteresis_factor = 1.5;
  int release_frames = 2;
  int min_event_gap = 5;

  static GroundTruthConfig from(const PredictorConfig& config)
  {
    return {config.threshold, config.hysteresis_factor, config.release_frames, config.min_event_gap};
  }
};

using FrameStates = std::vector<std::vector<PlayerState>>;

/// Unsmoothed per-frame positions: the mean of whatever tag samples each
/// player has in a batch. Players without samples are absent from that frame.
FrameStates raw_player_states(const std::vector<FrameBatch>& batches, Roster& roster);

/// One Actual event at the first frame of each episode where the measured
/// distance drops below the threshold.
std::vector<CollisionEvent> detect_actual(const FrameStates& frames, const GroundTruthConfig& config);

/// Greedy same-pair matching within +/- tolerance frames; closest frames
/// first, ties going to the earlier event.
MatchReport match_events(const std::vector<CollisionEvent>& predicted, const std::vector<CollisionEvent>& actual,
                         int tolerance);

struct NamedReport
{
  std::string name;  // column header, e.g. "constant_speed_frame"
  MatchReport report;
};

/// Incident table (one row per actual incident or unmatched prediction) followed
/// by `# <name>: TP=.. FP=.. FN=.. FAR=..` lines. Empty reports give the header only.
std::string summarize(const std::vector<NamedReport>& reports, int tolerance);
inline std::string summarize(const MatchReport& report)
{
  return summarize({NamedReport{"predicted_frame", report}}, 0);
}

struct IncidentTable
{
  std::vector<std::string> variants;  // predicted column names
  std::vector<CollisionEvent> actual;
  std::vector<std::vector<CollisionEvent>> predicted;  // one list per variant
};

/// Reads `index,player_a,player_b,actual_frame,<variant>_frame...` with blank
/// cells for missing events.
IncidentTable load_incident_table(std::istream& in);

bool looks_like_incident_table(const std::string& header_line);

/// Event log CSV: `frame,t,kind,player_a,player_b,min_predicted_distance`.
void write_event_log(std::ostream& out, const std::vector<CollisionEvent>& events);
std::string format_event_log(const std::vector<CollisionEvent>& events);
std::vector<CollisionEvent> read_event_log(std::istream& in);

}  // namespace hitalert

#endif  // HITALERT_EVALUATION_HPP
