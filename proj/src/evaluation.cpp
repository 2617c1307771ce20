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

#include <hitalert/evaluation.hpp>

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <hitalert/config_file.hpp>

#include "csv.hpp"

namespace hitalert
{

FrameStates raw_player_states(const std::vector<FrameBatch>& batches, Roster& roster)
{
  FrameStates frames;
  frames.reserve(batches.size());
  for (const auto& batch : batches)
  {
    std::map<std::string, std::pair<Vec2, int>> sums;
    for (const auto& sample : batch.samples)
    {
      const auto player = roster.resolve_tag(sample.tag_id);
      if (!player)
        continue;
      auto& [sum, count] = sums[*player];
      sum = sum + sample.pos;
      ++count;
    }
    std::vector<PlayerState> states;
    states.reserve(sums.size());
    for (const auto& [player, entry] : sums)
    {
      PlayerState state;
      state.player = player;
      state.frame = batch.frame;
      state.t = batch.t;
      state.pos = entry.first / static_cast<double>(entry.second);
      states.push_back(std::move(state));
    }
    frames.push_back(std::move(states));
  }
  return frames;
}

std::vector<CollisionEvent> detect_actual(const FrameStates& frames, const GroundTruthConfig& config)
{
  const EpisodeRule rule{config.threshold, config.hysteresis_factor, config.release_frames, config.min_event_gap};
  PairTable pairs;
  std::vector<CollisionEvent> events;
  for (const auto& players : frames)
  {
    std::vector<CollisionEvent> fired;
    for (std::size_t i = 0; i < players.size(); ++i)
    {
      for (std::size_t j = i + 1; j < players.size(); ++j)
      {
        const auto& a = players[i];
        const auto& b = players[j];
        PlayerPair pair(a.player, b.player);
        auto it = pairs.find(pair);
        if (it == pairs.end())
          it = pairs.emplace(pair, PairState{pair}).first;
        auto& state = it->second;

        const double measured = pair_distance_now(a, b);
        state.last_measured_distance = measured;
        if (state.phase == PairPhase::Alerted)
        {
          try_release(state, measured, a.frame, rule);
          continue;
        }
        if (measured < config.threshold)
        {
          state.phase = PairPhase::Alerted;
          state.fired_frame = a.frame;
          state.frames_above_release = 0;
          fired.push_back(CollisionEvent{pair, a.frame, a.t, EventKind::Actual, std::nullopt});
        }
      }
    }
    std::sort(fired.begin(), fired.end(), [](const auto& x, const auto& y) { return x.pair < y.pair; });
    events.insert(events.end(), fired.begin(), fired.end());
  }
  return events;
}

MatchReport match_events(const std::vector<CollisionEvent>& predicted, const std::vector<CollisionEvent>& actual,
                         int tolerance)
{
  struct Candidate
  {
    std::int64_t gap;
    std::int64_t earlier;
    std::int64_t later;
    std::size_t p;
    std::size_t a;
  };

  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < predicted.size(); ++p)
  {
    for (std::size_t a = 0; a < actual.size(); ++a)
    {
      if (predicted[p].pair != actual[a].pair)
        continue;
      const std::int64_t pf = predicted[p].frame;
      const std::int64_t af = actual[a].frame;
      const std::int64_t gap = pf > af ? pf - af : af - pf;
      if (gap <= tolerance)
        candidates.push_back({gap, std::min(pf, af), std::max(pf, af), p, a});
    }
  }
  // The key is symmetric in predicted/actual, so swapping the lists picks the same edges.
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.gap, x.earlier, x.later) < std::tie(y.gap, y.earlier, y.later);
  });

  std::vector<bool> used_p(predicted.size()), used_a(actual.size());
  MatchReport report;
  for (const auto& c : candidates)
  {
    if (used_p[c.p] || used_a[c.a])
      continue;
    used_p[c.p] = used_a[c.a] = true;
    report.matches.push_back({actual[c.a].pair, predicted[c.p].frame, actual[c.a].frame});
  }
  std::sort(report.matches.begin(), report.matches.end(), [](const EventMatch& x, const EventMatch& y) {
    return std::tie(x.actual_frame, x.pair, x.predicted_frame) < std::tie(y.actual_frame, y.pair, y.predicted_frame);
  });

  for (std::size_t p = 0; p < predicted.size(); ++p)
  {
    if (!used_p[p])
      report.unmatched_predicted.push_back(predicted[p]);
  }
  for (std::size_t a = 0; a < actual.size(); ++a)
  {
    if (!used_a[a])
      report.unmatched_actual.push_back(actual[a]);
  }
  report.true_positives = report.matches.size();
  report.false_positives = report.unmatched_predicted.size();
  report.false_negatives = report.unmatched_actual.size();
  return report;
}

namespace
{

struct Row
{
  PlayerPair pair;
  std::optional<std::int64_t> actual;
  std::vector<std::optional<std::int64_t>> predicted;

  std::int64_t key() const
  {
    if (actual)
      return *actual;
    std::int64_t best = INT64_MAX;
    for (const auto& p : predicted)
    {
      if (p)
        best = std::min(best, *p);
    }
    return best;
  }
};

std::string frame_cell(const std::optional<std::int64_t>& frame)
{
  return frame ? std::to_string(*frame) : std::string();
}

}  // namespace

std::string summarize(const std::vector<NamedReport>& reports, int tolerance)
{
  std::ostringstream out;
  out << "index,player_a,player_b,actual_frame";
  for (const auto& named : reports)
    out << ',' << named.name;
  out << '\n';

  const std::size_t n = reports.size();
  std::vector<Row> rows;
  std::map<std::pair<PlayerPair, std::int64_t>, std::size_t> actual_rows;
  const auto actual_row = [&](const PlayerPair& pair, std::int64_t frame) -> Row& {
    auto [it, inserted] = actual_rows.try_emplace({pair, frame}, rows.size());
    if (inserted)
      rows.push_back(Row{pair, frame, std::vector<std::optional<std::int64_t>>(n)});
    return rows[it->second];
  };

  bool any = false;
  for (std::size_t v = 0; v < n; ++v)
  {
    const auto& report = reports[v].report;
    any = any || report.true_positives + report.false_positives + report.false_negatives > 0;
    for (const auto& match : report.matches)
      actual_row(match.pair, match.actual_frame).predicted[v] = match.predicted_frame;
    for (const auto& miss : report.unmatched_actual)
      actual_row(miss.pair, miss.frame);
  }
  if (!any)
    return out.str();

  // False alarms from different variants share a row when they are the same
  // pair and could both match one incident, i.e. within twice the tolerance.
  const std::size_t first_prediction_row = rows.size();
  for (std::size_t v = 0; v < n; ++v)
  {
    for (const auto& alarm : reports[v].report.unmatched_predicted)
    {
      Row* target = nullptr;
      for (std::size_t r = first_prediction_row; r < rows.size() && !target; ++r)
      {
        auto& row = rows[r];
        if (row.pair != alarm.pair || row.predicted[v])
          continue;
        const auto gap = row.key() > alarm.frame ? row.key() - alarm.frame : alarm.frame - row.key();
        if (gap <= 2 * tolerance)
          target = &row;
      }
      if (!target)
      {
        rows.push_back(Row{alarm.pair, std::nullopt, std::vector<std::optional<std::int64_t>>(n)});
        target = &rows.back();
      }
      target->predicted[v] = alarm.frame;
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    const auto xk = x.key();
    const auto yk = y.key();
    if (xk != yk)
      return xk < yk;
    if (x.actual.has_value() != y.actual.has_value())
      return x.actual.has_value();
    return x.pair < y.pair;
  });

  std::size_t index = 1;
  for (const auto& row : rows)
  {
    out << index++ << ',' << csv::quote(row.pair.first()) << ',' << csv::quote(row.pair.second()) << ','
        << frame_cell(row.actual);
    for (const auto& p : row.predicted)
      out << ',' << frame_cell(p);
    out << '\n';
  }

  for (const auto& named : reports)
  {
    const auto& r = named.report;
    char far[64];
    std::snprintf(far, sizeof(far), "FAR=%.3f (%.1f%%)", r.false_alarm_rate(), 100.0 * r.false_alarm_rate());
    out << "# " << named.name << ": TP=" << r.true_positives << " FP=" << r.false_positives
        << " FN=" << r.false_negatives << ' ' << far << " timing_errors=";
    const auto errors = r.timing_errors();
    for (std::size_t i = 0; i < errors.size(); ++i)
      out << (i ? "," : "") << errors[i];
    out << '\n';
  }
  return out.str();
}

bool looks_like_incident_table(const std::string& header_line)
{
  const auto fields = csv::split(header_line);
  return fields.size() >= 5 && trim(fields[0]) == "index" && trim(fields[1]) == "player_a" &&
         trim(fields[2]) == "player_b" && trim(fields[3]) == "actual_frame";
}

IncidentTable load_incident_table(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::EmptyInput, "incident table is empty");
  if (!looks_like_incident_table(line))
    throw Error(Errc::MissingHeader, "expected index,player_a,player_b,actual_frame,... header");

  IncidentTable table;
  const auto header = csv::split(line);
  for (std::size_t i = 4; i < header.size(); ++i)
    table.variants.emplace_back(trim(header[i]));
  table.predicted.resize(table.variants.size());

  const auto frame_of = [](std::string_view cell) -> std::optional<std::int64_t> {
    cell = trim(cell);
    if (cell.empty())
      return std::nullopt;
    const auto value = csv::to_int(cell);
    if (!value)
      throw Error(Errc::BadConfig, "incident table: bad frame '" + std::string(cell) + "'");
    return *value;
  };

  while (std::getline(in, line))
  {
    if (trim(line).empty())
      continue;
    const auto fields = csv::split(line);
    if (fields.size() < 4)
      throw Error(Errc::BadConfig, "incident table: short row");
    const PlayerPair pair{std::string(trim(fields[1])), std::string(trim(fields[2]))};
    if (const auto frame = frame_of(fields[3]))
      table.actual.push_back(CollisionEvent{pair, *frame, 0.0, EventKind::Actual, std::nullopt});
    for (std::size_t v = 0; v < table.variants.size(); ++v)
    {
      if (4 + v >= fields.size())
        break;
      if (const auto frame = frame_of(fields[4 + v]))
        table.predicted[v].push_back(CollisionEvent{pair, *frame, 0.0, EventKind::Predicted, std::nullopt});
    }
  }

  const auto by_frame = [](const CollisionEvent& x, const CollisionEvent& y) { return x.frame < y.frame; };
  std::stable_sort(table.actual.begin(), table.actual.end(), by_frame);
  for (auto& list : table.predicted)
    std::stable_sort(list.begin(), list.end(), by_frame);
  return table;
}

void write_event_log(std::ostream& out, const std::vector<CollisionEvent>& events)
{
  out << "frame,t,kind,player_a,player_b,min_predicted_distance\n";
  char buf[64];
  for (const auto& e : events)
  {
    std::snprintf(buf, sizeof(buf), "%.3f", e.t);
    out << e.frame << ',' << buf << ',' << (e.kind == EventKind::Predicted ? "predicted" : "actual") << ','
        << csv::quote(e.pair.first()) << ',' << csv::quote(e.pair.second()) << ',';
    if (e.min_predicted_distance)
    {
      std::snprintf(buf, sizeof(buf), "%.6f", *e.min_predicted_distance);
      out << buf;
    }
    out << '\n';
  }
}

std::string format_event_log(const std::vector<CollisionEvent>& events)
{
  std::ostringstream out;
  write_event_log(out, events);
  return out.str();
}

std::vector<CollisionEvent> read_event_log(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::EmptyInput, "event log is empty");
  if (!trim(line).starts_with("frame,t,kind,player_a,player_b"))
    throw Error(Errc::MissingHeader, "expected frame,t,kind,player_a,player_b,min_predicted_distance header");

  std::vector<CollisionEvent> events;
  while (std::getline(in, line))
  {
    if (trim(line).empty())
      continue;
    const auto f = csv::split(line);
    if (f.size() < 5)
      throw Error(Errc::BadConfig, "event log: short row");
    const auto frame = csv::to_int(trim(f[0]));
    const auto t = csv::to_double(trim(f[1]));
    if (!frame || !t)
      throw Error(Errc::BadConfig, "event log: bad frame or time");
    CollisionEvent event{PlayerPair{f[3], f[4]}, *frame, *t,
                         trim(f[2]) == "actual" ? EventKind::Actual : EventKind::Predicted, std::nullopt};
    if (f.size() > 5)
      event.min_predicted_distance = csv::to_double(trim(f[5]));
    events.push_back(std::move(event));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const CollisionEvent& x, const CollisionEvent& y) { return x.frame < y.frame; });
  return events;
}

}  // namespace hitalert
