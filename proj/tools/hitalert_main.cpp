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

// hitalert command-line entry point.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <hitalert/config_file.hpp>
#include <hitalert/evaluation.hpp>
#include <hitalert/harness.hpp>
#include <hitalert/synth.hpp>

namespace
{

constexpr int exit_config = 2;
constexpr int exit_io = 3;

hitalert::PredictorConfig config_from(const std::string& path)
{
  if (path.empty())
    return hitalert::PredictorConfig::pilot();
  return hitalert::load_config_file(path);
}

double parse_speed(const std::string& text)
{
  if (text == "max")
    return 0.0;
  if (text.size() > 1 && text.back() == 'x')
  {
    const double k = hitalert::parse_number(std::string_view(text).substr(0, text.size() - 1), "--speed");
    if (k > 0.0)
      return k;
  }
  throw hitalert::Error(hitalert::Errc::BadConfig, "--speed expects max or <k>x, e.g. 1x");
}

void write_text(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-")
  {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw hitalert::Error(hitalert::Errc::Io, "cannot write " + path);
}

std::vector<hitalert::CollisionEvent> read_events(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw hitalert::Error(hitalert::Errc::Io, "cannot open " + path);
  return hitalert::read_event_log(in);
}

}  // namespace

int main(int argc, char** argv)
{
  std::signal(SIGPIPE, SIG_IGN);

  CLI::App app{"Collision prediction for player-tracking streams"};
  app.require_subcommand(1);

  std::string config_path;
  std::string roster_path;

  auto* replay = app.add_subcommand("replay", "Replay recorded tracking data and evaluate predictions");
  std::string replay_data;
  std::string replay_speed = "max";
  std::string replay_report;
  std::string replay_events = "-";
  std::string game_id;
  std::string play_id;
  bool strict = false;
  replay->add_option("data", replay_data, "Tracking CSV, feed NDJSON or incident table")->required();
  replay->add_option("--config", config_path, "Config file");
  replay->add_option("--roster", roster_path, "Roster CSV");
  replay->add_option("--speed", replay_speed, "max, or a real-time multiple such as 1x");
  replay->add_option("--report", replay_report, "Write the evaluation summary here");
  replay->add_option("--events", replay_events, "Write the event log here (default stdout)");
  replay->add_option("--game", game_id, "Only this gameId");
  replay->add_option("--play", play_id, "Only this playId");
  replay->add_flag("--strict", strict, "Fail on players missing from the roster");

  auto* live = app.add_subcommand("live", "Process a live tag feed and page players");
  std::string feed_uri = "-";
  std::string sink_uri = "-";
  std::string live_events;
  int retries = 5;
  live->add_option("--feed", feed_uri, "Feed URI: -, file:PATH, tcp:HOST:PORT")->required();
  live->add_option("--sink", sink_uri, "Pager URI: -, file:PATH, tcp:HOST:PORT, serial:/dev/...")->required();
  live->add_option("--config", config_path, "Config file");
  live->add_option("--roster", roster_path, "Roster CSV");
  live->add_option("--events", live_events, "Write the event log here");
  live->add_option("--retries", retries, "Connection attempts before giving up");

  auto* synth = app.add_subcommand("synth", "Generate tracking data from a scenario");
  std::string spec_path;
  std::string synth_out;
  std::string synth_format = "ndjson";
  synth->add_option("spec", spec_path, "Scenario file")->required();
  synth->add_option("-o,--output", synth_out, "Output path")->required();
  synth->add_option("--format", synth_format, "csv or ndjson")->check(CLI::IsMember({"csv", "ndjson"}));

  auto* evaluate = app.add_subcommand("evaluate", "Match predicted events against actual ones");
  std::string predicted_path;
  std::string actual_path;
  std::string fixture_path;
  std::optional<int> tolerance;
  evaluate->add_option("--predicted", predicted_path, "Predicted event log");
  evaluate->add_option("--actual", actual_path, "Actual event log");
  evaluate->add_option("--fixture", fixture_path, "Incident table with one column per estimator");
  evaluate->add_option("--tolerance", tolerance, "Matching tolerance in frames");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try
  {
    if (*replay)
    {
      hitalert::ReplayOptions opts;
      opts.config = config_from(config_path);
      opts.speed = parse_speed(replay_speed);
      opts.strict = strict;
      if (!roster_path.empty())
        opts.roster = hitalert::load_roster_file(roster_path);
      if (!game_id.empty() || !play_id.empty())
        opts.filter = hitalert::PlayFilter{game_id, play_id};

      const auto result = hitalert::replay_file(replay_data, opts);
      const auto summary = hitalert::summarize(result.reports, opts.config.match_tolerance);
      if (result.metrics_only)
      {
        write_text(replay_report, summary);
        return 0;
      }
      write_text(replay_events, hitalert::format_event_log(result.events));
      if (!replay_report.empty())
        write_text(replay_report, summary);
      std::cerr << result.stats.to_text();
      return 0;
    }

    if (*live)
    {
      hitalert::LiveOptions opts;
      opts.feed_uri = feed_uri;
      opts.sink_uri = sink_uri;
      opts.config = config_from(config_path);
      opts.retry.max_attempts = retries;
      if (!roster_path.empty())
        opts.roster = hitalert::load_roster_file(roster_path);
      const auto result = hitalert::run_live(opts);
      if (!live_events.empty())
        write_text(live_events, hitalert::format_event_log(result.events));
      std::cerr << result.stats.to_text();
      return 0;
    }

    if (*synth)
    {
      const auto scenario = hitalert::load_scenario_file(spec_path);
      const auto stream = hitalert::synthesize(scenario);
      std::ostringstream out;
      if (synth_format == "csv")
        hitalert::write_tracking_csv(out, stream.records);
      else
        hitalert::write_ndjson(out, stream);
      write_text(synth_out, out.str());
      return 0;
    }

    if (*evaluate)
    {
      const auto config = config_from(config_path);
      const int tol = tolerance.value_or(config.match_tolerance);
      if (tol < 0)
        throw hitalert::Error(hitalert::Errc::NegativeTolerance, "--tolerance must be >= 0");

      std::vector<hitalert::NamedReport> reports;
      if (!fixture_path.empty())
      {
        std::ifstream in(fixture_path);
        if (!in)
          throw hitalert::Error(hitalert::Errc::Io, "cannot open " + fixture_path);
        const auto table = hitalert::load_incident_table(in);
        for (std::size_t v = 0; v < table.variants.size(); ++v)
          reports.push_back({table.variants[v], hitalert::match_events(table.predicted[v], table.actual, tol)});
      }
      else
      {
        if (predicted_path.empty() || actual_path.empty())
          throw hitalert::Error(hitalert::Errc::BadConfig, "evaluate needs --fixture or both --predicted and --actual");
        reports.push_back(
            {"predicted_frame", hitalert::match_events(read_events(predicted_path), read_events(actual_path), tol)});
      }
      std::cout << hitalert::summarize(reports, tol);
      return 0;
    }
  }
  catch (const hitalert::Error& e)
  {
    std::cerr << "hitalert: " << e.what() << '\n';
    if (e.is_config_error())
      return exit_config;
    if (e.code() == hitalert::Errc::Io || e.code() == hitalert::Errc::ConnectionLost ||
        e.code() == hitalert::Errc::EmptyInput || e.code() == hitalert::Errc::MissingHeader)
      return exit_io;
    return 1;
  }
  catch (const std::exception& e)
  {
    std::cerr << "hitalert: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
