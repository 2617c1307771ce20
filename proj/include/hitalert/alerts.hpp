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

// Pager commands for the serial paging transmitter. Each command is one
// ASCII line: `PAGE <pager_id> <vibration_ms>\r\n`.

#ifndef HITALERT_ALERTS_HPP
#define HITALERT_ALERTS_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <hitalert/core.hpp>
#include <hitalert/roster.hpp>

namespace hitalert
{

inline constexpr int min_pager_id = 1;
inline constexpr int max_pager_id = 9999;
inline constexpr int min_vibration_ms = 100;
inline constexpr int max_vibration_ms = 5000;

struct PagerCommand
{
  int pager_id = 1;
  int vibration_ms = 500;
  double issued_at = 0.0;  // seconds, on the data clock

  friend bool operator==(const PagerCommand&, const PagerCommand&) = default;
};

/// Throws OutOfRange.
std::string encode_command(const PagerCommand& command);

/// Parses one encoded line, trailing CRLF included; issued_at is left at 0.
/// Throws OutOfRange on anything encode_command would not produce.
PagerCommand decode_command(std::string_view line);

struct DispatchStats
{
  std::size_t commands = 0;
  std::size_t suppressed = 0;
  std::size_t unmapped = 0;
};

/// Turns predicted events into pager commands, suppressing a pager that was
/// paged less than `refractory_s` ago. State persists across calls.
class Dispatcher
{
public:
  Dispatcher(const Roster& roster, double refractory_s = 1.0, int vibration_ms = 500, bool page_both = true);

  /// `now` is the dispatch clock; by default each event's own timestamp.
  std::vector<PagerCommand> dispatch(std::span<const CollisionEvent> events);
  std::vector<PagerCommand> dispatch(std::span<const CollisionEvent> events, double now);

  const DispatchStats& stats() const noexcept { return stats_; }

private:
  void page(const std::string& player, double now, std::vector<PagerCommand>& out);

  const Roster& roster_;
  double refractory_s_;
  int vibration_ms_;
  bool page_both_;
  std::map<int, double> last_issued_;
  DispatchStats stats_;
};

}  // namespace hitalert

#endif  // HITALERT_ALERTS_HPP
