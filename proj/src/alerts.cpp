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

#include <hitalert/alerts.hpp>

#include <charconv>

namespace hitalert
{

namespace
{

void check_ranges(int pager_id, int vibration_ms)
{
  if (pager_id < min_pager_id || pager_id > max_pager_id)
    throw Error(Errc::OutOfRange, "pager id " + std::to_string(pager_id) + " outside [1, 9999]");
  if (vibration_ms < min_vibration_ms || vibration_ms > max_vibration_ms)
    throw Error(Errc::OutOfRange, "vibration " + std::to_string(vibration_ms) + " ms outside [100, 5000]");
}

// Strict decimal: digits only, no sign, no leading zero.
int take_decimal(std::string_view& text)
{
  std::size_t n = 0;
  while (n < text.size() && text[n] >= '0' && text[n] <= '9')
    ++n;
  if (n == 0 || (n > 1 && text[0] == '0'))
    throw Error(Errc::OutOfRange, "malformed number in pager command");
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + n, value);
  if (ec != std::errc())
    throw Error(Errc::OutOfRange, "number too large in pager command");
  text.remove_prefix(n);
  return value;
}

}  // namespace

std::string encode_command(const PagerCommand& command)
{
  check_ranges(command.pager_id, command.vibration_ms);
  return "PAGE " + std::to_string(command.pager_id) + " " + std::to_string(command.vibration_ms) + "\r\n";
}

PagerCommand decode_command(std::string_view line)
{
  constexpr std::string_view prefix = "PAGE ";
  if (!line.starts_with(prefix) || !line.ends_with("\r\n"))
    throw Error(Errc::OutOfRange, "not a pager command line");
  line.remove_prefix(prefix.size());
  line.remove_suffix(2);

  PagerCommand command;
  command.pager_id = take_decimal(line);
  if (!line.starts_with(' '))
    throw Error(Errc::OutOfRange, "expected a space after the pager id");
  line.remove_prefix(1);
  command.vibration_ms = take_decimal(line);
  if (!line.empty())
    throw Error(Errc::OutOfRange, "trailing bytes in pager command");
  check_ranges(command.pager_id, command.vibration_ms);
  return command;
}

Dispatcher::Dispatcher(const Roster& roster, double refractory_s, int vibration_ms, bool page_both)
  : roster_(roster), refractory_s_(refractory_s), vibration_ms_(vibration_ms), page_both_(page_both)
{
  check_ranges(min_pager_id, vibration_ms_);
}

std::vector<PagerCommand> Dispatcher::dispatch(std::span<const CollisionEvent> events)
{
  std::vector<PagerCommand> out;
  for (const auto& event : events)
  {
    page(event.pair.first(), event.t, out);
    if (page_both_)
      page(event.pair.second(), event.t, out);
  }
  return out;
}

std::vector<PagerCommand> Dispatcher::dispatch(std::span<const CollisionEvent> events, double now)
{
  std::vector<PagerCommand> out;
  for (const auto& event : events)
  {
    page(event.pair.first(), now, out);
    if (page_both_)
      page(event.pair.second(), now, out);
  }
  return out;
}

void Dispatcher::page(const std::string& player, double now, std::vector<PagerCommand>& out)
{
  const auto pager = roster_.pager_for(player);
  if (!pager || *pager < min_pager_id || *pager > max_pager_id)
  {
    ++stats_.unmapped;
    return;
  }
  if (const auto it = last_issued_.find(*pager); it != last_issued_.end() && now - it->second < refractory_s_ - 1e-9)
  {
    ++stats_.suppressed;
    return;
  }
  last_issued_[*pager] = now;
  out.push_back(PagerCommand{*pager, vibration_ms_, now});
  ++stats_.commands;
}

}  // namespace hitalert
