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

#include <hitalert/roster.hpp>

#include <fstream>
#include <istream>

#include <hitalert/config_file.hpp>

#include "csv.hpp"

namespace hitalert
{

void Roster::add(PlayerId player, std::string display_name, std::optional<int> pager_id)
{
  if (player.id.empty())
    throw Error(Errc::BadConfig, "roster: empty player id");
  if (player.tag_ids.empty() || player.tag_ids.size() > 2)
    throw Error(Errc::BadConfig, "roster: player " + player.id + " needs 1 or 2 tags");
  if (by_player_.contains(player.id))
    throw Error(Errc::BadConfig, "roster: duplicate player " + player.id);
  for (const auto& tag : player.tag_ids)
  {
    if (by_tag_.contains(tag))
      throw Error(Errc::BadConfig, "roster: tag " + tag + " mapped to two players");
  }
  if (player.tag_ids.size() == 2 && player.tag_ids[0] == player.tag_ids[1])
    throw Error(Errc::BadConfig, "roster: player " + player.id + " lists the same tag twice");

  const std::size_t index = players_.size();
  for (const auto& tag : player.tag_ids)
    by_tag_.emplace(tag, index);
  by_player_.emplace(player.id, index);
  names_.push_back(display_name.empty() ? player.id : std::move(display_name));
  pagers_.push_back(pager_id.value_or(static_cast<int>(index) + 1));
  players_.push_back(std::move(player));
}

const PlayerId* Roster::find(std::string_view player) const
{
  const auto it = by_player_.find(player);
  return it == by_player_.end() ? nullptr : &players_[it->second];
}

std::optional<std::string> Roster::player_for_tag(std::string_view tag) const
{
  const auto it = by_tag_.find(tag);
  if (it == by_tag_.end())
    return std::nullopt;
  return players_[it->second].id;
}

std::optional<std::string> Roster::resolve_tag(std::string_view tag)
{
  if (auto known = player_for_tag(tag))
    return known;
  if (!infer_ || tag.empty())
    return std::nullopt;

  const auto slash = tag.find('/');
  const std::string player(slash == std::string_view::npos ? tag : tag.substr(0, slash));
  if (player.empty())
    return std::nullopt;
  const auto it = by_player_.find(player);
  if (it == by_player_.end())
  {
    add(PlayerId{player, {std::string(tag)}});
  }
  else
  {
    auto& entry = players_[it->second];
    if (entry.tag_ids.size() >= 2)
      return std::nullopt;
    entry.tag_ids.emplace_back(tag);
    by_tag_.emplace(std::string(tag), it->second);
  }
  return player;
}

std::optional<int> Roster::pager_for(std::string_view player) const
{
  const auto it = by_player_.find(player);
  if (it == by_player_.end())
    return std::nullopt;
  return pagers_[it->second];
}

std::string Roster::display_name(std::string_view player) const
{
  const auto it = by_player_.find(player);
  return it == by_player_.end() ? std::string(player) : names_[it->second];
}

Roster load_roster(std::istream& in)
{
  Roster roster;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (trim(line).empty() || trim(line).starts_with('#'))
      continue;
    auto fields = csv::split(line);
    for (auto& field : fields)
      field = std::string(trim(field));
    if (line_no == 1 && fields[0] == "player_id")
      continue;
    if (fields.size() < 3)
      throw Error(Errc::BadConfig, "roster line " + std::to_string(line_no) + ": expected player_id,display_name,tag_id_1[,tag_id_2]");

    PlayerId player{fields[0], {fields[2]}};
    if (fields.size() > 3 && !fields[3].empty())
      player.tag_ids.push_back(fields[3]);
    std::optional<int> pager;
    if (fields.size() > 4 && !fields[4].empty())
      pager = parse_int(fields[4], "pager_id");
    roster.add(std::move(player), fields[1], pager);
  }
  return roster;
}

Roster load_roster_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::Io, "cannot open roster " + path);
  return load_roster(in);
}

}  // namespace hitalert
