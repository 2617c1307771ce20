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

#ifndef HITALERT_ROSTER_HPP
#define HITALERT_ROSTER_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <hitalert/core.hpp>

namespace hitalert
{

/// Maps tags to players and players to pager ids.
///
/// With inference enabled, an unknown tag `P/suffix` is attached to player
/// `P` (created on first sight); a tag without a slash becomes its own player.
class Roster
{
public:
  Roster() = default;

  static Roster inferring()
  {
    Roster roster;
    roster.infer_ = true;
    return roster;
  }

  /// Throws BadConfig on an empty tag list, a duplicate player, or a tag
  /// already mapped to another player. Without an explicit pager id the
  /// player gets its 1-based roster position.
  void add(PlayerId player, std::string display_name = {}, std::optional<int> pager_id = {});

  bool infers() const noexcept { return infer_; }
  bool empty() const noexcept { return players_.empty(); }
  const std::vector<PlayerId>& players() const noexcept { return players_; }

  const PlayerId* find(std::string_view player) const;
  std::optional<std::string> player_for_tag(std::string_view tag) const;

  /// Like player_for_tag, but creates the mapping when inference is on.
  std::optional<std::string> resolve_tag(std::string_view tag);

  std::optional<int> pager_for(std::string_view player) const;
  std::string display_name(std::string_view player) const;

private:
  bool infer_ = false;
  std::vector<PlayerId> players_;
  std::map<std::string, std::size_t, std::less<>> by_player_;
  std::map<std::string, std::size_t, std::less<>> by_tag_;
  std::vector<std::string> names_;
  std::vector<int> pagers_;
};

/// Reads `player_id,display_name,tag_id_1,tag_id_2[,pager_id]` rows. A header
/// row starting with `player_id` is skipped; tag_id_2 may be blank.
Roster load_roster(std::istream& in);
Roster load_roster_file(const std::string& path);

}  // namespace hitalert

#endif  // HITALERT_ROSTER_HPP
