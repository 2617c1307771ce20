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

#include <hitalert/error.hpp>

namespace hitalert
{

std::string_view errc_name(Errc code) noexcept
{
  switch (code)
  {
    case Errc::NonPositiveThreshold: return "NonPositiveThreshold";
    case Errc::WeightsNotNormalized: return "WeightsNotNormalized";
    case Errc::NonPositiveSampleDt: return "NonPositiveSampleDt";
    case Errc::BadHysteresis: return "BadHysteresis";
    case Errc::NegativeTolerance: return "NegativeTolerance";
    case Errc::BadConfig: return "BadConfig";
    case Errc::MissingHeader: return "MissingHeader";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::UnknownPlayer: return "UnknownPlayer";
    case Errc::MalformedJson: return "MalformedJson";
    case Errc::MissingField: return "MissingField";
    case Errc::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case Errc::EmptyHistory: return "EmptyHistory";
    case Errc::NoTags: return "NoTags";
    case Errc::ZeroDt: return "ZeroDt";
    case Errc::StalePlayer: return "StalePlayer";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::UnmappedPlayer: return "UnmappedPlayer";
    case Errc::BadSpec: return "BadSpec";
    case Errc::ConnectionLost: return "ConnectionLost";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

bool Error::is_config_error() const noexcept
{
  switch (code_)
  {
    case Errc::NonPositiveThreshold:
    case Errc::WeightsNotNormalized:
    case Errc::NonPositiveSampleDt:
    case Errc::BadHysteresis:
    case Errc::NegativeTolerance:
    case Errc::BadConfig:
    case Errc::BadSpec:
      return true;
    default:
      return false;
  }
}

}  // namespace hitalert
