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

#ifndef HITALERT_ERROR_HPP
#define HITALERT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hitalert
{

enum class Errc
{
  // configuration
  NonPositiveThreshold,
  WeightsNotNormalized,
  NonPositiveSampleDt,
  BadHysteresis,
  NegativeTolerance,
  BadConfig,
  // ingest
  MissingHeader,
  EmptyInput,
  UnknownPlayer,
  MalformedJson,
  MissingField,
  NonFiniteCoordinate,
  // tracking / prediction
  EmptyHistory,
  NoTags,
  ZeroDt,
  StalePlayer,
  // alerts
  OutOfRange,
  UnmappedPlayer,
  // harness
  BadSpec,
  ConnectionLost,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error
{
public:
  Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
  {
  }

  Errc code() const noexcept { return code_; }

  /// True for errors that map to the "configuration error" exit code.
  bool is_config_error() const noexcept;

private:
  Errc code_;
};

}  // namespace hitalert

#endif  // HITALERT_ERROR_HPP
