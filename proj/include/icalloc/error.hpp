/*
 * Copyright 2026 The icalloc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ICALLOC_ERROR_HPP
#define ICALLOC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace icalloc {

enum class Errc {
  InvalidDimensions,
  RankOutOfRange,
  BetaOutOfRange,
  IndexOutOfRange,
  DegenerateDenominator,
  InvalidPhi,
  UnsupportedParameters,
  DimensionMismatch,
  InstanceTooLarge,
  Overflow,
  ParseError,
  DuplicateEdge,
  IndexOutOfBounds,
  SchemaError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidDimensions: return "InvalidDimensions";
    case Errc::RankOutOfRange: return "RankOutOfRange";
    case Errc::BetaOutOfRange: return "BetaOutOfRange";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::InvalidPhi: return "InvalidPhi";
    case Errc::UnsupportedParameters: return "UnsupportedParameters";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::Overflow: return "Overflow";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::IndexOutOfBounds: return "IndexOutOfBounds";
    case Errc::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace icalloc

#endif  // ICALLOC_ERROR_HPP
