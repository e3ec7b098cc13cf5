// Copyright 2026 The Chronotate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace chronotate {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Attribute value carried by individuals, events and annotations.
using Literal = std::variant<std::int64_t, double, std::string>;
using AttributeMap = std::map<std::string, Literal>;

// Shortest round-trip decimal rendering; always contains a '.' so it re-reads
// as a decimal rather than an integer.
std::string format_decimal(double value);

// Double-quoted, backslash-escaped string literal.
std::string quote(std::string_view text);

// Literal in source syntax: integers bare, decimals via format_decimal,
// strings quoted.
std::string format_literal(const Literal& value);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

}  // namespace chronotate
