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

// Media time, intervals and the qualitative interval algebra: the thirteen
// base relations, relation sets, composition, and path-consistency
// propagation over interval constraint networks.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronotate/common.hpp"

namespace chronotate {

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

/// Milliseconds from media start. Never negative.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  explicit Timestamp(std::int64_t millis);

  constexpr std::int64_t millis() const { return millis_; }
  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

 private:
  std::int64_t millis_ = 0;
};

/// Half-open span [start, end) of media time with strictly positive duration.
class Interval {
 public:
  /// Throws InvalidInterval unless 0 <= start < end.
  Interval(std::int64_t start_ms, std::int64_t end_ms);
  Interval(Timestamp start, Timestamp end);

  Timestamp start() const { return start_; }
  Timestamp end() const { return end_; }
  std::int64_t start_ms() const { return start_.millis(); }
  std::int64_t end_ms() const { return end_.millis(); }
  std::int64_t duration() const { return end_.millis() - start_.millis(); }

  friend auto operator<=>(const Interval&, const Interval&) = default;

 private:
  Timestamp start_;
  Timestamp end_;
};

std::string to_string(const Interval& iv);

enum class AllenRelation : std::uint8_t {
  before,
  after,
  meets,
  met_by,
  overlaps,
  overlapped_by,
  during,
  contains,
  starts,
  started_by,
  finishes,
  finished_by,
  equals,
};

inline constexpr std::size_t kRelationCount = 13;

inline constexpr std::array<AllenRelation, kRelationCount> kAllRelations = {
    AllenRelation::before,   AllenRelation::after,         AllenRelation::meets,
    AllenRelation::met_by,   AllenRelation::overlaps,      AllenRelation::overlapped_by,
    AllenRelation::during,   AllenRelation::contains,      AllenRelation::starts,
    AllenRelation::started_by, AllenRelation::finishes,    AllenRelation::finished_by,
    AllenRelation::equals,
};

/// Keyword spelling, e.g. "met_by".
std::string_view to_string(AllenRelation r);
std::optional<AllenRelation> parse_relation(std::string_view keyword);

/// The unique relation holding between a and b.
AllenRelation relation(const Interval& a, const Interval& b);

constexpr AllenRelation invert(AllenRelation r) {
  if (r == AllenRelation::equals) return r;
  auto v = static_cast<std::uint8_t>(r);
  return static_cast<AllenRelation>(v ^ 1u);
}

/// Subset of the thirteen relations as a 13-bit mask. The empty set denotes a
/// contradiction; the full set denotes no information.
class RelationSet {
 public:
  static constexpr std::uint16_t kFullMask = (1u << kRelationCount) - 1;

  constexpr RelationSet() = default;
  constexpr RelationSet(AllenRelation r) : mask_(bit(r)) {}  // NOLINT(implicit)
  constexpr RelationSet(std::initializer_list<AllenRelation> rs) {
    for (auto r : rs) mask_ |= bit(r);
  }

  static constexpr RelationSet from_mask(std::uint16_t mask) {
    RelationSet s;
    s.mask_ = mask & kFullMask;
    return s;
  }
  static constexpr RelationSet full() { return from_mask(kFullMask); }
  static constexpr RelationSet none() { return {}; }

  constexpr std::uint16_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool is_full() const { return mask_ == kFullMask; }
  constexpr bool contains(AllenRelation r) const { return (mask_ & bit(r)) != 0; }
  constexpr bool subset_of(RelationSet o) const { return (mask_ & ~o.mask_) == 0; }
  int size() const;
  std::optional<AllenRelation> single() const;
  std::vector<AllenRelation> members() const;

  constexpr RelationSet inverse() const {
    RelationSet out;
    for (auto r : kAllRelations)
      if (contains(r)) out.mask_ |= bit(invert(r));
    return out;
  }

  friend constexpr RelationSet operator&(RelationSet a, RelationSet b) {
    return from_mask(a.mask_ & b.mask_);
  }
  friend constexpr RelationSet operator|(RelationSet a, RelationSet b) {
    return from_mask(a.mask_ | b.mask_);
  }
  friend constexpr bool operator==(RelationSet, RelationSet) = default;

 private:
  static constexpr std::uint16_t bit(AllenRelation r) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(r));
  }
  std::uint16_t mask_ = 0;
};

/// "{before, meets}" style rendering.
std::string to_string(RelationSet s);

/// Every relation a->c can take given a r1 b and b r2 c.
RelationSet compose(AllenRelation r1, AllenRelation r2);
RelationSet compose(RelationSet s1, RelationSet s2);

/// Named interval variables with a relation set on every ordered pair.
/// constraint(j,i) is kept equal to constraint(i,j).inverse(), and the
/// diagonal is {equals}.
class IntervalNetwork {
 public:
  IntervalNetwork() = default;

  std::size_t add_variable(std::string name);
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> find(std::string_view name) const;

  RelationSet constraint(std::size_t i, std::size_t j) const;
  /// Intersects the existing constraint with `s` (and the mirror with its
  /// inverse).
  void restrict(std::size_t i, std::size_t j, RelationSet s);
  /// Overwrites without intersecting; used by propagation internals.
  void set(std::size_t i, std::size_t j, RelationSet s);

  friend bool operator==(const IntervalNetwork&, const IntervalNetwork&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<RelationSet> cells_;  // row-major size() x size()
};

struct PropagationResult {
  bool consistent = true;
  /// The propagated network. When inconsistent, holds the state at the moment
  /// a constraint became empty.
  IntervalNetwork network;
  /// First pair whose constraint became empty.
  std::optional<std::pair<std::size_t, std::size_t>> conflict;
};

/// Path consistency to fixpoint. Sound for arbitrary networks; complete for
/// networks whose constraints are all singletons (the case for networks
/// induced by concrete media intervals). A general relation-set network that
/// survives propagation may still have no consistent assignment.
PropagationResult propagate(const IntervalNetwork& net);

}  // namespace chronotate
