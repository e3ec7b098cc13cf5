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

#include "chronotate/temporal.hpp"

#include <bit>
#include <deque>

namespace chronotate {

namespace {

constexpr std::array<std::string_view, kRelationCount> kRelationNames = {
    "before",     "after",    "meets",       "met_by", "overlaps",
    "overlapped_by", "during", "contains",   "starts", "started_by",
    "finishes",   "finished_by", "equals",
};

// Composition table, row r1, column r2, bit k set iff relation k is possible
// between a and c. Frozen from brute-force enumeration of integer intervals
// with endpoints in 0..8; tests re-derive and compare all 169 entries.
constexpr std::uint16_t kComposition[kRelationCount][kRelationCount] = {
    {0x0001, 0x1fff, 0x0001, 0x0155, 0x0001, 0x0155, 0x0155, 0x0001, 0x0001, 0x0001, 0x0155, 0x0001, 0x0001},  // before
    {0x1fff, 0x0002, 0x046a, 0x0002, 0x046a, 0x0002, 0x046a, 0x0002, 0x046a, 0x0002, 0x0002, 0x0002, 0x0002},  // after
    {0x0001, 0x02aa, 0x0001, 0x1c00, 0x0001, 0x0150, 0x0150, 0x0001, 0x0004, 0x0004, 0x0150, 0x0001, 0x0004},  // meets
    {0x0895, 0x0002, 0x1300, 0x0002, 0x0460, 0x0002, 0x0460, 0x0002, 0x0460, 0x0002, 0x0008, 0x0008, 0x0008},  // met_by
    {0x0001, 0x02aa, 0x0001, 0x02a0, 0x0015, 0x1ff0, 0x0150, 0x0895, 0x0010, 0x0890, 0x0150, 0x0015, 0x0010},  // overlaps
    {0x0895, 0x0002, 0x0890, 0x0002, 0x1ff0, 0x002a, 0x0460, 0x02aa, 0x0460, 0x002a, 0x0020, 0x02a0, 0x0020},  // overlapped_by
    {0x0001, 0x0002, 0x0001, 0x0002, 0x0155, 0x046a, 0x0040, 0x1fff, 0x0040, 0x046a, 0x0040, 0x0155, 0x0040},  // during
    {0x0895, 0x02aa, 0x0890, 0x02a0, 0x0890, 0x02a0, 0x1ff0, 0x0080, 0x0890, 0x0080, 0x02a0, 0x0080, 0x0080},  // contains
    {0x0001, 0x0002, 0x0001, 0x0008, 0x0015, 0x0460, 0x0040, 0x0895, 0x0100, 0x1300, 0x0040, 0x0015, 0x0100},  // starts
    {0x0895, 0x0002, 0x0890, 0x0008, 0x0890, 0x0020, 0x0460, 0x0080, 0x1300, 0x0200, 0x0020, 0x0080, 0x0200},  // started_by
    {0x0001, 0x0002, 0x0004, 0x0002, 0x0150, 0x002a, 0x0040, 0x02aa, 0x0040, 0x002a, 0x0400, 0x1c00, 0x0400},  // finishes
    {0x0001, 0x02aa, 0x0004, 0x02a0, 0x0010, 0x02a0, 0x0150, 0x0080, 0x0010, 0x0080, 0x1c00, 0x0800, 0x0800},  // finished_by
    {0x0001, 0x0002, 0x0004, 0x0008, 0x0010, 0x0020, 0x0040, 0x0080, 0x0100, 0x0200, 0x0400, 0x0800, 0x1000},  // equals
};

}  // namespace

Timestamp::Timestamp(std::int64_t millis) : millis_(millis) {
  if (millis < 0) throw InvalidInterval("negative timestamp " + std::to_string(millis));
}

Interval::Interval(std::int64_t start_ms, std::int64_t end_ms)
    : Interval(Timestamp(start_ms), Timestamp(end_ms)) {}

Interval::Interval(Timestamp start, Timestamp end) : start_(start), end_(end) {
  if (!(start < end))
    throw InvalidInterval("interval [" + std::to_string(start.millis()) + ", " +
                          std::to_string(end.millis()) + ") is empty");
}

std::string to_string(const Interval& iv) {
  return "[" + std::to_string(iv.start_ms()) + ", " + std::to_string(iv.end_ms()) + ")";
}

std::string_view to_string(AllenRelation r) { return kRelationNames[static_cast<std::size_t>(r)]; }

std::optional<AllenRelation> parse_relation(std::string_view keyword) {
  for (std::size_t i = 0; i < kRelationCount; ++i)
    if (kRelationNames[i] == keyword) return static_cast<AllenRelation>(i);
  return std::nullopt;
}

AllenRelation relation(const Interval& a, const Interval& b) {
  const auto as = a.start_ms(), ae = a.end_ms(), bs = b.start_ms(), be = b.end_ms();
  if (ae < bs) return AllenRelation::before;
  if (be < as) return AllenRelation::after;
  if (ae == bs) return AllenRelation::meets;
  if (be == as) return AllenRelation::met_by;
  if (as == bs) {
    if (ae == be) return AllenRelation::equals;
    return ae < be ? AllenRelation::starts : AllenRelation::started_by;
  }
  if (ae == be) return as > bs ? AllenRelation::finishes : AllenRelation::finished_by;
  if (bs < as && ae < be) return AllenRelation::during;
  if (as < bs && be < ae) return AllenRelation::contains;
  return as < bs ? AllenRelation::overlaps : AllenRelation::overlapped_by;
}

int RelationSet::size() const { return std::popcount(mask_); }

std::optional<AllenRelation> RelationSet::single() const {
  if (size() != 1) return std::nullopt;
  return static_cast<AllenRelation>(std::countr_zero(mask_));
}

std::vector<AllenRelation> RelationSet::members() const {
  std::vector<AllenRelation> out;
  for (auto r : kAllRelations)
    if (contains(r)) out.push_back(r);
  return out;
}

std::string to_string(RelationSet s) {
  std::string out = "{";
  bool first = true;
  for (auto r : s.members()) {
    if (!first) out += ", ";
    out += to_string(r);
    first = false;
  }
  return out + "}";
}

RelationSet compose(AllenRelation r1, AllenRelation r2) {
  return RelationSet::from_mask(
      kComposition[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)]);
}

RelationSet compose(RelationSet s1, RelationSet s2) {
  if (s1.is_full() || s2.is_full()) return s1.empty() || s2.empty() ? RelationSet{} : RelationSet::full();
  std::uint16_t out = 0;
  for (auto r1 : s1.members())
    for (auto r2 : s2.members()) {
      out |= kComposition[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)];
      if (out == RelationSet::kFullMask) return RelationSet::full();
    }
  return RelationSet::from_mask(out);
}

std::size_t IntervalNetwork::add_variable(std::string name) {
  const std::size_t n = names_.size();
  std::vector<RelationSet> grown((n + 1) * (n + 1), RelationSet::full());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) grown[i * (n + 1) + j] = cells_[i * n + j];
  grown[n * (n + 1) + n] = AllenRelation::equals;
  cells_ = std::move(grown);
  names_.push_back(std::move(name));
  return n;
}

std::optional<std::size_t> IntervalNetwork::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

RelationSet IntervalNetwork::constraint(std::size_t i, std::size_t j) const {
  const auto n = size();
  if (i >= n || j >= n) throw Error("interval network index out of range");
  return cells_[i * n + j];
}

void IntervalNetwork::restrict(std::size_t i, std::size_t j, RelationSet s) {
  set(i, j, constraint(i, j) & s);
}

void IntervalNetwork::set(std::size_t i, std::size_t j, RelationSet s) {
  const auto n = size();
  if (i >= n || j >= n) throw Error("interval network index out of range");
  cells_[i * n + j] = s;
  cells_[j * n + i] = s.inverse();
}

PropagationResult propagate(const IntervalNetwork& net) {
  PropagationResult result{true, net, std::nullopt};
  IntervalNetwork& g = result.network;
  const std::size_t n = g.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (g.constraint(i, i).contains(AllenRelation::equals)) {
      g.set(i, i, AllenRelation::equals);
    } else {
      result.consistent = false;
      result.conflict = {i, i};
      return result;
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.constraint(i, j).empty()) {
        result.consistent = false;
        result.conflict = {i, j};
        return result;
      }

  // Worklist of pairs whose constraint changed; each change is pushed through
  // every third variable.
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  std::vector<char> queued(n * n, 0);
  auto enqueue = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (!queued[i * n + j]) {
      queued[i * n + j] = 1;
      queue.emplace_back(i, j);
    }
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) enqueue(i, j);

  auto revise = [&](std::size_t a, std::size_t c, RelationSet via) -> bool {
    const RelationSet old = g.constraint(a, c);
    const RelationSet narrowed = old & via;
    if (narrowed == old) return true;
    g.set(a, c, narrowed);
    if (narrowed.empty()) {
      result.consistent = false;
      result.conflict = {a, c};
      return false;
    }
    enqueue(a, c);
    return true;
  };

  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    queued[i * n + j] = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      // i -> k through j, and k -> j through i.
      if (!revise(i, k, compose(g.constraint(i, j), g.constraint(j, k)))) return result;
      if (!revise(k, j, compose(g.constraint(k, i), g.constraint(i, j)))) return result;
    }
  }
  return result;
}

}  // namespace chronotate
