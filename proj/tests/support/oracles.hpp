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

// Test-side oracles. Nothing here calls into the library's algorithms; the
// relation oracle works from the textbook endpoint definitions and the
// composition oracle enumerates concrete interval triples.

#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

// Relation indices follow the library enumeration order:
// before after meets met_by overlaps overlapped_by during contains starts
// started_by finishes finished_by equals.
inline constexpr int kBefore = 0, kAfter = 1, kMeets = 2, kMetBy = 3, kOverlaps = 4, kOverlappedBy = 5,
                     kDuring = 6, kContains = 7, kStarts = 8, kStartedBy = 9, kFinishes = 10,
                     kFinishedBy = 11, kEquals = 12;

/// Every relation whose endpoint definition holds for [as,ae) vs [bs,be).
inline std::vector<int> relations_holding(long as, long ae, long bs, long be) {
  std::vector<int> out;
  if (ae < bs) out.push_back(kBefore);
  if (be < as) out.push_back(kAfter);
  if (ae == bs) out.push_back(kMeets);
  if (be == as) out.push_back(kMetBy);
  if (as < bs && bs < ae && ae < be) out.push_back(kOverlaps);
  if (bs < as && as < be && be < ae) out.push_back(kOverlappedBy);
  if (bs < as && ae < be) out.push_back(kDuring);
  if (as < bs && be < ae) out.push_back(kContains);
  if (as == bs && ae < be) out.push_back(kStarts);
  if (as == bs && be < ae) out.push_back(kStartedBy);
  if (ae == be && bs < as) out.push_back(kFinishes);
  if (ae == be && as < bs) out.push_back(kFinishedBy);
  if (as == bs && ae == be) out.push_back(kEquals);
  return out;
}

/// The unique relation; -1 if the definitions are not exclusive.
inline int relation_of(long as, long ae, long bs, long be) {
  auto r = relations_holding(as, ae, bs, be);
  return r.size() == 1 ? r[0] : -1;
}

/// compose[r1][r2] as a 13-bit mask, from all triples with endpoints in
/// [0, max_endpoint].
inline std::array<std::array<std::uint16_t, 13>, 13> composition_table(int max_endpoint) {
  std::vector<std::pair<int, int>> ivs;
  for (int s = 0; s <= max_endpoint; ++s)
    for (int e = s + 1; e <= max_endpoint; ++e) ivs.emplace_back(s, e);
  const std::size_t n = ivs.size();
  std::vector<int> rel(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rel[i * n + j] = relation_of(ivs[i].first, ivs[i].second, ivs[j].first, ivs[j].second);
  std::array<std::array<std::uint16_t, 13>, 13> table{};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        table[rel[a * n + b]][rel[b * n + c]] |= static_cast<std::uint16_t>(1u << rel[a * n + c]);
  return table;
}

}  // namespace oracle
