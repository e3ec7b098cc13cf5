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
#include <random>
#include <vector>

#include "chronotate/media.hpp"

namespace testing_support {

// Stream of `n` frames whose histogram switches palette at each frame in
// `cuts`; within a segment frames wobble slightly.
inline chronotate::FeatureStream synthetic(std::int64_t n, const std::vector<std::int64_t>& cuts, std::mt19937& rng, std::size_t bins = 8) {
  chronotate::FeatureStream s;
  s.fps = {25, 1};
  s.bins = bins;
  std::size_t segment = 0;
  for (std::int64_t f = 0; f < n; ++f) {
    while (segment < cuts.size() && cuts[segment] <= f) ++segment;
    chronotate::FrameSignature sig{f, std::vector<std::int64_t>(bins, 0)};
    const std::size_t hot = (segment * 3) % bins;
    const std::int64_t wobble = static_cast<std::int64_t>(rng() % 5);
    sig.histogram[hot] = 100 - wobble;
    sig.histogram[(hot + 1) % bins] = wobble;
    s.frames.push_back(std::move(sig));
  }
  return s;
}

inline std::vector<std::int64_t> cut_frames(const std::vector<chronotate::Event>& shots) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < shots.size(); ++i) out.push_back(std::get<std::int64_t>(shots[i].attributes.at("start_frame")));
  return out;
}

}  // namespace testing_support
