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

// Per-frame feature streams, detector event files, the histogram shot
// detector, and the merged event timeline consumed by rule evaluation.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronotate/common.hpp"
#include "chronotate/temporal.hpp"

namespace chronotate {

/// Malformed input row. `row` is the 1-based line number.
class FormatError : public Error {
 public:
  FormatError(std::int64_t row, const std::string& message);
  std::int64_t row() const { return row_; }

 private:
  std::int64_t row_;
};

class NonContiguousFrames : public Error {
 public:
  NonContiguousFrames(std::int64_t expected, std::int64_t found);
  std::int64_t expected() const { return expected_; }
  std::int64_t found() const { return found_; }

 private:
  std::int64_t expected_;
  std::int64_t found_;
};

class EmptyStream : public Error {
 public:
  EmptyStream() : Error("feature stream has no frames") {}
};

/// Frames per second as an exact positive rational, at most 1000 so that
/// every frame spans at least one millisecond.
struct FrameRate {
  std::int64_t num = 25;
  std::int64_t den = 1;

  /// Accepts "num/den" or "num". Throws Error when out of range.
  static FrameRate parse(std::string_view text);
  std::string str() const;
  friend bool operator==(const FrameRate&, const FrameRate&) = default;
};

/// Start of frame `frame` in ms: floor(frame * 1000 / fps), exact.
std::int64_t frame_to_ms(std::int64_t frame, FrameRate fps);

struct FrameSignature {
  std::int64_t frame = 0;
  std::vector<std::int64_t> histogram;
  friend bool operator==(const FrameSignature&, const FrameSignature&) = default;
};

struct FeatureStream {
  FrameRate fps;
  std::size_t bins = 0;
  std::vector<FrameSignature> frames;

  std::int64_t duration_ms() const { return frame_to_ms(static_cast<std::int64_t>(frames.size()), fps); }
  friend bool operator==(const FeatureStream&, const FeatureStream&) = default;
};

/// Header `fps=<num>/<den>,bins=<k>`, then rows `frame,<b0>,...,<b{k-1}>`.
FeatureStream parse_features(std::string_view text);
FeatureStream ingest_features(const std::filesystem::path& path);

struct Event {
  std::string id;
  std::string type;
  Interval interval{0, 1};
  double confidence = 1.0;
  AttributeMap attributes;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Normalized L1 distance sum|a - b| / (2 * sum(a)).
double histogram_distance(const FrameSignature& a, const FrameSignature& b);

struct ShotParams {
  double threshold = 0.5;
  std::int64_t min_shot_frames = 5;
  friend bool operator==(const ShotParams&, const ShotParams&) = default;
};

/// Shots tiling [0, duration). A cut goes between frames f and f+1 when the
/// distance exceeds the threshold and the running shot already spans at least
/// min_shot_frames frames. Ids are "<id_prefix>:shot<index>".
std::vector<Event> detect_shots(const FeatureStream& stream, const ShotParams& params,
                                std::string_view id_prefix = "features");

/// JSON Lines: header `{"v":1}`, then one event object per line. Records
/// without an "id" get "<source_label>:<line>". Result is sorted by start,
/// ties kept in file order.
std::vector<Event> parse_events(std::string_view text, std::string_view source_label);
std::vector<Event> ingest_events(const std::filesystem::path& path);

/// Writes the format parse_events reads, ids included.
std::string serialize_events(std::span<const Event> events);

/// All sources in one sequence ordered by (start, end, type); ties keep source
/// order.
std::vector<Event> merge_timeline(std::span<const std::vector<Event>> sources);

}  // namespace chronotate
