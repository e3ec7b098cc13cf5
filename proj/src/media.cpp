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

#include "chronotate/media.hpp"

#include <algorithm>
#include <cstdlib>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chronotate {

using nlohmann::ordered_json;

FormatError::FormatError(std::int64_t row, const std::string& message)
    : Error("row " + std::to_string(row) + ": " + message), row_(row) {}

NonContiguousFrames::NonContiguousFrames(std::int64_t expected, std::int64_t found)
    : Error("non-contiguous frames: expected frame " + std::to_string(expected) + ", found " +
            std::to_string(found)),
      expected_(expected),
      found_(found) {}

namespace {

bool parse_int(std::string_view s, std::int64_t& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out = split(text, '\n');
  for (auto& l : out)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  return out;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

FrameRate FrameRate::parse(std::string_view text) {
  FrameRate r;
  auto slash = text.find('/');
  bool ok = slash == std::string_view::npos
                ? parse_int(text, r.num) && ((r.den = 1), true)
                : parse_int(text.substr(0, slash), r.num) && parse_int(text.substr(slash + 1), r.den);
  if (!ok || r.num <= 0 || r.den <= 0) throw Error("invalid frame rate '" + std::string(text) + "'");
  if (r.num > 1000 * r.den) throw Error("frame rate " + std::string(text) + " exceeds 1000 fps");
  return r;
}

std::string FrameRate::str() const { return std::to_string(num) + "/" + std::to_string(den); }

std::int64_t frame_to_ms(std::int64_t frame, FrameRate fps) {
  const __int128 scaled = static_cast<__int128>(frame) * 1000 * fps.den;
  return static_cast<std::int64_t>(scaled / fps.num);  // non-negative, so truncation is floor
}

FeatureStream parse_features(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty() || blank(lines[0])) throw FormatError(1, "missing header 'fps=<num>/<den>,bins=<k>'");

  FeatureStream stream;
  {
    auto fields = split(lines[0], ',');
    bool have_fps = false, have_bins = false;
    for (auto f : fields) {
      auto eq = f.find('=');
      if (eq == std::string_view::npos) throw FormatError(1, "malformed header field '" + std::string(f) + "'");
      auto key = f.substr(0, eq);
      auto value = f.substr(eq + 1);
      if (key == "fps") {
        try {
          stream.fps = FrameRate::parse(value);
        } catch (const Error& e) {
          throw FormatError(1, e.what());
        }
        have_fps = true;
      } else if (key == "bins") {
        std::int64_t bins = 0;
        if (!parse_int(value, bins) || bins <= 0) throw FormatError(1, "bins must be a positive integer");
        stream.bins = static_cast<std::size_t>(bins);
        have_bins = true;
      } else {
        throw FormatError(1, "unknown header field '" + std::string(key) + "'");
      }
    }
    if (!have_fps || !have_bins) throw FormatError(1, "header must declare fps and bins");
  }

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto row = static_cast<std::int64_t>(li + 1);
    if (blank(lines[li])) continue;
    auto fields = split(lines[li], ',');
    if (fields.size() != stream.bins + 1)
      throw FormatError(row, "expected " + std::to_string(stream.bins + 1) + " fields, found " +
                                 std::to_string(fields.size()));
    FrameSignature sig;
    if (!parse_int(fields[0], sig.frame) || sig.frame < 0)
      throw FormatError(row, "invalid frame index '" + std::string(fields[0]) + "'");
    const auto expected = static_cast<std::int64_t>(stream.frames.size());
    if (sig.frame != expected) throw NonContiguousFrames(expected, sig.frame);
    sig.histogram.reserve(stream.bins);
    for (std::size_t b = 1; b < fields.size(); ++b) {
      std::int64_t count = 0;
      if (!parse_int(fields[b], count) || count < 0)
        throw FormatError(row, "bin " + std::to_string(b - 1) + " is not a non-negative integer");
      sig.histogram.push_back(count);
    }
    stream.frames.push_back(std::move(sig));
  }
  return stream;
}

FeatureStream ingest_features(const std::filesystem::path& path) { return parse_features(read_file(path)); }

double histogram_distance(const FrameSignature& a, const FrameSignature& b) {
  std::int64_t diff = 0, mass = 0;
  const std::size_t n = std::min(a.histogram.size(), b.histogram.size());
  for (std::size_t i = 0; i < n; ++i) {
    diff += std::abs(a.histogram[i] - b.histogram[i]);
    mass += a.histogram[i];
  }
  if (mass == 0) return diff == 0 ? 0.0 : 1.0;
  return static_cast<double>(diff) / (2.0 * static_cast<double>(mass));
}

std::vector<Event> detect_shots(const FeatureStream& stream, const ShotParams& params,
                                std::string_view id_prefix) {
  if (stream.frames.empty()) throw EmptyStream();
  if (params.min_shot_frames <= 0) throw Error("min_shot_frames must be positive");

  std::vector<std::int64_t> cuts{0};
  const auto n = static_cast<std::int64_t>(stream.frames.size());
  for (std::int64_t f = 0; f + 1 < n; ++f) {
    const std::int64_t boundary = f + 1;
    if (boundary - cuts.back() < params.min_shot_frames) continue;
    if (histogram_distance(stream.frames[f], stream.frames[f + 1]) > params.threshold) cuts.push_back(boundary);
  }
  cuts.push_back(n);

  std::vector<Event> shots;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Event e;
    e.id = std::string(id_prefix) + ":shot" + std::to_string(i);
    e.type = "shot";
    e.interval = Interval(frame_to_ms(cuts[i], stream.fps), frame_to_ms(cuts[i + 1], stream.fps));
    e.confidence = 1.0;
    e.attributes = {{"index", static_cast<std::int64_t>(i)},
                    {"start_frame", cuts[i]},
                    {"end_frame", cuts[i + 1]}};
    shots.push_back(std::move(e));
  }
  return shots;
}

namespace {

const char* const kReserved[] = {"id", "type", "start_ms", "end_ms", "confidence", "v"};

bool reserved(const std::string& key) {
  for (const char* r : kReserved)
    if (key == r) return true;
  return false;
}

}  // namespace

std::vector<Event> parse_events(std::string_view text, std::string_view source_label) {
  auto lines = lines_of(text);
  std::vector<Event> events;
  bool have_header = false;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto row = static_cast<std::int64_t>(li + 1);
    if (blank(lines[li])) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(lines[li]);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(row, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw FormatError(row, "expected a JSON object");
    if (!have_header) {
      if (!obj.contains("v") || !obj["v"].is_number_integer())
        throw FormatError(row, "missing header {\"v\":1}");
      if (obj["v"].get<std::int64_t>() != 1)
        throw FormatError(row, "unsupported event file version " + obj["v"].dump() + " (supported: 1)");
      have_header = true;
      continue;
    }

    Event e;
    auto need = [&](const char* key) -> const ordered_json& {
      if (!obj.contains(key)) throw FormatError(row, std::string("missing field '") + key + "'");
      return obj[key];
    };
    const auto& type = need("type");
    if (!type.is_string() || type.get<std::string>().empty())
      throw FormatError(row, "'type' must be a non-empty string");
    e.type = type.get<std::string>();
    const auto& start = need("start_ms");
    const auto& end = need("end_ms");
    if (!start.is_number_integer() || !end.is_number_integer())
      throw FormatError(row, "'start_ms' and 'end_ms' must be integers");
    const auto s = start.get<std::int64_t>(), t = end.get<std::int64_t>();
    if (s < 0 || t <= s) throw InvalidInterval("row " + std::to_string(row) + ": interval [" +
                                               std::to_string(s) + ", " + std::to_string(t) + ") is invalid");
    e.interval = Interval(s, t);
    const auto& conf = need("confidence");
    if (!conf.is_number()) throw FormatError(row, "'confidence' must be a number");
    e.confidence = conf.get<double>();
    if (!(e.confidence >= 0.0 && e.confidence <= 1.0)) throw FormatError(row, "'confidence' must be in [0, 1]");
    if (obj.contains("id")) {
      if (!obj["id"].is_string()) throw FormatError(row, "'id' must be a string");
      e.id = obj["id"].get<std::string>();
    } else {
      e.id = std::string(source_label) + ":" + std::to_string(row);
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (reserved(it.key())) continue;
      const auto& v = it.value();
      if (v.is_string())
        e.attributes[it.key()] = v.get<std::string>();
      else if (v.is_number_integer())
        e.attributes[it.key()] = v.get<std::int64_t>();
      else if (v.is_number_float())
        e.attributes[it.key()] = v.get<double>();
      else
        throw FormatError(row, "attribute '" + it.key() + "' must be a string or number");
    }
    events.push_back(std::move(e));
  }
  if (!have_header) throw FormatError(1, "missing header {\"v\":1}");
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.interval.start() < b.interval.start();
  });
  return events;
}

std::vector<Event> ingest_events(const std::filesystem::path& path) {
  return parse_events(read_file(path), path.stem().string());
}

std::string serialize_events(std::span<const Event> events) {
  std::string out = "{\"v\":1}\n";
  for (const auto& e : events) {
    ordered_json obj;
    obj["id"] = e.id;
    obj["type"] = e.type;
    obj["start_ms"] = e.interval.start_ms();
    obj["end_ms"] = e.interval.end_ms();
    obj["confidence"] = e.confidence;
    for (const auto& [k, v] : e.attributes) std::visit([&](const auto& x) { obj[k] = x; }, v);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<Event> merge_timeline(std::span<const std::vector<Event>> sources) {
  std::vector<Event> out;
  for (const auto& s : sources) out.insert(out.end(), s.begin(), s.end());
  std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) {
    if (a.interval.start() != b.interval.start()) return a.interval.start() < b.interval.start();
    if (a.interval.end() != b.interval.end()) return a.interval.end() < b.interval.end();
    return a.type < b.type;
  });
  return out;
}

}  // namespace chronotate
