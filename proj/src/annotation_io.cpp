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

#include <fstream>
#include <sstream>

#include "chronotate/annotator.hpp"
#include "json.hpp"

namespace chronotate {

using nlohmann::ordered_json;

namespace {

constexpr int kDocumentVersion = 1;
constexpr const char* kDocumentKind = "chronotate.annotations";

ordered_json literal_json(const Literal& v) {
  return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

Literal json_literal(const ordered_json& v, std::int64_t row) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) return v.get<double>();
  throw FormatError(row, "attribute values must be strings or numbers");
}

}  // namespace

std::string serialize(const AnnotationSet& set) {
  ordered_json header;
  header["v"] = kDocumentVersion;
  header["kind"] = kDocumentKind;
  header["project"] = set.project_id;
  header["fps"] = set.fps.str();
  header["domain"] = {{"prefix", set.domain.prefix}, {"version", set.domain.version}};
  header["time"] = {{"prefix", set.time.prefix}, {"version", set.time.version}};
  header["rules_hash"] = set.rules_hash;
  header["shots"] = {{"threshold", set.shot_params.threshold}, {"min_frames", set.shot_params.min_shot_frames}};
  header["duration_tolerance_ms"] = set.duration_tolerance_ms;
  header["count"] = set.annotations.size();

  std::string out = header.dump() + "\n";
  for (const auto& a : set.annotations) {
    ordered_json rec;
    rec["id"] = a.id;
    rec["concept"] = a.concept_name;
    rec["start_ms"] = a.interval.start_ms();
    rec["end_ms"] = a.interval.end_ms();
    ordered_json attrs = ordered_json::object();
    for (const auto& [k, v] : a.attributes) attrs[k] = literal_json(v);
    rec["attributes"] = std::move(attrs);
    ordered_json prov = ordered_json::array();
    for (const auto& p : a.provenance) prov.push_back({{"rule", p.rule}, {"events", p.event_ids}});
    rec["provenance"] = std::move(prov);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

AnnotationSet parse_annotations(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw FormatError(1, "empty annotation document");

  auto parse_line = [](std::string_view line, std::int64_t row) {
    try {
      ordered_json j = ordered_json::parse(line);
      if (!j.is_object()) throw FormatError(row, "expected a JSON object");
      return j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(row, std::string("invalid JSON: ") + e.what());
    }
  };

  AnnotationSet set;
  const ordered_json header = parse_line(lines[0], 1);
  try {
    if (!header.contains("v") || !header["v"].is_number_integer())
      throw FormatError(1, "missing document version");
    const auto v = header["v"].get<std::int64_t>();
    if (v != kDocumentVersion)
      throw FormatError(1, "unsupported annotation document version " + std::to_string(v) + "; this build reads version " +
                               std::to_string(kDocumentVersion));
    if (header.value("kind", "") != kDocumentKind) throw FormatError(1, "not an annotation document");
    set.project_id = header.at("project").get<std::string>();
    set.fps = FrameRate::parse(header.at("fps").get<std::string>());
    set.domain = {header.at("domain").at("prefix").get<std::string>(),
                  header.at("domain").at("version").get<std::string>()};
    set.time = {header.at("time").at("prefix").get<std::string>(), header.at("time").at("version").get<std::string>()};
    set.rules_hash = header.at("rules_hash").get<std::string>();
    set.shot_params.threshold = header.at("shots").at("threshold").get<double>();
    set.shot_params.min_shot_frames = header.at("shots").at("min_frames").get<std::int64_t>();
    set.duration_tolerance_ms = header.at("duration_tolerance_ms").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(1, std::string("malformed header: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(1, e.what());
  }

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto row = static_cast<std::int64_t>(li + 1);
    if (lines[li].empty()) throw FormatError(row, "blank line in annotation document");
    const ordered_json rec = parse_line(lines[li], row);
    Annotation a;
    try {
      a.id = rec.at("id").get<std::string>();
      a.concept_name = rec.at("concept").get<std::string>();
      a.interval = Interval(rec.at("start_ms").get<std::int64_t>(), rec.at("end_ms").get<std::int64_t>());
      for (auto it = rec.at("attributes").begin(); it != rec.at("attributes").end(); ++it)
        a.attributes[it.key()] = json_literal(it.value(), row);
      for (const auto& p : rec.at("provenance"))
        a.provenance.push_back({p.at("rule").get<std::string>(), p.at("events").get<std::vector<std::string>>()});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(row, std::string("malformed annotation: ") + e.what());
    } catch (const InvalidInterval& e) {
      throw FormatError(row, e.what());
    }
    if (a.id != annotation_id(a.concept_name, a.interval, a.attributes))
      throw FormatError(row, "annotation id " + a.id + " does not match its content");
    if (!set.annotations.empty()) {
      const Annotation& prev = set.annotations.back();
      auto key = [](const Annotation& x) {
        return std::tie(x.interval, x.concept_name, x.id);
      };
      if (!(key(prev) < key(a))) throw FormatError(row, "annotations out of order or duplicated");
    }
    set.annotations.push_back(std::move(a));
  }
  if (header.contains("count") && header["count"].get<std::size_t>() != set.annotations.size())
    throw FormatError(1, "header count does not match the number of annotations");
  return set;
}

void save(const AnnotationSet& set, const std::filesystem::path& path) {
  const std::string doc = serialize(set);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << doc;
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path.string() + ": " + ec.message());
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations(buf.str());
}

}  // namespace chronotate
