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

#include "chronotate/annotator.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chronotate {

using nlohmann::json;

PipelineError::PipelineError(std::string stage, const std::string& message,
                             std::vector<rules::Diagnostic> diagnostics, std::string file)
    : Error("stage=" + stage + ": " + message),
      stage_(std::move(stage)),
      diagnostics_(std::move(diagnostics)),
      file_(std::move(file)) {}

std::string annotation_id(std::string_view concept_name, const Interval& iv, const AttributeMap& attributes) {
  std::string bytes(concept_name);
  bytes += '\n' + std::to_string(iv.start_ms()) + '\n' + std::to_string(iv.end_ms());
  for (const auto& [k, v] : attributes) {
    bytes += '\n' + k + '=';
    bytes += "isd"[v.index()];
    bytes += format_literal(v);
  }
  return content_hash(bytes);
}

void normalize(std::vector<Annotation>& annotations) {
  std::stable_sort(annotations.begin(), annotations.end(), [](const Annotation& a, const Annotation& b) {
    if (a.interval.start() != b.interval.start()) return a.interval.start() < b.interval.start();
    if (a.interval.end() != b.interval.end()) return a.interval.end() < b.interval.end();
    if (a.concept_name != b.concept_name) return a.concept_name < b.concept_name;
    return a.id < b.id;
  });
  std::vector<Annotation> out;
  for (auto& a : annotations) {
    if (!out.empty() && out.back().id == a.id) {
      auto& prov = out.back().provenance;
      for (auto& p : a.provenance)
        if (std::find(prov.begin(), prov.end(), p) == prov.end()) prov.push_back(std::move(p));
      continue;
    }
    out.push_back(std::move(a));
  }
  annotations = std::move(out);
}

std::filesystem::path Project::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

namespace {

[[noreturn]] void project_error(const std::string& message) { throw PipelineError("project", message); }

std::string read_text(const std::filesystem::path& path, const std::string& stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError(stage, "cannot read " + path.string(), {}, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::filesystem::path> path_list(const json& doc, const char* key) {
  std::vector<std::filesystem::path> out;
  if (!doc.contains(key)) return out;
  const auto& v = doc[key];
  if (v.is_string()) {
    out.emplace_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (!item.is_string()) project_error(std::string("'") + key + "' entries must be strings");
      out.emplace_back(item.get<std::string>());
    }
  } else {
    project_error(std::string("'") + key + "' must be a string or a list of strings");
  }
  return out;
}

std::filesystem::path required_path(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string()) project_error(std::string("missing '") + key + "' path");
  return doc[key].get<std::string>();
}

}  // namespace

Project parse_project(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    project_error(std::string("project file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) project_error("project file must be a JSON object");
  if (!doc.contains("v") || doc["v"] != 1) project_error("project file must declare \"v\": 1");

  Project p;
  p.base_dir = base_dir;
  if (!doc.contains("id") || !doc["id"].is_string() || doc["id"].get<std::string>().empty())
    project_error("missing project 'id'");
  p.id = doc["id"].get<std::string>();
  p.feature_files = path_list(doc, "features");
  p.event_files = path_list(doc, "events");
  p.domain_ontology = required_path(doc, "domain");
  p.time_ontology = required_path(doc, "time");
  if (doc.contains("rules")) {
    if (!doc["rules"].is_string()) project_error("'rules' must be a path");
    p.rules_file = doc["rules"].get<std::string>();
  }
  if (doc.contains("fps")) {
    if (!doc["fps"].is_string()) project_error("'fps' must be a string such as \"25/1\"");
    try {
      p.fps = FrameRate::parse(doc["fps"].get<std::string>());
    } catch (const Error& e) {
      project_error(e.what());
    }
  }
  if (doc.contains("shots")) {
    const auto& s = doc["shots"];
    if (!s.is_object()) project_error("'shots' must be an object");
    if (s.contains("threshold")) {
      if (!s["threshold"].is_number()) project_error("shots.threshold must be a number");
      p.shot_params.threshold = s["threshold"].get<double>();
    }
    if (s.contains("min_frames")) {
      if (!s["min_frames"].is_number_integer()) project_error("shots.min_frames must be an integer");
      p.shot_params.min_shot_frames = s["min_frames"].get<std::int64_t>();
    }
  }
  if (!(p.shot_params.threshold >= 0.0)) project_error("shots.threshold must be non-negative");
  if (p.shot_params.min_shot_frames < 1) project_error("shots.min_frames must be at least 1");
  if (doc.contains("duration_tolerance_ms")) {
    if (!doc["duration_tolerance_ms"].is_number_integer() || doc["duration_tolerance_ms"].get<std::int64_t>() < 0)
      project_error("duration_tolerance_ms must be a non-negative integer");
    p.duration_tolerance_ms = doc["duration_tolerance_ms"].get<std::int64_t>();
  }
  if (doc.contains("limits")) {
    const auto& l = doc["limits"];
    if (l.contains("max_bindings")) p.limits.max_bindings = l["max_bindings"].get<std::size_t>();
    if (l.contains("max_candidates")) p.limits.max_candidates = l["max_candidates"].get<double>();
  }
  if (doc.contains("event_types")) {
    const auto& types = doc["event_types"];
    if (!types.is_object()) project_error("'event_types' must be an object");
    for (auto it = types.begin(); it != types.end(); ++it) {
      p.registry.declare_type(it.key());
      if (!it.value().is_object()) project_error("event type '" + it.key() + "' must map fields to types");
      for (auto f = it.value().begin(); f != it.value().end(); ++f) {
        auto vt = f.value().is_string() ? parse_value_type(f.value().get<std::string>()) : std::nullopt;
        if (!vt) project_error("field '" + it.key() + "." + f.key() + "' must be string, int or decimal");
        p.registry.declare_field(it.key(), f.key(), *vt);
      }
    }
  }
  return p;
}

Project load_project(const std::filesystem::path& path) {
  const std::string text = read_text(path, "project");
  return parse_project(text, path.parent_path());
}

ProjectOntologies load_ontologies(const Project& project) {
  auto load_onto = [&](const std::filesystem::path& rel) {
    const auto path = project.resolve(rel);
    const std::string text = read_text(path, "ontology");
    try {
      return load_ontology(text);
    } catch (const Error& e) {
      throw PipelineError("ontology", path.filename().string() + ": " + e.what(), {}, path.string());
    }
  };
  ProjectOntologies out;
  Ontology d = load_onto(project.domain_ontology);
  if (!std::holds_alternative<DomainOntology>(d)) throw PipelineError("ontology", "'domain' names a time ontology");
  out.domain = std::get<DomainOntology>(std::move(d));
  Ontology t = load_onto(project.time_ontology);
  if (!std::holds_alternative<TimeOntology>(t)) throw PipelineError("ontology", "'time' names a domain ontology");
  out.time = std::get<TimeOntology>(std::move(t));
  return out;
}

ProjectInputs prepare(const Project& project) {
  ProjectInputs in;
  {
    auto ontologies = load_ontologies(project);
    in.domain = std::move(ontologies.domain);
    in.time = std::move(ontologies.time);
  }

  if (project.rules_file) in.rules_text = read_text(project.resolve(*project.rules_file), "rules");

  std::vector<std::vector<Event>> sources;
  std::vector<FeatureStream> streams;
  for (const auto& rel : project.feature_files) {
    const auto path = project.resolve(rel);
    try {
      streams.push_back(ingest_features(path));
    } catch (const Error& e) {
      throw PipelineError("ingest", path.filename().string() + ": " + e.what(), {}, path.string());
    }
  }
  if (!streams.empty()) {
    in.fps = streams.front().fps;
    for (const auto& s : streams)
      if (!(s.fps == in.fps) || s.bins != streams.front().bins)
        throw PipelineError("ingest", "feature streams disagree on fps or bin count");
    if (project.fps && !(*project.fps == in.fps))
      throw PipelineError("ingest", "project fps " + project.fps->str() + " differs from feature stream fps " +
                                        in.fps.str());
  } else if (project.fps) {
    in.fps = *project.fps;
  } else {
    throw PipelineError("project", "no feature streams and no 'fps' declared");
  }

  for (std::size_t i = 0; i < streams.size(); ++i) {
    try {
      sources.push_back(detect_shots(streams[i], project.shot_params, project.feature_files[i].stem().string()));
    } catch (const Error& e) {
      throw PipelineError("detect", project.feature_files[i].filename().string() + ": " + e.what());
    }
  }
  for (const auto& rel : project.event_files) {
    const auto path = project.resolve(rel);
    try {
      sources.push_back(ingest_events(path));
    } catch (const Error& e) {
      throw PipelineError("ingest", path.filename().string() + ": " + e.what(), {}, path.string());
    }
  }

  in.timeline = merge_timeline(sources);
  std::vector<std::string> ids;
  for (const auto& e : in.timeline) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
    throw PipelineError("merge", "duplicate event id '" + *dup + "'");
  return in;
}

AnnotationSet materialize(const Project& project, const ProjectInputs& inputs,
                          const rules::EvaluationResult& result) {
  AnnotationSet set;
  set.project_id = project.id;
  set.fps = inputs.fps;
  set.domain = {inputs.domain.prefix, inputs.domain.version};
  set.time = {inputs.time.prefix, inputs.time.version};
  set.rules_hash = content_hash(inputs.rules_text);
  set.shot_params = project.shot_params;
  set.duration_tolerance_ms = project.duration_tolerance_ms;
  for (const auto& a : result.assertions) {
    Annotation ann;
    ann.id = annotation_id(a.concept_name, a.interval, a.attributes);
    ann.concept_name = a.concept_name;
    ann.interval = a.interval;
    ann.attributes = a.attributes;
    ann.provenance = a.provenance;
    set.annotations.push_back(std::move(ann));
  }
  normalize(set.annotations);
  return set;
}

AnnotationRun annotate(const Project& project) {
  ProjectInputs inputs = prepare(project);

  const std::string rules_name =
      project.rules_file ? project.rules_file->filename().string() : std::string("<no rules>");
  auto parsed = rules::parse_rules(inputs.rules_text);
  if (!parsed.ok())
    throw PipelineError("rules", std::to_string(parsed.diagnostics.size()) + " syntax diagnostic(s) in " + rules_name,
                        parsed.diagnostics, rules_name);
  auto checked = rules::check_rules(*parsed.rules, inputs.domain, inputs.time, project.registry);
  if (!checked.ok())
    throw PipelineError("rules", std::to_string(checked.diagnostics.size()) + " check diagnostic(s) in " + rules_name,
                        checked.diagnostics, rules_name);

  rules::EvaluationResult result;
  try {
    result = rules::evaluate(*checked.rules, inputs.timeline, inputs.domain, inputs.time, project.limits);
  } catch (const Error& e) {
    throw PipelineError("evaluate", e.what());
  }

  AnnotationRun run;
  run.annotations = materialize(project, inputs, result);
  run.timeline = std::move(inputs.timeline);
  run.evaluation_errors = std::move(result.errors);
  return run;
}

}  // namespace chronotate
