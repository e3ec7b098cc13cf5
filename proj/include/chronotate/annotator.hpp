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

// The annotation pipeline: project description, annotate (ingest, detect,
// merge, evaluate, deduplicate, sort), the persisted annotation document,
// temporal queries, and time-ontology consistency checks.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronotate/media.hpp"
#include "chronotate/ontology.hpp"
#include "chronotate/rules.hpp"
#include "chronotate/temporal.hpp"

namespace chronotate {

/// Failure of one pipeline stage: project, ontology, rules, ingest, detect,
/// merge or evaluate.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& message,
                std::vector<rules::Diagnostic> diagnostics = {}, std::string file = {});
  const std::string& stage() const { return stage_; }
  const std::vector<rules::Diagnostic>& diagnostics() const { return diagnostics_; }
  const std::string& file() const { return file_; }

 private:
  std::string stage_;
  std::vector<rules::Diagnostic> diagnostics_;
  std::string file_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnknownConcept : public Error {
 public:
  explicit UnknownConcept(const std::string& name) : Error("unknown concept '" + name + "'") {}
};

struct Annotation {
  std::string id;
  std::string concept_name;
  Interval interval{0, 1};
  AttributeMap attributes;
  std::vector<rules::Provenance> provenance;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Content hash of concept, interval and attributes.
std::string annotation_id(std::string_view concept_name, const Interval& iv, const AttributeMap& attributes);

struct OntologyPin {
  std::string prefix;
  std::string version;
  friend bool operator==(const OntologyPin&, const OntologyPin&) = default;
};

struct AnnotationSet {
  std::string project_id;
  FrameRate fps;
  OntologyPin domain;
  OntologyPin time;
  std::string rules_hash;
  ShotParams shot_params;
  std::int64_t duration_tolerance_ms = 0;
  /// Sorted by (start, end, concept, id); ids unique.
  std::vector<Annotation> annotations;
  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

/// Sorts and merges equal ids (provenance concatenated, duplicates dropped).
void normalize(std::vector<Annotation>& annotations);

/// Project file (JSON, "v": 1); relative paths resolve against base_dir.
struct Project {
  std::string id;
  std::filesystem::path base_dir;
  std::vector<std::filesystem::path> feature_files;
  std::vector<std::filesystem::path> event_files;
  std::filesystem::path domain_ontology;
  std::filesystem::path time_ontology;
  std::optional<std::filesystem::path> rules_file;
  std::optional<FrameRate> fps;
  ShotParams shot_params;
  std::int64_t duration_tolerance_ms = 0;
  rules::EvaluationLimits limits;
  rules::EventRegistry registry = rules::EventRegistry::defaults();

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Throws PipelineError(stage="project").
Project parse_project(std::string_view json_text, const std::filesystem::path& base_dir);
Project load_project(const std::filesystem::path& path);

struct ProjectInputs {
  DomainOntology domain;
  TimeOntology time;
  std::string rules_text;
  std::vector<Event> timeline;
  FrameRate fps;
};

struct ProjectOntologies {
  DomainOntology domain;
  TimeOntology time;
};

/// Throws PipelineError(stage="ontology").
ProjectOntologies load_ontologies(const Project& project);

/// Loads ontologies and rule text, ingests and detects, merges. Throws
/// PipelineError tagged with the failing stage.
ProjectInputs prepare(const Project& project);

struct AnnotationRun {
  AnnotationSet annotations;
  std::vector<Event> timeline;
  std::vector<rules::EvaluationError> evaluation_errors;
};

AnnotationRun annotate(const Project& project);

/// Builds the annotation set from an evaluation over prepared inputs.
AnnotationSet materialize(const Project& project, const ProjectInputs& inputs,
                          const rules::EvaluationResult& result);

/// Canonical document: header line then one JSON record per annotation, each
/// newline-terminated. parse_annotations(serialize(s)) == s and the bytes are
/// stable.
std::string serialize(const AnnotationSet& set);
/// Throws FormatError (row 1 for header/version problems).
AnnotationSet parse_annotations(std::string_view text);

void save(const AnnotationSet& set, const std::filesystem::path& path);
AnnotationSet load_annotations(const std::filesystem::path& path);

struct TemporalQuery {
  std::string concept_name;
  AllenRelation relation = AllenRelation::equals;
  /// Interval form when set, otherwise pair form against other_concept.
  std::optional<Interval> reference;
  std::optional<std::string> other_concept;
};

struct QueryResult {
  bool pair_form = false;
  std::vector<Annotation> matches;
  std::vector<std::pair<Annotation, Annotation>> pairs;
};

/// Exact concept match. With a domain ontology, filter concepts must resolve;
/// without one, their prefix must be the set's pinned domain prefix. Throws
/// UnknownConcept.
QueryResult query(const AnnotationSet& set, const TemporalQuery& q, const DomainOntology* domain = nullptr);

struct DurationViolation {
  std::string annotation_id;
  std::string concept_name;
  std::string time_class;
  DurationVerdict verdict;
};

struct OrderingViolation {
  std::string time_class;  // the class whose parts impose the order
  std::string first_id;
  std::string second_id;
  AllenRelation required;
  AllenRelation actual;
};

struct ConsistencyReport {
  bool network_consistent = true;
  std::vector<DurationViolation> duration_violations;
  std::vector<OrderingViolation> ordering_violations;
  std::size_t linked = 0;    // annotations whose concept links a time class
  std::size_t unlinked = 0;  // skipped: no link or link not in the time ontology

  bool ok() const {
    return network_consistent && duration_violations.empty() && ordering_violations.empty();
  }
};

ConsistencyReport consistency_check(const AnnotationSet& set, const TimeOntology& time,
                                    const DomainOntology& domain, std::int64_t tolerance_ms = 0);

}  // namespace chronotate
