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

#include "chronotate/api.hpp"

#include "json.hpp"

namespace chronotate::api {

using nlohmann::ordered_json;

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_request: return "bad_request";
    case ErrorCode::unauthorized: return "unauthorized";
    case ErrorCode::route_not_found: return "route_not_found";
    case ErrorCode::project_not_found: return "project_not_found";
    case ErrorCode::project_exists: return "project_exists";
    case ErrorCode::annotations_not_found: return "annotations_not_found";
    case ErrorCode::annotate_in_progress: return "annotate_in_progress";
    case ErrorCode::rule_diagnostics: return "rule_diagnostics";
    case ErrorCode::unknown_concept: return "unknown_concept";
    case ErrorCode::internal_error: return "internal_error";
  }
  return "internal_error";
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_request: return 400;
    case ErrorCode::unauthorized: return 401;
    case ErrorCode::route_not_found: return 404;
    case ErrorCode::project_not_found: return 404;
    case ErrorCode::annotations_not_found: return 404;
    case ErrorCode::project_exists: return 409;
    case ErrorCode::annotate_in_progress: return 409;
    case ErrorCode::rule_diagnostics: return 422;
    case ErrorCode::unknown_concept: return 422;
    case ErrorCode::internal_error: return 500;
  }
  return 500;
}

namespace {

ordered_json span_json(const rules::SourceSpan& s) {
  return {{"line", s.line}, {"col", s.col}, {"end_line", s.end_line}, {"end_col", s.end_col}};
}

ordered_json diagnostic_json(const rules::Diagnostic& d) {
  ordered_json j;
  j["severity"] = rules::to_string(d.severity);
  j["code"] = d.code;
  j["message"] = d.message;
  j["span"] = span_json(d.span);
  if (!d.expected.empty()) j["expected"] = d.expected;
  return j;
}

ordered_json diagnostics_array(std::span<const rules::Diagnostic> diagnostics) {
  ordered_json arr = ordered_json::array();
  for (const auto& d : diagnostics) arr.push_back(diagnostic_json(d));
  return arr;
}

ordered_json literal_json(const Literal& v) {
  return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

ordered_json annotation_json(const Annotation& a) {
  ordered_json j;
  j["id"] = a.id;
  j["concept"] = a.concept_name;
  j["start_ms"] = a.interval.start_ms();
  j["end_ms"] = a.interval.end_ms();
  ordered_json attrs = ordered_json::object();
  for (const auto& [k, v] : a.attributes) attrs[k] = literal_json(v);
  j["attributes"] = std::move(attrs);
  return j;
}

}  // namespace

std::string error_json(const ApiError& error) {
  ordered_json e;
  e["code"] = to_string(error.code);
  e["message"] = error.message;
  if (error.span) e["span"] = span_json(*error.span);
  ordered_json doc;
  doc["v"] = 1;
  doc["error"] = std::move(e);
  return doc.dump() + "\n";
}

std::vector<rules::Diagnostic> check_rule_text(std::string_view text, const DomainOntology& domain,
                                               const TimeOntology& time, const rules::EventRegistry& registry) {
  auto parsed = rules::parse_rules(text);
  if (!parsed.ok()) return parsed.diagnostics;
  return rules::check_rules(*parsed.rules, domain, time, registry).diagnostics;
}

std::string diagnostics_json(std::span<const rules::Diagnostic> diagnostics) {
  ordered_json doc;
  doc["v"] = 1;
  doc["ok"] = diagnostics.empty();
  doc["diagnostics"] = diagnostics_array(diagnostics);
  return doc.dump() + "\n";
}

std::string rule_failure_json(const std::string& message, std::span<const rules::Diagnostic> diagnostics) {
  ordered_json doc;
  doc["v"] = 1;
  doc["error"] = {{"code", to_string(ErrorCode::rule_diagnostics)}, {"message", message}};
  doc["diagnostics"] = diagnostics_array(diagnostics);
  return doc.dump() + "\n";
}

std::string validation_json(const ValidationReport& report, const Ontology& ontology) {
  ordered_json doc;
  doc["v"] = 1;
  doc["kind"] = std::holds_alternative<DomainOntology>(ontology) ? "domain" : "time";
  std::visit(
      [&](const auto& o) {
        doc["prefix"] = o.prefix;
        doc["version"] = o.version;
      },
      ontology);
  doc["ok"] = report.empty();
  ordered_json issues = ordered_json::array();
  for (const auto& i : report.issues) {
    const char* kind = i.kind == ValidationIssue::Kind::cycle              ? "cycle"
                       : i.kind == ValidationIssue::Kind::duplicate_name ? "duplicate_name"
                                                                         : "dangling_reference";
    issues.push_back({{"kind", kind}, {"names", i.names}, {"message", i.message}});
  }
  doc["issues"] = std::move(issues);
  return doc.dump() + "\n";
}

TemporalQuery parse_query_json(std::string_view body) {
  ordered_json j;
  try {
    j = ordered_json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("query body is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("query body must be a JSON object");
  TemporalQuery q;
  if (!j.contains("concept") || !j["concept"].is_string()) throw Error("query needs a 'concept' string");
  q.concept_name = j["concept"].get<std::string>();
  if (!j.contains("relation") || !j["relation"].is_string()) throw Error("query needs a 'relation' string");
  auto rel = parse_relation(j["relation"].get<std::string>());
  if (!rel) throw Error("unknown relation '" + j["relation"].get<std::string>() + "'");
  q.relation = *rel;
  if (j.contains("other")) {
    if (!j["other"].is_string()) throw Error("'other' must be a concept name");
    q.other_concept = j["other"].get<std::string>();
  } else {
    if (!j.contains("start_ms") || !j.contains("end_ms") || !j["start_ms"].is_number_integer() ||
        !j["end_ms"].is_number_integer())
      throw Error("interval query needs integer 'start_ms' and 'end_ms'");
    q.reference = Interval(j["start_ms"].get<std::int64_t>(), j["end_ms"].get<std::int64_t>());
  }
  return q;
}

std::string query_json(const QueryResult& result) {
  ordered_json doc;
  doc["v"] = 1;
  doc["form"] = result.pair_form ? "pair" : "interval";
  ordered_json items = ordered_json::array();
  if (result.pair_form) {
    for (const auto& [a, b] : result.pairs) items.push_back({annotation_json(a), annotation_json(b)});
  } else {
    for (const auto& a : result.matches) items.push_back(annotation_json(a));
  }
  doc["count"] = items.size();
  doc["results"] = std::move(items);
  return doc.dump() + "\n";
}

std::string consistency_json(const ConsistencyReport& report) {
  ordered_json doc;
  doc["v"] = 1;
  doc["ok"] = report.ok();
  doc["network_consistent"] = report.network_consistent;
  ordered_json durations = ordered_json::array();
  for (const auto& d : report.duration_violations)
    durations.push_back({{"annotation", d.annotation_id},
                         {"concept", d.concept_name},
                         {"time_class", d.time_class},
                         {"duration_ms", d.verdict.duration_ms},
                         {"min_ms", d.verdict.bounds.min_ms},
                         {"max_ms", d.verdict.bounds.max_ms},
                         {"deviation_ms", d.verdict.deviation_ms}});
  doc["duration_violations"] = std::move(durations);
  ordered_json orderings = ordered_json::array();
  for (const auto& o : report.ordering_violations)
    orderings.push_back({{"time_class", o.time_class},
                         {"first", o.first_id},
                         {"second", o.second_id},
                         {"required", to_string(o.required)},
                         {"actual", to_string(o.actual)}});
  doc["ordering_violations"] = std::move(orderings);
  doc["linked"] = report.linked;
  doc["unlinked"] = report.unlinked;
  return doc.dump() + "\n";
}

}  // namespace chronotate::api
