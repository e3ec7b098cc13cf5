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

// chronotate command-line interface.
//
// Exit status: 0 success, 1 domain error (diagnostics on stderr), 2 usage
// error. With --format json exactly one document goes to stdout.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chronotate/annotator.hpp"
#include "chronotate/api.hpp"
#include "chronotate/service.hpp"
#include "json.hpp"

namespace {

using namespace chronotate;
namespace fs = std::filesystem;

bool json_mode = false;

int fail(const std::string& message, std::optional<rules::SourceSpan> span = std::nullopt) {
  std::cerr << "error: " << message << "\n";
  if (json_mode) std::cout << api::error_json({api::ErrorCode::bad_request, message, span});
  return 1;
}

int report_diagnostics(const std::vector<rules::Diagnostic>& diags, const std::string& file) {
  for (const auto& d : diags) std::cerr << rules::format_diagnostic(d, file) << "\n";
  return diags.empty() ? 0 : 1;
}

template <typename T>
T load_kind(const std::string& path, const char* want) {
  Ontology o = load_ontology_file(path);
  if (!std::holds_alternative<T>(o)) throw Error(path + " is not a " + want + " ontology");
  return std::get<T>(std::move(o));
}

int ontology_validate(const std::string& path) {
  std::string text;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  Ontology o;
  try {
    o = parse_ontology(text);
  } catch (const SyntaxError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.col() << ": error: " << e.detail() << "\n";
    if (json_mode)
      std::cout << api::error_json({api::ErrorCode::bad_request, e.detail(),
                                    rules::SourceSpan{e.line(), e.col(), e.line(), e.col()}});
    return 1;
  }
  const ValidationReport report = validate(o);
  for (const auto& issue : report.issues) std::cerr << path << ": error: " << issue.message << "\n";
  if (json_mode) {
    std::cout << api::validation_json(report, o);
  } else if (report.empty()) {
    std::visit(
        [&](const auto& x) {
          std::cout << path << ": ok (" << x.prefix << " " << x.version << ")\n";
        },
        o);
  }
  return report.empty() ? 0 : 1;
}

int rules_check(const std::string& path, const std::string& domain_path, const std::string& time_path,
                const std::string& project_path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto domain = load_kind<DomainOntology>(domain_path, "domain");
  const auto time = load_kind<TimeOntology>(time_path, "time");
  const auto registry = project_path.empty() ? rules::EventRegistry::defaults() : load_project(project_path).registry;
  const auto diags = api::check_rule_text(buf.str(), domain, time, registry);
  report_diagnostics(diags, path);
  if (json_mode)
    std::cout << api::diagnostics_json(diags);
  else if (diags.empty())
    std::cout << path << ": ok\n";
  return diags.empty() ? 0 : 1;
}

int annotate_cmd(const std::string& project_path, const std::string& out) {
  const Project project = load_project(project_path);
  AnnotationRun run;
  try {
    run = annotate(project);
  } catch (const PipelineError& e) {
    if (e.stage() != "rules") throw;
    report_diagnostics(e.diagnostics(), project.rules_file ? project.resolve(*project.rules_file).string() : "");
    std::cerr << "error: " << e.what() << "\n";
    if (json_mode) std::cout << api::rule_failure_json(e.what(), e.diagnostics());
    return 1;
  }
  for (const auto& err : run.evaluation_errors)
    std::cerr << "warning: rule \"" << err.rule << "\": " << err.message << "\n";
  const std::string doc = serialize(run.annotations);
  if (out.empty()) {
    std::cout << doc;
    return 0;
  }
  save(run.annotations, out);
  if (json_mode) {
    nlohmann::ordered_json summary;
    summary["v"] = 1;
    summary["out"] = out;
    summary["count"] = run.annotations.annotations.size();
    summary["evaluation_errors"] = run.evaluation_errors.size();
    std::cout << summary.dump() << "\n";
  } else {
    std::cout << "wrote " << run.annotations.annotations.size() << " annotations to " << out << "\n";
  }
  return 0;
}

int query_cmd(const std::string& annotations_path, TemporalQuery q, const std::string& domain_path) {
  const AnnotationSet set = load_annotations(annotations_path);
  std::optional<DomainOntology> domain;
  if (!domain_path.empty()) domain = load_kind<DomainOntology>(domain_path, "domain");
  QueryResult result;
  try {
    result = query(set, q, domain ? &*domain : nullptr);
  } catch (const UnknownConcept& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (json_mode) std::cout << api::error_json({api::ErrorCode::unknown_concept, e.what(), std::nullopt});
    return 1;
  }
  if (json_mode) {
    std::cout << api::query_json(result);
    return 0;
  }
  auto line = [](const Annotation& a) { return a.concept_name + " " + to_string(a.interval) + " " + a.id; };
  if (result.pair_form)
    for (const auto& [a, b] : result.pairs) std::cout << line(a) << "  " << line(b) << "\n";
  else
    for (const auto& a : result.matches) std::cout << line(a) << "\n";
  return 0;
}

int shots_cmd(const std::string& features, double threshold, std::int64_t min_frames) {
  const FeatureStream stream = ingest_features(features);
  const auto shots = detect_shots(stream, {threshold, min_frames}, fs::path(features).stem().string());
  if (json_mode) {
    std::cout << serialize_events(shots);
    return 0;
  }
  for (const auto& s : shots) std::cout << s.id << " " << to_string(s.interval) << "\n";
  return 0;
}

int timeline_cmd(const std::string& project_path) {
  const auto timeline = prepare(load_project(project_path)).timeline;
  if (json_mode) {
    std::cout << serialize_events(timeline);
    return 0;
  }
  for (const auto& e : timeline) std::cout << e.type << " " << e.id << " " << to_string(e.interval) << "\n";
  return 0;
}

int consistency_cmd(const std::string& annotations_path, const std::string& domain_path,
                    const std::string& time_path, std::int64_t tolerance) {
  const AnnotationSet set = load_annotations(annotations_path);
  const auto domain = load_kind<DomainOntology>(domain_path, "domain");
  const auto time = load_kind<TimeOntology>(time_path, "time");
  const ConsistencyReport report = consistency_check(set, time, domain, tolerance);
  for (const auto& d : report.duration_violations)
    std::cerr << "error: " << d.concept_name << " " << d.annotation_id << " lasts " << d.verdict.duration_ms
              << " ms, outside " << d.time_class << " by " << d.verdict.deviation_ms << " ms\n";
  for (const auto& o : report.ordering_violations)
    std::cerr << "error: " << o.first_id << " must be " << to_string(o.required) << " " << o.second_id
              << " (" << o.time_class << "), found " << to_string(o.actual) << "\n";
  if (json_mode)
    std::cout << api::consistency_json(report);
  else if (report.ok())
    std::cout << "consistent: " << report.linked << " linked, " << report.unlinked << " unlinked\n";
  return report.ok() ? 0 : 1;
}

int serve_cmd(const std::string& bind, std::string root, std::string token) {
  if (root.empty())
    if (const char* env = std::getenv("CHRONOTATE_ROOT")) root = env;
  if (token.empty())
    if (const char* env = std::getenv("CHRONOTATE_TOKEN")) token = env;
  if (root.empty()) return fail("no project root: pass --root or set CHRONOTATE_ROOT");
  if (!fs::is_directory(root)) return fail("project root " + root + " is not a directory");
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) return fail("--bind must be host:port");
  const std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    return fail("--bind must be host:port");
  }
  service::Service svc({root, token.empty() ? std::nullopt : std::optional<std::string>(token), {}});
  std::cerr << "serving " << root << " on " << host << ":" << port << "\n";
  if (!svc.listen(host, port)) return fail("cannot bind " + bind);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based temporal video annotation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::function<int()> action;

  auto* ontology = app.add_subcommand("ontology", "Ontology tools");
  ontology->require_subcommand(1);
  std::string onto_file;
  auto* validate_cmd = ontology->add_subcommand("validate", "Parse and validate an ontology file");
  validate_cmd->add_option("file", onto_file)->required();
  validate_cmd->callback([&] { action = [&] { return ontology_validate(onto_file); }; });

  auto* rules_cmd = app.add_subcommand("rules", "Rule tools");
  rules_cmd->require_subcommand(1);
  std::string rules_file, domain_file, time_file, registry_project;
  auto* check = rules_cmd->add_subcommand("check", "Parse and check a rule file");
  check->add_option("file", rules_file)->required();
  check->add_option("--domain", domain_file, "Domain ontology")->required();
  check->add_option("--time", time_file, "Time ontology")->required();
  check->add_option("--project", registry_project, "Project file supplying event types");
  check->callback([&] { action = [&] { return rules_check(rules_file, domain_file, time_file, registry_project); }; });

  std::string project_file, out_file;
  auto* annotate_sc = app.add_subcommand("annotate", "Run the annotation pipeline");
  annotate_sc->add_option("--project", project_file, "Project file")->required();
  annotate_sc->add_option("--out", out_file, "Annotation document to write (stdout if omitted)");
  annotate_sc->callback([&] { action = [&] { return annotate_cmd(project_file, out_file); }; });

  std::string ann_file, q_concept, q_relation, q_other, q_domain;
  std::optional<std::int64_t> q_start, q_end;
  auto* query_sc = app.add_subcommand("query", "Temporal query over an annotation document");
  query_sc->add_option("--annotations", ann_file, "Annotation document")->required();
  query_sc->add_option("--concept", q_concept, "Concept to select")->required();
  query_sc->add_option("--relation", q_relation, "Allen relation")->required();
  auto* start_opt = query_sc->add_option("--start", q_start, "Reference interval start (ms)");
  auto* end_opt = query_sc->add_option("--end", q_end, "Reference interval end (ms)");
  auto* other_opt = query_sc->add_option("--other", q_other, "Second concept (pair form)");
  query_sc->add_option("--domain", q_domain, "Domain ontology for concept resolution");
  start_opt->needs(end_opt);
  end_opt->needs(start_opt);
  other_opt->excludes(start_opt)->excludes(end_opt);
  query_sc->callback([&] {
    auto rel = parse_relation(q_relation);
    if (!rel) throw CLI::ValidationError("--relation", "unknown relation '" + q_relation + "'");
    if (!q_start && q_other.empty()) throw CLI::ValidationError("query", "give --start/--end or --other");
    action = [&, rel] {
      TemporalQuery q;
      q.concept_name = q_concept;
      q.relation = *rel;
      if (q_start) {
        try {
          q.reference = Interval(*q_start, *q_end);
        } catch (const Error& e) {
          return fail(e.what());
        }
      } else {
        q.other_concept = q_other;
      }
      return query_cmd(ann_file, q, q_domain);
    };
  });

  std::string features_file;
  double threshold = ShotParams{}.threshold;
  std::int64_t min_frames = ShotParams{}.min_shot_frames;
  auto* shots_sc = app.add_subcommand("shots", "Detect shots in a feature stream");
  shots_sc->add_option("--features", features_file, "Feature stream")->required();
  shots_sc->add_option("--threshold", threshold, "Histogram distance threshold")->check(CLI::Range(0.0, 1.0));
  shots_sc->add_option("--min-frames", min_frames, "Minimum shot length in frames")->check(CLI::PositiveNumber);
  shots_sc->callback([&] { action = [&] { return shots_cmd(features_file, threshold, min_frames); }; });

  std::string timeline_project;
  auto* timeline_sc = app.add_subcommand("timeline", "Print the merged event timeline of a project");
  timeline_sc->add_option("--project", timeline_project, "Project file")->required();
  timeline_sc->callback([&] { action = [&] { return timeline_cmd(timeline_project); }; });

  std::string c_ann, c_domain, c_time;
  std::int64_t c_tolerance = 0;
  auto* consistency_sc = app.add_subcommand("consistency", "Check annotations against the time ontology");
  consistency_sc->add_option("--annotations", c_ann, "Annotation document")->required();
  consistency_sc->add_option("--domain", c_domain, "Domain ontology")->required();
  consistency_sc->add_option("--time", c_time, "Time ontology")->required();
  consistency_sc->add_option("--tolerance", c_tolerance, "Duration tolerance (ms)")->check(CLI::NonNegativeNumber);
  consistency_sc->callback([&] { action = [&] { return consistency_cmd(c_ann, c_domain, c_time, c_tolerance); }; });

  std::string bind = "127.0.0.1:8080", root, token;
  auto* serve_sc = app.add_subcommand("serve", "Run the HTTP service");
  serve_sc->add_option("--bind", bind, "host:port");
  serve_sc->add_option("--root", root, "Project root (default $CHRONOTATE_ROOT)");
  serve_sc->add_option("--token", token, "Bearer token (default $CHRONOTATE_TOKEN)");
  serve_sc->callback([&] { action = [&] { return serve_cmd(bind, root, token); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  json_mode = format == "json";
  try {
    return action();
  } catch (const PipelineError& e) {
    return fail(e.what());
  } catch (const SyntaxError& e) {
    return fail(e.what(), rules::SourceSpan{e.line(), e.col(), e.line(), e.col()});
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}
