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

#include "chronotate/service.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <vector>

#include "chronotate/annotator.hpp"
#include "chronotate/api.hpp"
#include "httplib.h"
#include "json.hpp"

namespace chronotate::service {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using api::ErrorCode;

namespace {

constexpr const char* kJsonLines = "application/x-ndjson";
constexpr const char* kProjectFile = "project.json";
constexpr const char* kRulesFile = "rules.rules";
constexpr const char* kAnnotationsFile = "annotations.jsonl";

struct ProjectLocks {
  std::mutex writer;
  std::shared_mutex data;
};

Response error(ErrorCode code, const std::string& message) {
  return {api::http_status(code), "application/json", api::error_json({code, message, std::nullopt})};
}

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') return false;
  return true;
}

bool valid_file_name(const std::string& name) {
  if (name.empty() || name == "." || name == ".." || name == kProjectFile || name == kRulesFile ||
      name == kAnnotationsFile)
    return false;
  return name.find('/') == std::string::npos && name.find('\\') == std::string::npos;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

struct Service::Impl {
  Options options;
  std::mutex registry_mu;
  std::map<std::string, std::shared_ptr<ProjectLocks>> locks;
  httplib::Server server;

  std::shared_ptr<ProjectLocks> locks_for(const std::string& id) {
    std::lock_guard lock(registry_mu);
    auto& slot = locks[id];
    if (!slot) slot = std::make_shared<ProjectLocks>();
    return slot;
  }

  fs::path dir(const std::string& id) const { return options.root / id; }
  bool exists(const std::string& id) const { return fs::is_regular_file(dir(id) / kProjectFile); }
  Project project(const std::string& id) const { return load_project(dir(id) / kProjectFile); }

  Response create(const std::string& body);
  Response describe(const std::string& id);
  Response put_rules(const std::string& id, const std::string& body);
  Response check_rules(const std::string& id, const std::string& body);
  Response annotate_project(const std::string& id);
  Response annotations(const std::string& id);
  Response timeline(const std::string& id);
  Response query(const std::string& id, const std::string& body);
  Response route(const Request& request);
};

Response Service::Impl::create(const std::string& body) {
  ordered_json req;
  try {
    req = ordered_json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    return error(ErrorCode::bad_request, std::string("request body is not valid JSON: ") + e.what());
  }
  if (!req.is_object() || !req.contains("id") || !req["id"].is_string())
    return error(ErrorCode::bad_request, "request needs a string 'id'");
  const std::string id = req["id"].get<std::string>();
  if (!valid_id(id)) return error(ErrorCode::bad_request, "project id must be letters, digits, '-' or '_'");
  if (!req.contains("project") || !req["project"].is_object())
    return error(ErrorCode::bad_request, "request needs a 'project' object");
  std::string rules_text;
  if (req.contains("rules")) {
    if (!req["rules"].is_string()) return error(ErrorCode::bad_request, "'rules' must be rule text");
    rules_text = req["rules"].get<std::string>();
  }
  std::map<std::string, std::string> files;
  if (req.contains("files")) {
    if (!req["files"].is_object()) return error(ErrorCode::bad_request, "'files' must map names to text");
    for (auto it = req["files"].begin(); it != req["files"].end(); ++it) {
      if (!valid_file_name(it.key()) || !it.value().is_string())
        return error(ErrorCode::bad_request, "invalid inline file '" + it.key() + "'");
      files[it.key()] = it.value().get<std::string>();
    }
  }

  ordered_json doc;
  doc["v"] = 1;
  doc["id"] = id;
  for (auto it = req["project"].begin(); it != req["project"].end(); ++it)
    if (it.key() != "v" && it.key() != "id" && it.key() != "rules") doc[it.key()] = it.value();
  doc["rules"] = kRulesFile;

  {
    std::lock_guard lock(registry_mu);
    if (fs::exists(dir(id))) return error(ErrorCode::project_exists, "project '" + id + "' already exists");
    std::random_device rd;
    const fs::path staging = options.root / (".staging-" + id + "-" + std::to_string(rd()));
    fs::create_directories(staging);
    try {
      for (const auto& [name, text] : files) write_file(staging / name, text);
      write_file(staging / kRulesFile, rules_text);
      const std::string project_text = doc.dump(2) + "\n";
      write_file(staging / kProjectFile, project_text);
      load_ontologies(parse_project(project_text, staging));
    } catch (const Error& e) {
      fs::remove_all(staging);
      return error(ErrorCode::bad_request, e.what());
    }
    fs::rename(staging, dir(id));
  }
  Response r = describe(id);
  r.status = 201;
  return r;
}

Response Service::Impl::describe(const std::string& id) {
  auto locks = locks_for(id);
  std::shared_lock data(locks->data);
  ordered_json doc;
  doc["v"] = 1;
  doc["id"] = id;
  doc["project"] = ordered_json::parse(read_file(dir(id) / kProjectFile));
  doc["rules_hash"] = content_hash(read_file(dir(id) / kRulesFile));
  doc["annotated"] = fs::is_regular_file(dir(id) / kAnnotationsFile);
  return {200, "application/json", doc.dump() + "\n"};
}

Response Service::Impl::put_rules(const std::string& id, const std::string& body) {
  auto locks = locks_for(id);
  std::lock_guard writer(locks->writer);
  std::unique_lock data(locks->data);
  write_file(dir(id) / kRulesFile, body);
  ordered_json doc;
  doc["v"] = 1;
  doc["rules_hash"] = content_hash(body);
  return {200, "application/json", doc.dump() + "\n"};
}

Response Service::Impl::check_rules(const std::string& id, const std::string& body) {
  auto locks = locks_for(id);
  std::shared_lock data(locks->data);
  const Project p = project(id);
  const auto ontologies = load_ontologies(p);
  const auto diagnostics = api::check_rule_text(body, ontologies.domain, ontologies.time, p.registry);
  return {diagnostics.empty() ? 200 : 422, "application/json", api::diagnostics_json(diagnostics)};
}

Response Service::Impl::annotate_project(const std::string& id) {
  auto locks = locks_for(id);
  std::unique_lock writer(locks->writer, std::try_to_lock);
  if (!writer.owns_lock())
    return error(ErrorCode::annotate_in_progress, "an annotation run is already in progress for '" + id + "'");
  if (options.annotate_hook) options.annotate_hook(id);
  const AnnotationRun run = annotate(project(id));
  std::string doc = serialize(run.annotations);
  {
    std::unique_lock data(locks->data);
    write_file(dir(id) / kAnnotationsFile, doc);
  }
  return {200, kJsonLines, std::move(doc)};
}

Response Service::Impl::annotations(const std::string& id) {
  auto locks = locks_for(id);
  std::shared_lock data(locks->data);
  const fs::path path = dir(id) / kAnnotationsFile;
  if (!fs::is_regular_file(path)) return error(ErrorCode::annotations_not_found, "project '" + id + "' has no annotations yet");
  return {200, kJsonLines, read_file(path)};
}

Response Service::Impl::timeline(const std::string& id) {
  auto locks = locks_for(id);
  std::shared_lock data(locks->data);
  return {200, kJsonLines, serialize_events(prepare(project(id)).timeline)};
}

Response Service::Impl::query(const std::string& id, const std::string& body) {
  const TemporalQuery q = api::parse_query_json(body);
  auto locks = locks_for(id);
  std::shared_lock data(locks->data);
  const fs::path path = dir(id) / kAnnotationsFile;
  if (!fs::is_regular_file(path)) return error(ErrorCode::annotations_not_found, "project '" + id + "' has no annotations yet");
  const AnnotationSet set = load_annotations(path);
  const auto ontologies = load_ontologies(project(id));
  return {200, "application/json", api::query_json(chronotate::query(set, q, &ontologies.domain))};
}

Response Service::Impl::route(const Request& request) {
  if (options.token && request.authorization != "Bearer " + *options.token)
    return error(ErrorCode::unauthorized, "missing or invalid bearer token");
  const auto seg = split_path(request.path);
  const std::string& m = request.method;
  if (seg.empty() || seg[0] != "projects" || seg.size() > 3)
    return error(ErrorCode::route_not_found, "no route for " + m + " " + request.path);
  if (seg.size() == 1) {
    if (m == "POST") return create(request.body);
    return error(ErrorCode::route_not_found, "no route for " + m + " " + request.path);
  }
  const std::string& id = seg[1];
  if (!valid_id(id) || !exists(id)) return error(ErrorCode::project_not_found, "project '" + id + "' not found");
  if (seg.size() == 2 && m == "GET") return describe(id);
  if (seg.size() == 3) {
    const std::string& what = seg[2];
    if (what == "rules" && m == "PUT") return put_rules(id, request.body);
    if (what == "rules:check" && m == "POST") return check_rules(id, request.body);
    if (what == "annotate" && m == "POST") return annotate_project(id);
    if (what == "annotations" && m == "GET") return annotations(id);
    if (what == "timeline" && m == "GET") return timeline(id);
    if (what == "query" && m == "POST") return query(id, request.body);
  }
  return error(ErrorCode::route_not_found, "no route for " + m + " " + request.path);
}

Service::Service(Options options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    const Response out = handle({req.method, req.path, req.body, req.get_header_value("Authorization")});
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(R"(/.*)", adapt);
  impl_->server.Post(R"(/.*)", adapt);
  impl_->server.Put(R"(/.*)", adapt);
}

Service::~Service() { stop(); }

Response Service::handle(const Request& request) {
  try {
    return impl_->route(request);
  } catch (const PipelineError& e) {
    if (e.stage() == "rules") return {422, "application/json", api::rule_failure_json(e.what(), e.diagnostics())};
    return error(ErrorCode::bad_request, e.what());
  } catch (const UnknownConcept& e) {
    return error(ErrorCode::unknown_concept, e.what());
  } catch (const IoError& e) {
    return error(ErrorCode::internal_error, e.what());
  } catch (const Error& e) {
    return error(ErrorCode::bad_request, e.what());
  } catch (const std::exception& e) {
    return error(ErrorCode::internal_error, e.what());
  }
}

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace chronotate::service
