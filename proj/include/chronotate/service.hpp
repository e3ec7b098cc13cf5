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

// Filesystem-backed HTTP service over the annotation pipeline. One directory
// per project under the root:
//
//   <root>/<id>/project.json      project file ("rules" is always rules.rules)
//   <root>/<id>/rules.rules       stored rule text
//   <root>/<id>/annotations.jsonl last annotation document
//   <root>/<id>/<name>            inline files supplied at creation
//
// Annotate holds the project's writer lock for the whole run; a second
// annotate on the same project gets 409 instead of waiting. Reads take the
// project's data lock shared.

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace chronotate::service {

struct Options {
  std::filesystem::path root;
  std::optional<std::string> token;
  /// Called with the project id after the writer lock is taken, before the
  /// pipeline runs. Test seam.
  std::function<void(const std::string&)> annotate_hook;
};

struct Request {
  std::string method;  // GET, POST, PUT
  std::string path;
  std::string body;
  std::string authorization;  // raw Authorization header, may be empty
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

class Service {
 public:
  explicit Service(Options options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(const Request& request);

  /// Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); serve with listen_after_bind.
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace chronotate::service
