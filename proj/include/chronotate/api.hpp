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

// Machine-readable documents shared by the CLI and the HTTP service, so both
// surfaces emit byte-identical bodies for the same inputs.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronotate/annotator.hpp"
#include "chronotate/ontology.hpp"
#include "chronotate/rules.hpp"

namespace chronotate::api {

enum class ErrorCode {
  bad_request,
  unauthorized,
  route_not_found,
  project_not_found,
  project_exists,
  annotations_not_found,
  annotate_in_progress,
  rule_diagnostics,
  unknown_concept,
  internal_error,
};

std::string_view to_string(ErrorCode code);
int http_status(ErrorCode code);

struct ApiError {
  ErrorCode code = ErrorCode::internal_error;
  std::string message;
  std::optional<rules::SourceSpan> span;
};

/// {"v":1,"error":{"code":...,"message":...[,"span":{...}]}}
std::string error_json(const ApiError& error);

/// Parse + check. Syntax errors stop before checking.
std::vector<rules::Diagnostic> check_rule_text(std::string_view text, const DomainOntology& domain,
                                               const TimeOntology& time, const rules::EventRegistry& registry);

/// {"v":1,"ok":...,"diagnostics":[...]}
std::string diagnostics_json(std::span<const rules::Diagnostic> diagnostics);

/// Rule-diagnostic failure body for 422 responses.
std::string rule_failure_json(const std::string& message, std::span<const rules::Diagnostic> diagnostics);

std::string validation_json(const ValidationReport& report, const Ontology& ontology);

/// {"concept":..., "relation":..., "start_ms":..., "end_ms":...} or
/// {"concept":..., "relation":..., "other":...}. Throws Error.
TemporalQuery parse_query_json(std::string_view body);
std::string query_json(const QueryResult& result);

std::string consistency_json(const ConsistencyReport& report);

}  // namespace chronotate::api
