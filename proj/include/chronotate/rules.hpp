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

// The meta-rule language: parsing with diagnostics, canonical printing,
// checking against ontologies and the event registry, and evaluation over a
// merged event timeline.
//
//   rule "goal" priority 1 {
//     when ocr_text t
//     where t.text == "GOAL"
//     annotate soccer:Goal(interval = t)
//   }

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronotate/media.hpp"
#include "chronotate/ontology.hpp"
#include "chronotate/rules/ast.hpp"

namespace chronotate::rules {

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string code;  // e.g. "syntax_error", "unknown_concept"
  std::string message;
  SourceSpan span;
  std::vector<std::string> expected;  // syntax errors only
};

std::string_view to_string(Diagnostic::Severity s);

/// `<file>:<line>:<col>: <severity>: <message>`
std::string format_diagnostic(const Diagnostic& d, std::string_view file);

struct ParseResult {
  std::optional<RuleSet> rules;  // absent whenever diagnostics is non-empty
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return rules.has_value(); }
};

/// Never fails fast where recovery is possible: a broken rule is skipped up to
/// the next `rule` keyword and parsing continues.
ParseResult parse_rules(std::string_view text);

/// Canonical text. parse_rules(pretty_print(rs)) == rs, minimal parentheses.
std::string pretty_print(const RuleSet& rs);
std::string pretty_print(const Expr& e);

/// Known event types and their attribute schemas. Every type also exposes the
/// built-in fields id (string), type (string) and confidence (decimal).
class EventRegistry {
 public:
  /// shot, ocr_text and template_match.
  static EventRegistry defaults();

  void declare_type(const std::string& type);
  void declare_field(const std::string& type, const std::string& field, ValueType vt);

  bool has_type(std::string_view type) const;
  std::optional<ValueType> field_type(std::string_view type, std::string_view field) const;
  const std::map<std::string, std::map<std::string, ValueType>, std::less<>>& types() const { return types_; }

 private:
  std::map<std::string, std::map<std::string, ValueType>, std::less<>> types_;
};

/// A rule set that passed check_rules against specific ontologies.
class CheckedRuleSet {
 public:
  const RuleSet& rules() const { return rules_; }
  const EventRegistry& registry() const { return registry_; }

 private:
  friend struct CheckAccess;
  RuleSet rules_;
  EventRegistry registry_;
};

struct CheckResult {
  std::optional<CheckedRuleSet> rules;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return rules.has_value(); }
};

CheckResult check_rules(const RuleSet& rs, const DomainOntology& domain, const TimeOntology& time,
                        const EventRegistry& registry);

struct Provenance {
  std::string rule;
  std::vector<std::string> event_ids;  // in binding order
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Assertion {
  std::string concept_name;
  Interval interval{0, 1};
  AttributeMap attributes;
  std::vector<Provenance> provenance;
  friend bool operator==(const Assertion&, const Assertion&) = default;
};

/// Runtime fault for one binding; the binding is skipped.
struct EvaluationError {
  std::string rule;
  std::vector<std::string> event_ids;
  std::string message;
};

class ComplexityLimitExceeded : public Error {
 public:
  using Error::Error;
};

struct EvaluationLimits {
  std::size_t max_bindings = 4;
  double max_candidates = 1e8;
};

struct EvaluationResult {
  std::vector<Assertion> assertions;
  std::vector<EvaluationError> errors;
};

/// Every assignment of timeline events to bindings whose guard holds yields
/// one assertion. Output is ordered by (priority desc, rule order, binding
/// tuple in timeline order); equal assertions collapse with merged provenance.
/// Throws ComplexityLimitExceeded before evaluating a rule over the cap.
EvaluationResult evaluate(const CheckedRuleSet& rs, std::span<const Event> timeline,
                          const DomainOntology& domain, const TimeOntology& time,
                          const EvaluationLimits& limits = {});

}  // namespace chronotate::rules
