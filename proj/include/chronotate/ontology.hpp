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

// Domain and time ontologies: a small line-oriented document format, loading
// with full reference resolution, structural validation, lookup, and duration
// axiom checks.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chronotate/common.hpp"
#include "chronotate/temporal.hpp"

namespace chronotate {

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, const std::string& message);
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int col_;
  std::string detail_;
};

class UnresolvedReference : public Error {
 public:
  explicit UnresolvedReference(std::string name, const std::string& context = {});
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class CyclicDefinition : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  explicit NotFound(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class NoDurationAxiom : public Error {
 public:
  explicit NoDurationAxiom(const std::string& class_name);
};

enum class ValueType { string, integer, decimal };

std::string_view to_string(ValueType t);
std::optional<ValueType> parse_value_type(std::string_view keyword);

/// "prefix:Local" → {"prefix", "Local"}; no colon → {"", name}.
std::pair<std::string_view, std::string_view> split_qualified(std::string_view name);

struct PropertyDecl {
  std::string name;
  ValueType type = ValueType::string;
  friend bool operator==(const PropertyDecl&, const PropertyDecl&) = default;
};

struct Concept {
  std::string name;                  // qualified
  std::vector<std::string> parents;  // qualified
  std::vector<PropertyDecl> properties;
  std::optional<std::string> timeclass;  // qualified name in a time ontology
  friend bool operator==(const Concept&, const Concept&) = default;
};

struct Individual {
  std::string name;     // qualified
  std::string concept_name;  // qualified
  AttributeMap attributes;
  friend bool operator==(const Individual&, const Individual&) = default;
};

struct DomainOntology {
  std::string prefix;
  std::string version;
  std::vector<Concept> concepts;
  std::vector<Individual> individuals;

  const Concept* find_concept(std::string_view name) const;
  const Individual* find_individual(std::string_view name) const;
  /// Name with this ontology's prefix added when it has none.
  std::string qualify(std::string_view name) const;

  friend bool operator==(const DomainOntology&, const DomainOntology&) = default;
};

struct DurationBounds {
  std::int64_t min_ms = 0;
  std::int64_t max_ms = 0;
  friend bool operator==(const DurationBounds&, const DurationBounds&) = default;
};

/// A temporal class. `parts` are consecutive sub-periods; part_relations[i]
/// is the relation required between parts[i] and parts[i+1].
struct TimeClass {
  std::string name;  // qualified
  std::optional<DurationBounds> duration;
  std::vector<std::string> parts;
  std::vector<AllenRelation> part_relations;
  friend bool operator==(const TimeClass&, const TimeClass&) = default;
};

struct TimeOntology {
  std::string prefix;
  std::string version;
  std::vector<TimeClass> classes;

  const TimeClass* find_class(std::string_view name) const;
  std::string qualify(std::string_view name) const;

  friend bool operator==(const TimeOntology&, const TimeOntology&) = default;
};

using Ontology = std::variant<DomainOntology, TimeOntology>;

/// Syntax only: names are qualified but references are not checked.
Ontology parse_ontology(std::string_view text);

/// parse_ontology followed by validate; throws UnresolvedReference for the
/// first dangling reference and CyclicDefinition for the first cycle.
Ontology load_ontology(std::string_view text);
DomainOntology load_domain_ontology(std::string_view text);
TimeOntology load_time_ontology(std::string_view text);
Ontology load_ontology_file(const std::filesystem::path& path);

struct ValidationIssue {
  enum class Kind { dangling_reference, cycle, duplicate_name };
  Kind kind;
  std::vector<std::string> names;  // dangling: {from, to}; cycle: members
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool empty() const { return issues.empty(); }
};

ValidationReport validate(const DomainOntology& ontology);
ValidationReport validate(const TimeOntology& ontology);
ValidationReport validate(const Ontology& ontology);
/// Every concept timeclass link must name a class of `time`.
ValidationReport validate_linkage(const DomainOntology& domain, const TimeOntology& time);

/// Canonical document text; load_ontology(serialize(o)) == o.
std::string serialize(const DomainOntology& ontology);
std::string serialize(const TimeOntology& ontology);

using DomainEntity = std::variant<Concept, Individual>;

/// Throws NotFound.
DomainEntity resolve(const DomainOntology& ontology, std::string_view name);
const TimeClass& resolve(const TimeOntology& ontology, std::string_view name);

struct DurationVerdict {
  bool conforms = false;
  std::int64_t duration_ms = 0;
  /// 0 inside the bounds, duration - max above, duration - min below.
  std::int64_t deviation_ms = 0;
  DurationBounds bounds;
};

/// Throws NotFound or NoDurationAxiom.
DurationVerdict check_duration(const TimeOntology& time, std::string_view class_name,
                               const Interval& iv, std::int64_t tolerance_ms = 0);

}  // namespace chronotate
