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

// Abstract syntax of the meta-rule language. Trees are immutable and shared;
// equality is structural and ignores source spans.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "chronotate/temporal.hpp"

namespace chronotate::rules {

/// 1-based, end exclusive.
struct SourceSpan {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;
};

enum class UnaryOp { negate, logical_not };
enum class BinaryOp { add, sub, mul, div, eq, ne, lt, le, gt, ge, logical_and, logical_or };

std::string_view to_string(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  std::int64_t value;
};
struct DecLit {
  double value;
};
struct StrLit {
  std::string value;
};
struct VarRef {
  std::string name;
};
struct FieldRef {
  std::string var;
  std::string field;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct TemporalPred {
  AllenRelation relation;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  std::string name;
  std::vector<ExprPtr> args;
};

struct Expr {
  std::variant<IntLit, DecLit, StrLit, VarRef, FieldRef, Unary, Binary, TemporalPred, Call> node;
  SourceSpan span;
};

bool operator==(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);

template <class Node>
ExprPtr make_expr(Node node, SourceSpan span = {}) {
  return std::make_shared<const Expr>(Expr{std::move(node), span});
}

struct BindingDecl {
  std::string event_type;
  std::string var;
  SourceSpan span;
};

struct TemplateEntry {
  std::string key;
  ExprPtr value;
  SourceSpan span;
};

struct AnnotationTemplate {
  std::string concept_name;  // qualified name
  SourceSpan concept_span;
  ExprPtr interval;
  SourceSpan interval_span;
  std::vector<TemplateEntry> attributes;  // in source order
};

struct MetaRule {
  std::string name;
  SourceSpan name_span;
  std::int64_t priority = 0;
  std::vector<BindingDecl> bindings;
  ExprPtr guard;  // null when the rule has no where clause
  AnnotationTemplate annotation;
};

struct RuleSet {
  std::vector<MetaRule> rules;
};

bool operator==(const BindingDecl& a, const BindingDecl& b);
bool operator==(const TemplateEntry& a, const TemplateEntry& b);
bool operator==(const AnnotationTemplate& a, const AnnotationTemplate& b);
bool operator==(const MetaRule& a, const MetaRule& b);
bool operator==(const RuleSet& a, const RuleSet& b);

}  // namespace chronotate::rules
