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

#include "chronotate/rules/ast.hpp"

namespace chronotate::rules {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::logical_and: return "and";
    case BinaryOp::logical_or: return "or";
  }
  return "?";
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

namespace {

struct NodeEq {
  bool operator()(const IntLit& a, const IntLit& b) const { return a.value == b.value; }
  bool operator()(const DecLit& a, const DecLit& b) const { return a.value == b.value; }
  bool operator()(const StrLit& a, const StrLit& b) const { return a.value == b.value; }
  bool operator()(const VarRef& a, const VarRef& b) const { return a.name == b.name; }
  bool operator()(const FieldRef& a, const FieldRef& b) const { return a.var == b.var && a.field == b.field; }
  bool operator()(const Unary& a, const Unary& b) const { return a.op == b.op && same_expr(a.operand, b.operand); }
  bool operator()(const Binary& a, const Binary& b) const {
    return a.op == b.op && same_expr(a.lhs, b.lhs) && same_expr(a.rhs, b.rhs);
  }
  bool operator()(const TemporalPred& a, const TemporalPred& b) const {
    return a.relation == b.relation && same_expr(a.lhs, b.lhs) && same_expr(a.rhs, b.rhs);
  }
  bool operator()(const Call& a, const Call& b) const {
    if (a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!same_expr(a.args[i], b.args[i])) return false;
    return true;
  }
  template <class A, class B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};

}  // namespace

bool operator==(const Expr& a, const Expr& b) { return std::visit(NodeEq{}, a.node, b.node); }

bool operator==(const BindingDecl& a, const BindingDecl& b) {
  return a.event_type == b.event_type && a.var == b.var;
}

bool operator==(const TemplateEntry& a, const TemplateEntry& b) {
  return a.key == b.key && same_expr(a.value, b.value);
}

bool operator==(const AnnotationTemplate& a, const AnnotationTemplate& b) {
  return a.concept_name == b.concept_name && same_expr(a.interval, b.interval) && a.attributes == b.attributes;
}

bool operator==(const MetaRule& a, const MetaRule& b) {
  return a.name == b.name && a.priority == b.priority && a.bindings == b.bindings &&
         same_expr(a.guard, b.guard) && a.annotation == b.annotation;
}

bool operator==(const RuleSet& a, const RuleSet& b) { return a.rules == b.rules; }

}  // namespace chronotate::rules
