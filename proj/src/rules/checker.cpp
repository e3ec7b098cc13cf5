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

#include <set>

#include "chronotate/rules.hpp"

namespace chronotate::rules {

EventRegistry EventRegistry::defaults() {
  EventRegistry r;
  r.declare_field("shot", "index", ValueType::integer);
  r.declare_field("shot", "start_frame", ValueType::integer);
  r.declare_field("shot", "end_frame", ValueType::integer);
  r.declare_field("ocr_text", "text", ValueType::string);
  r.declare_field("ocr_text", "track_id", ValueType::integer);
  r.declare_field("template_match", "template", ValueType::string);
  r.declare_field("template_match", "score", ValueType::decimal);
  return r;
}

void EventRegistry::declare_type(const std::string& type) { types_[type]; }

void EventRegistry::declare_field(const std::string& type, const std::string& field, ValueType vt) {
  types_[type][field] = vt;
}

bool EventRegistry::has_type(std::string_view type) const { return types_.find(type) != types_.end(); }

std::optional<ValueType> EventRegistry::field_type(std::string_view type, std::string_view field) const {
  auto it = types_.find(type);
  if (it == types_.end()) return std::nullopt;
  if (field == "id" || field == "type") return ValueType::string;
  if (field == "confidence") return ValueType::decimal;
  auto f = it->second.find(std::string(field));
  if (f == it->second.end()) return std::nullopt;
  return f->second;
}

struct CheckAccess {
  static CheckedRuleSet make(const RuleSet& rs, const EventRegistry& registry) {
    CheckedRuleSet out;
    out.rules_ = rs;
    out.registry_ = registry;
    return out;
  }
};

namespace {

enum class Ty { integer, decimal, string, boolean, interval, event, error };

std::string_view name_of(Ty t) {
  switch (t) {
    case Ty::integer: return "int";
    case Ty::decimal: return "decimal";
    case Ty::string: return "string";
    case Ty::boolean: return "bool";
    case Ty::interval: return "interval";
    case Ty::event: return "event";
    case Ty::error: return "<error>";
  }
  return "?";
}

Ty from_value_type(ValueType vt) {
  switch (vt) {
    case ValueType::integer: return Ty::integer;
    case ValueType::decimal: return Ty::decimal;
    case ValueType::string: return Ty::string;
  }
  return Ty::error;
}

bool numeric(Ty t) { return t == Ty::integer || t == Ty::decimal; }
bool interval_like(Ty t) { return t == Ty::interval || t == Ty::event; }

class RuleChecker {
 public:
  RuleChecker(const DomainOntology& domain, const TimeOntology& time, const EventRegistry& registry,
              std::vector<Diagnostic>& diags)
      : domain_(domain), time_(time), registry_(registry), diags_(diags) {}

  void check(const MetaRule& rule) {
    env_.clear();
    for (const auto& b : rule.bindings) {
      if (!registry_.has_type(b.event_type))
        report(b.span, "unknown_event_type", "unknown event type '" + b.event_type + "'");
      if (!env_.emplace(b.var, b.event_type).second)
        report(b.span, "duplicate_variable", "variable '" + b.var + "' is bound twice");
    }
    if (rule.guard) {
      Ty t = type_of(*rule.guard);
      if (t != Ty::boolean && t != Ty::error)
        report(rule.guard->span, "type_mismatch",
               "where clause must be a condition, found " + std::string(name_of(t)));
    }
    const auto& tpl = rule.annotation;
    if (!resolves_to_concept(tpl.concept_name))
      report(tpl.concept_span, "unknown_concept", "unknown concept '" + tpl.concept_name + "'");
    if (tpl.interval) {
      Ty t = type_of(*tpl.interval);
      if (!interval_like(t) && t != Ty::error)
        report(tpl.interval->span, "type_mismatch",
               "interval must be a bound event or span(...), found " + std::string(name_of(t)));
    } else {
      report(tpl.concept_span, "missing_interval", "annotation template has no interval");
    }
    for (const auto& entry : tpl.attributes) {
      Ty t = type_of(*entry.value);
      if (t != Ty::error && t != Ty::integer && t != Ty::decimal && t != Ty::string)
        report(entry.value->span, "type_mismatch",
               "attribute '" + entry.key + "' must be int, decimal or string, found " + std::string(name_of(t)));
    }
  }

 private:
  void report(const SourceSpan& span, std::string code, std::string message) {
    diags_.push_back({Diagnostic::Severity::error, std::move(code), std::move(message), span, {}});
  }

  bool resolves_to_concept(const std::string& name) const {
    auto [prefix, local] = split_qualified(name);
    return prefix == domain_.prefix && domain_.find_concept(name) != nullptr;
  }

  bool resolves_anywhere(const std::string& name) const {
    auto [prefix, local] = split_qualified(name);
    if (prefix == domain_.prefix) return domain_.find_concept(name) || domain_.find_individual(name);
    if (prefix == time_.prefix) return time_.find_class(name) != nullptr;
    return false;
  }

  Ty mismatch(const Expr& e, const std::string& message) {
    report(e.span, "type_mismatch", message);
    return Ty::error;
  }

  Ty type_of(const Expr& e) {
    return std::visit([&](const auto& n) { return type_node(e, n); }, e.node);
  }

  Ty type_node(const Expr&, const IntLit&) { return Ty::integer; }
  Ty type_node(const Expr&, const DecLit&) { return Ty::decimal; }
  Ty type_node(const Expr&, const StrLit&) { return Ty::string; }

  Ty type_node(const Expr& e, const VarRef& v) {
    if (!env_.count(v.name)) {
      report(e.span, "unbound_variable", "variable '" + v.name + "' is not bound in 'when'");
      return Ty::error;
    }
    return Ty::event;
  }

  Ty type_node(const Expr& e, const FieldRef& f) {
    auto it = env_.find(f.var);
    if (it == env_.end()) {
      report(e.span, "unbound_variable", "variable '" + f.var + "' is not bound in 'when'");
      return Ty::error;
    }
    if (!registry_.has_type(it->second)) return Ty::error;
    auto vt = registry_.field_type(it->second, f.field);
    if (!vt) {
      report(e.span, "unknown_field", "event type '" + it->second + "' has no field '" + f.field + "'");
      return Ty::error;
    }
    return from_value_type(*vt);
  }

  Ty type_node(const Expr& e, const Unary& u) {
    Ty t = type_of(*u.operand);
    if (t == Ty::error) return t;
    if (u.op == UnaryOp::logical_not) {
      if (t != Ty::boolean) return mismatch(e, "'not' needs a condition, found " + std::string(name_of(t)));
      return Ty::boolean;
    }
    if (!numeric(t)) return mismatch(e, "cannot negate " + std::string(name_of(t)));
    return t;
  }

  Ty type_node(const Expr& e, const Binary& b) {
    Ty l = type_of(*b.lhs);
    Ty r = type_of(*b.rhs);
    if (l == Ty::error || r == Ty::error) return Ty::error;
    const std::string op(to_string(b.op));
    const std::string pair = std::string(name_of(l)) + " " + op + " " + std::string(name_of(r));
    switch (b.op) {
      case BinaryOp::add:
      case BinaryOp::sub:
      case BinaryOp::mul:
      case BinaryOp::div:
        if (!numeric(l) || !numeric(r)) return mismatch(e, "arithmetic on non-numbers: " + pair);
        return l == Ty::integer && r == Ty::integer ? Ty::integer : Ty::decimal;
      case BinaryOp::eq:
      case BinaryOp::ne:
        if ((numeric(l) && numeric(r)) || (l == r && (l == Ty::string || l == Ty::boolean))) return Ty::boolean;
        return mismatch(e, "cannot compare " + pair);
      case BinaryOp::lt:
      case BinaryOp::le:
      case BinaryOp::gt:
      case BinaryOp::ge:
        if ((numeric(l) && numeric(r)) || (l == Ty::string && r == Ty::string)) return Ty::boolean;
        return mismatch(e, "cannot compare " + pair);
      case BinaryOp::logical_and:
      case BinaryOp::logical_or:
        if (l != Ty::boolean || r != Ty::boolean) return mismatch(e, "'" + op + "' needs conditions: " + pair);
        return Ty::boolean;
    }
    return Ty::error;
  }

  Ty type_node(const Expr& e, const TemporalPred& t) {
    Ty l = type_of(*t.lhs);
    Ty r = type_of(*t.rhs);
    if (l == Ty::error || r == Ty::error) return Ty::error;
    if (!std::holds_alternative<VarRef>(t.lhs->node) || !std::holds_alternative<VarRef>(t.rhs->node))
      return mismatch(e, "'" + std::string(to_string(t.relation)) + "' relates two bound event variables");
    return Ty::boolean;
  }

  bool arity(const Expr& e, const Call& c, std::size_t n) {
    if (c.args.size() == n) return true;
    report(e.span, "arity", c.name + "() takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") +
                                ", given " + std::to_string(c.args.size()));
    return false;
  }

  const StrLit* string_arg(const Expr& arg) {
    auto* s = std::get_if<StrLit>(&arg.node);
    if (!s) report(arg.span, "type_mismatch", "expected a string literal naming an ontology entity");
    return s;
  }

  Ty type_node(const Expr& e, const Call& c) {
    const std::string& fn = c.name;
    if (fn == "duration" || fn == "start" || fn == "end") {
      if (!arity(e, c, 1)) return Ty::error;
      Ty t = type_of(*c.args[0]);
      if (t == Ty::error) return t;
      if (!interval_like(t)) return mismatch(e, fn + "() needs an event or interval");
      return Ty::integer;
    }
    if (fn == "gap" || fn == "span") {
      if (!arity(e, c, 2)) return Ty::error;
      Ty a = type_of(*c.args[0]);
      Ty b = type_of(*c.args[1]);
      if (a == Ty::error || b == Ty::error) return Ty::error;
      if (!interval_like(a) || !interval_like(b)) return mismatch(e, fn + "() needs two events or intervals");
      return fn == "gap" ? Ty::integer : Ty::interval;
    }
    if (fn == "distinct") {
      if (!arity(e, c, 2)) return Ty::error;
      for (const auto& arg : c.args) {
        Ty t = type_of(*arg);
        if (t == Ty::error) return t;
        if (!std::holds_alternative<VarRef>(arg->node)) return mismatch(e, "distinct() takes two bound variables");
      }
      return Ty::boolean;
    }
    if (fn == "concept") {
      if (!arity(e, c, 1)) return Ty::error;
      const StrLit* s = string_arg(*c.args[0]);
      if (!s) return Ty::error;
      if (!resolves_anywhere(s->value)) {
        report(c.args[0]->span, "unknown_concept", "unknown ontology entity '" + s->value + "'");
        return Ty::error;
      }
      return Ty::string;
    }
    if (fn == "conforms") {
      if (!arity(e, c, 2)) return Ty::error;
      Ty t = type_of(*c.args[0]);
      if (t == Ty::error) return t;
      if (!interval_like(t)) return mismatch(e, "conforms() needs an event or interval");
      const StrLit* s = string_arg(*c.args[1]);
      if (!s) return Ty::error;
      auto [prefix, local] = split_qualified(s->value);
      const TimeClass* tc = prefix == time_.prefix ? time_.find_class(s->value) : nullptr;
      if (!tc) {
        report(c.args[1]->span, "unknown_concept", "unknown time class '" + s->value + "'");
        return Ty::error;
      }
      if (!tc->duration) {
        report(c.args[1]->span, "no_duration_axiom", "time class '" + s->value + "' has no duration axiom");
        return Ty::error;
      }
      return Ty::boolean;
    }
    report(e.span, "unknown_function", "unknown function '" + fn + "'");
    return Ty::error;
  }

  const DomainOntology& domain_;
  const TimeOntology& time_;
  const EventRegistry& registry_;
  std::vector<Diagnostic>& diags_;
  std::map<std::string, std::string> env_;
};

}  // namespace

CheckResult check_rules(const RuleSet& rs, const DomainOntology& domain, const TimeOntology& time,
                        const EventRegistry& registry) {
  CheckResult result;
  RuleChecker checker(domain, time, registry, result.diagnostics);
  std::set<std::string> names;
  for (const auto& rule : rs.rules) {
    if (!names.insert(rule.name).second)
      result.diagnostics.push_back({Diagnostic::Severity::error, "duplicate_rule",
                                    "duplicate rule name \"" + rule.name + "\"", rule.name_span, {}});
    checker.check(rule);
  }
  if (result.diagnostics.empty()) result.rules = CheckAccess::make(rs, registry);
  return result;
}

}  // namespace chronotate::rules
