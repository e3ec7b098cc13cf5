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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "chronotate/rules.hpp"

namespace chronotate::rules {

namespace {

using Value = std::variant<std::int64_t, double, std::string, bool, Interval>;

struct Fault {
  std::string message;
};

bool is_number(const Value& v) { return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v); }

double as_double(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

double finite(double d) {
  if (!std::isfinite(d)) throw Fault{"decimal result is not finite"};
  return d;
}

std::string format_count(double n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", n);
  return buf;
}

class Evaluator {
 public:
  Evaluator(const MetaRule& rule, const EventRegistry& registry, const TimeOntology& time)
      : registry_(registry), time_(time) {
    for (std::size_t i = 0; i < rule.bindings.size(); ++i) slots_[rule.bindings[i].var] = i;
  }

  void bind(std::vector<const Event*> events) { bound_ = std::move(events); }

  Value eval(const Expr& e) {
    return std::visit([&](const auto& n) { return eval_node(n); }, e.node);
  }

  bool truth(const Expr& e) { return std::get<bool>(eval(e)); }

  Interval interval_of(const Expr& e) { return std::get<Interval>(eval(e)); }

 private:
  const Event& event(const std::string& var) const { return *bound_.at(slots_.at(var)); }

  Value eval_node(const IntLit& n) { return n.value; }
  Value eval_node(const DecLit& n) { return n.value; }
  Value eval_node(const StrLit& n) { return n.value; }
  Value eval_node(const VarRef& n) { return event(n.name).interval; }

  Value eval_node(const FieldRef& f) {
    const Event& ev = event(f.var);
    if (f.field == "id") return ev.id;
    if (f.field == "type") return ev.type;
    if (f.field == "confidence") return ev.confidence;
    auto it = ev.attributes.find(f.field);
    if (it == ev.attributes.end())
      throw Fault{"event " + ev.id + " has no attribute '" + f.field + "'"};
    const auto declared = registry_.field_type(ev.type, f.field);
    const Literal& lit = it->second;
    switch (declared.value_or(ValueType::string)) {
      case ValueType::integer:
        if (auto* i = std::get_if<std::int64_t>(&lit)) return *i;
        break;
      case ValueType::decimal:
        if (auto* i = std::get_if<std::int64_t>(&lit)) return static_cast<double>(*i);
        if (auto* d = std::get_if<double>(&lit)) return *d;
        break;
      case ValueType::string:
        if (auto* s = std::get_if<std::string>(&lit)) return *s;
        break;
    }
    throw Fault{"attribute '" + f.field + "' of event " + ev.id + " does not have its declared type " +
                std::string(to_string(*declared))};
  }

  Value eval_node(const Unary& u) {
    Value v = eval(*u.operand);
    if (u.op == UnaryOp::logical_not) return !std::get<bool>(v);
    if (auto* i = std::get_if<std::int64_t>(&v)) {
      std::int64_t out;
      if (__builtin_sub_overflow(std::int64_t{0}, *i, &out)) throw Fault{"integer overflow"};
      return out;
    }
    return -std::get<double>(v);
  }

  static std::int64_t int_arith(BinaryOp op, std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    bool overflow = false;
    switch (op) {
      case BinaryOp::add: overflow = __builtin_add_overflow(a, b, &out); break;
      case BinaryOp::sub: overflow = __builtin_sub_overflow(a, b, &out); break;
      case BinaryOp::mul: overflow = __builtin_mul_overflow(a, b, &out); break;
      case BinaryOp::div:
        if (b == 0) throw Fault{"division by zero"};
        if (a == INT64_MIN && b == -1) throw Fault{"integer overflow"};
        out = a / b;
        break;
      default: break;
    }
    if (overflow) throw Fault{"integer overflow"};
    return out;
  }

  static double dec_arith(BinaryOp op, double a, double b) {
    switch (op) {
      case BinaryOp::add: return finite(a + b);
      case BinaryOp::sub: return finite(a - b);
      case BinaryOp::mul: return finite(a * b);
      case BinaryOp::div:
        if (b == 0.0) throw Fault{"division by zero"};
        return finite(a / b);
      default: return 0.0;
    }
  }

  template <class T>
  static bool compare(BinaryOp op, const T& a, const T& b) {
    switch (op) {
      case BinaryOp::eq: return a == b;
      case BinaryOp::ne: return a != b;
      case BinaryOp::lt: return a < b;
      case BinaryOp::le: return a <= b;
      case BinaryOp::gt: return a > b;
      case BinaryOp::ge: return a >= b;
      default: return false;
    }
  }

  Value eval_node(const Binary& b) {
    if (b.op == BinaryOp::logical_and) return truth(*b.lhs) && truth(*b.rhs);
    if (b.op == BinaryOp::logical_or) return truth(*b.lhs) || truth(*b.rhs);
    Value l = eval(*b.lhs);
    Value r = eval(*b.rhs);
    switch (b.op) {
      case BinaryOp::add:
      case BinaryOp::sub:
      case BinaryOp::mul:
      case BinaryOp::div:
        if (std::holds_alternative<std::int64_t>(l) && std::holds_alternative<std::int64_t>(r))
          return int_arith(b.op, std::get<std::int64_t>(l), std::get<std::int64_t>(r));
        return dec_arith(b.op, as_double(l), as_double(r));
      default: break;
    }
    if (std::holds_alternative<std::int64_t>(l) && std::holds_alternative<std::int64_t>(r))
      return compare(b.op, std::get<std::int64_t>(l), std::get<std::int64_t>(r));
    if (is_number(l) && is_number(r)) return compare(b.op, as_double(l), as_double(r));
    if (auto* s = std::get_if<std::string>(&l)) return compare(b.op, *s, std::get<std::string>(r));
    return compare(b.op, std::get<bool>(l), std::get<bool>(r));
  }

  Value eval_node(const TemporalPred& t) {
    return relation(interval_of(*t.lhs), interval_of(*t.rhs)) == t.relation;
  }

  Value eval_node(const Call& c) {
    const std::string& fn = c.name;
    if (fn == "duration") return interval_of(*c.args[0]).duration();
    if (fn == "start") return interval_of(*c.args[0]).start_ms();
    if (fn == "end") return interval_of(*c.args[0]).end_ms();
    if (fn == "gap") return interval_of(*c.args[1]).start_ms() - interval_of(*c.args[0]).end_ms();
    if (fn == "span") {
      const Interval a = interval_of(*c.args[0]);
      const Interval b = interval_of(*c.args[1]);
      return Interval(std::min(a.start(), b.start()), std::max(a.end(), b.end()));
    }
    if (fn == "distinct") {
      const auto& a = std::get<VarRef>(c.args[0]->node).name;
      const auto& b = std::get<VarRef>(c.args[1]->node).name;
      return &event(a) != &event(b);
    }
    if (fn == "concept") return std::get<StrLit>(c.args[0]->node).value;
    if (fn == "conforms") {
      const auto& name = std::get<StrLit>(c.args[1]->node).value;
      return check_duration(time_, name, interval_of(*c.args[0])).conforms;
    }
    throw Fault{"unknown function '" + fn + "'"};
  }

  const EventRegistry& registry_;
  const TimeOntology& time_;
  std::map<std::string, std::size_t> slots_;
  std::vector<const Event*> bound_;
};

Literal to_literal(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto* d = std::get_if<double>(&v)) return *d;
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  throw Fault{"attribute value is not a literal"};
}

std::string dedup_key(const Assertion& a) {
  std::string key = a.concept_name + '\x1f' + std::to_string(a.interval.start_ms()) + '\x1f' +
                    std::to_string(a.interval.end_ms());
  for (const auto& [k, v] : a.attributes) {
    key += '\x1f' + k + '=';
    key += static_cast<char>('0' + v.index());
    key += format_literal(v);
  }
  return key;
}

}  // namespace

EvaluationResult evaluate(const CheckedRuleSet& checked, std::span<const Event> timeline,
                          const DomainOntology& /*domain*/, const TimeOntology& time,
                          const EvaluationLimits& limits) {
  const auto& rules = checked.rules().rules;
  std::vector<std::size_t> order(rules.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rules[a].priority > rules[b].priority; });

  EvaluationResult result;
  std::map<std::string, std::size_t> seen;

  for (std::size_t ri : order) {
    const MetaRule& rule = rules[ri];
    const std::size_t k = rule.bindings.size();
    if (k > limits.max_bindings)
      throw ComplexityLimitExceeded("rule \"" + rule.name + "\" binds " + std::to_string(k) +
                                    " events; the limit is " + std::to_string(limits.max_bindings));

    std::vector<std::vector<const Event*>> candidates(k);
    double tuples = 1.0;
    for (std::size_t b = 0; b < k; ++b) {
      for (const Event& ev : timeline)
        if (ev.type == rule.bindings[b].event_type) candidates[b].push_back(&ev);
      tuples *= static_cast<double>(candidates[b].size());
    }
    if (tuples > limits.max_candidates)
      throw ComplexityLimitExceeded("rule \"" + rule.name + "\" would examine " +
                                    format_count(tuples) +
                                    " candidate tuples; the limit is " +
                                    format_count(limits.max_candidates));
    if (tuples == 0.0) continue;

    Evaluator ev(rule, checked.registry(), time);
    std::vector<std::size_t> cursor(k, 0);
    while (true) {
      std::vector<const Event*> tuple(k);
      for (std::size_t b = 0; b < k; ++b) tuple[b] = candidates[b][cursor[b]];
      ev.bind(tuple);

      try {
        if (!rule.guard || ev.truth(*rule.guard)) {
          Assertion a;
          a.concept_name = rule.annotation.concept_name;
          a.interval = ev.interval_of(*rule.annotation.interval);
          for (const auto& entry : rule.annotation.attributes)
            a.attributes[entry.key] = to_literal(ev.eval(*entry.value));
          Provenance prov{rule.name, {}};
          for (const Event* e : tuple) prov.event_ids.push_back(e->id);

          const std::string key = dedup_key(a);
          if (auto it = seen.find(key); it != seen.end()) {
            auto& existing = result.assertions[it->second].provenance;
            if (std::find(existing.begin(), existing.end(), prov) == existing.end())
              existing.push_back(std::move(prov));
          } else {
            a.provenance.push_back(std::move(prov));
            seen.emplace(key, result.assertions.size());
            result.assertions.push_back(std::move(a));
          }
        }
      } catch (const Fault& f) {
        EvaluationError err{rule.name, {}, f.message};
        for (const Event* e : tuple) err.event_ids.push_back(e->id);
        result.errors.push_back(std::move(err));
      }

      // Odometer over candidate lists, last binding fastest.
      std::size_t b = k;
      while (b > 0) {
        --b;
        if (++cursor[b] < candidates[b].size()) break;
        cursor[b] = 0;
        if (b == 0) {
          b = k + 1;
          break;
        }
      }
      if (b == k + 1 || k == 0) break;
    }
  }
  return result;
}

}  // namespace chronotate::rules
