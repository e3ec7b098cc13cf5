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

#include <sstream>

#include "chronotate/rules.hpp"

namespace chronotate::rules {

namespace {

// Binding strength; higher binds tighter.
enum Prec : int { kOr = 1, kAnd, kNot, kCmp, kAdd, kMul, kNeg, kAtom };

int precedence(const Expr& e) {
  if (auto* b = std::get_if<Binary>(&e.node)) {
    switch (b->op) {
      case BinaryOp::logical_or: return kOr;
      case BinaryOp::logical_and: return kAnd;
      case BinaryOp::add:
      case BinaryOp::sub: return kAdd;
      case BinaryOp::mul:
      case BinaryOp::div: return kMul;
      default: return kCmp;
    }
  }
  if (std::holds_alternative<TemporalPred>(e.node)) return kCmp;
  if (auto* u = std::get_if<Unary>(&e.node)) return u->op == UnaryOp::logical_not ? kNot : kNeg;
  return kAtom;
}

void print(std::ostream& out, const Expr& e);

void print_operand(std::ostream& out, const Expr& e, bool parens) {
  if (parens) out << '(';
  print(out, e);
  if (parens) out << ')';
}

void print_infix(std::ostream& out, int prec, std::string_view op, const Expr& lhs, const Expr& rhs) {
  // Left-associative levels accept an equal-precedence left child; the
  // comparison level is non-associative.
  const bool left_parens = prec == kCmp ? precedence(lhs) <= prec : precedence(lhs) < prec;
  print_operand(out, lhs, left_parens);
  out << ' ' << op << ' ';
  print_operand(out, rhs, precedence(rhs) <= prec);
}

void print(std::ostream& out, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          out << n.value;
        } else if constexpr (std::is_same_v<T, DecLit>) {
          out << format_decimal(n.value);
        } else if constexpr (std::is_same_v<T, StrLit>) {
          out << quote(n.value);
        } else if constexpr (std::is_same_v<T, VarRef>) {
          out << n.name;
        } else if constexpr (std::is_same_v<T, FieldRef>) {
          out << n.var << '.' << n.field;
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (n.op == UnaryOp::logical_not) {
            out << "not ";
            print_operand(out, *n.operand, precedence(*n.operand) < kNot);
          } else {
            out << '-';
            print_operand(out, *n.operand, precedence(*n.operand) < kNeg);
          }
        } else if constexpr (std::is_same_v<T, Binary>) {
          print_infix(out, precedence(e), to_string(n.op), *n.lhs, *n.rhs);
        } else if constexpr (std::is_same_v<T, TemporalPred>) {
          print_infix(out, kCmp, to_string(n.relation), *n.lhs, *n.rhs);
        } else if constexpr (std::is_same_v<T, Call>) {
          out << n.name << '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out << ", ";
            print(out, *n.args[i]);
          }
          out << ')';
        }
      },
      e.node);
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::ostringstream out;
  print(out, e);
  return out.str();
}

std::string pretty_print(const RuleSet& rs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    const MetaRule& r = rs.rules[i];
    if (i) out << '\n';
    out << "rule " << quote(r.name);
    if (r.priority != 0) out << " priority " << r.priority;
    out << " {\n  when ";
    for (std::size_t b = 0; b < r.bindings.size(); ++b)
      out << (b ? ", " : "") << r.bindings[b].event_type << ' ' << r.bindings[b].var;
    out << '\n';
    if (r.guard) out << "  where " << pretty_print(*r.guard) << '\n';
    out << "  annotate " << r.annotation.concept_name << "(interval = " << pretty_print(*r.annotation.interval);
    for (const auto& entry : r.annotation.attributes) out << ", " << entry.key << " = " << pretty_print(*entry.value);
    out << ")\n}\n";
  }
  return out.str();
}

}  // namespace chronotate::rules
