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

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "chronotate/rules.hpp"

namespace chronotate::rules {

std::string_view to_string(Diagnostic::Severity s) {
  return s == Diagnostic::Severity::error ? "error" : "warning";
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::ostringstream out;
  out << file << ":" << d.span.line << ":" << d.span.col << ": " << to_string(d.severity) << ": "
      << d.message;
  return out.str();
}

namespace {

enum class Tok { ident, qname, keyword, integer, decimal, string, punct, end };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const std::set<std::string, std::less<>> kKeywords = {
    "rule", "priority", "when", "where", "annotate", "and", "or", "not",
};

bool is_keyword(std::string_view w) { return kKeywords.count(w) || parse_relation(w).has_value(); }

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= src_.size()) break;
      const int l = line_, c = col_;
      const char ch = src_[i_];
      if (ident_start(ch)) {
        std::size_t j = i_;
        while (j < src_.size() && ident_char(src_[j])) ++j;
        Tok kind = Tok::ident;
        if (j + 1 < src_.size() && src_[j] == ':' && ident_start(src_[j + 1])) {
          ++j;
          while (j < src_.size() && ident_char(src_[j])) ++j;
          kind = Tok::qname;
        }
        std::string text(src_.substr(i_, j - i_));
        if (kind == Tok::ident && is_keyword(text)) kind = Tok::keyword;
        advance(j - i_);
        out.push_back({kind, std::move(text), {l, c, line_, col_}});
      } else if (digit(ch)) {
        std::size_t j = i_;
        while (j < src_.size() && digit(src_[j])) ++j;
        Tok kind = Tok::integer;
        if (j + 1 < src_.size() && src_[j] == '.' && digit(src_[j + 1])) {
          ++j;
          while (j < src_.size() && digit(src_[j])) ++j;
          kind = Tok::decimal;
        }
        std::string text(src_.substr(i_, j - i_));
        advance(j - i_);
        out.push_back({kind, std::move(text), {l, c, line_, col_}});
      } else if (ch == '"') {
        lex_string(out);
      } else {
        static constexpr std::string_view two[] = {"==", "!=", "<=", ">="};
        bool matched = false;
        for (auto op : two) {
          if (src_.substr(i_, 2) == op) {
            advance(2);
            out.push_back({Tok::punct, std::string(op), {l, c, line_, col_}});
            matched = true;
            break;
          }
        }
        if (matched) continue;
        if (std::string_view("{}(),.+-*/<>=").find(ch) != std::string_view::npos) {
          advance(1);
          out.push_back({Tok::punct, std::string(1, ch), {l, c, line_, col_}});
        } else {
          advance(1);
          diags_.push_back({Diagnostic::Severity::error, "syntax_error",
                            std::string("unexpected character '") + ch + "'", {l, c, line_, col_}, {}});
        }
      }
    }
    out.push_back({Tok::end, "", {line_, col_, line_, col_}});
    return out;
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (i_ < src_.size()) {
      if (src_[i_] == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  void lex_string(std::vector<Token>& out) {
    const int l = line_, c = col_;
    advance(1);
    std::string text;
    while (i_ < src_.size() && src_[i_] != '"' && src_[i_] != '\n') {
      if (src_[i_] == '\\' && i_ + 1 < src_.size()) {
        const char e = src_[i_ + 1];
        text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        advance(2);
      } else {
        text += src_[i_];
        advance(1);
      }
    }
    if (i_ < src_.size() && src_[i_] == '"') {
      advance(1);
      out.push_back({Tok::string, std::move(text), {l, c, line_, col_}});
    } else {
      diags_.push_back({Diagnostic::Severity::error, "syntax_error", "unterminated string literal",
                        {l, c, line_, col_}, {}});
      out.push_back({Tok::string, std::move(text), {l, c, line_, col_}});
    }
  }

  std::string_view src_;
  std::vector<Diagnostic>& diags_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct ParseFailure {};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) { return {a.line, a.col, b.end_line, b.end_col}; }

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags) : toks_(std::move(toks)), diags_(diags) {}

  RuleSet parse_all() {
    RuleSet rs;
    std::map<std::string, SourceSpan> names;
    while (peek().kind != Tok::end) {
      const std::size_t start = pos_;
      try {
        MetaRule r = parse_rule();
        if (auto it = names.find(r.name); it != names.end()) {
          diags_.push_back({Diagnostic::Severity::error, "duplicate_rule",
                            "duplicate rule name \"" + r.name + "\" (first defined at line " +
                                std::to_string(it->second.line) + ")",
                            r.name_span, {}});
        } else {
          names.emplace(r.name, r.name_span);
        }
        rs.rules.push_back(std::move(r));
      } catch (const ParseFailure&) {
        // Resynchronize at the next rule header.
        if (pos_ == start) next();
        while (peek().kind != Tok::end && !is_kw("rule")) next();
      }
    }
    return rs;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }

  bool is_kw(std::string_view w) const { return peek().kind == Tok::keyword && peek().text == w; }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::punct && peek().text == p; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return "end of input";
      case Tok::string: return "string \"" + t.text + "\"";
      case Tok::ident: return "identifier '" + t.text + "'";
      default: return "'" + t.text + "'";
    }
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = peek();
    std::string msg = "expected ";
    if (expected.size() == 1) {
      msg += expected[0];
    } else {
      msg += "one of ";
      for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    }
    msg += "; found " + describe(t);
    diags_.push_back({Diagnostic::Severity::error, "syntax_error", std::move(msg), t.span, std::move(expected)});
    throw ParseFailure{};
  }

  [[noreturn]] void fail_at(const SourceSpan& span, std::string code, std::string msg) {
    diags_.push_back({Diagnostic::Severity::error, std::move(code), std::move(msg), span, {}});
    throw ParseFailure{};
  }

  const Token& expect_kw(std::string_view w) {
    if (!is_kw(w)) fail({"'" + std::string(w) + "'"});
    return next();
  }
  const Token& expect_punct(std::string_view p) {
    if (!is_punct(p)) fail({"'" + std::string(p) + "'"});
    return next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::ident) fail({what});
    return next();
  }

  std::int64_t int_value(const Token& t) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail_at(t.span, "syntax_error", "integer literal " + t.text + " is out of range");
    return v;
  }

  MetaRule parse_rule() {
    MetaRule r;
    expect_kw("rule");
    if (peek().kind != Tok::string) fail({"rule name string"});
    const Token& name = next();
    r.name = name.text;
    r.name_span = name.span;
    if (is_kw("priority")) {
      next();
      bool negative = false;
      if (is_punct("-")) {
        next();
        negative = true;
      }
      if (peek().kind != Tok::integer) fail({"integer priority"});
      r.priority = int_value(next());
      if (negative) r.priority = -r.priority;
    }
    if (!is_punct("{")) fail({"'priority'", "'{'"});
    next();
    expect_kw("when");
    std::set<std::string> vars;
    do {
      BindingDecl b;
      const Token& type = expect_ident("event type");
      const Token& var = expect_ident("variable name");
      b.event_type = type.text;
      b.var = var.text;
      b.span = join(type.span, var.span);
      r.bindings.push_back(std::move(b));
      if (is_punct(",")) {
        next();
        continue;
      }
      break;
    } while (true);
    if (is_kw("where")) {
      next();
      r.guard = parse_expr();
    }
    if (!is_kw("annotate")) {
      if (r.guard) fail({"'annotate'"});
      fail({"','", "'where'", "'annotate'"});
    }
    next();
    parse_template(r.annotation);
    if (!is_punct("}")) fail({"'}'"});
    next();
    return r;
  }

  void parse_template(AnnotationTemplate& t) {
    if (peek().kind != Tok::qname) fail({"qualified concept name"});
    const Token& c = next();
    t.concept_name = c.text;
    t.concept_span = c.span;
    expect_punct("(");
    std::set<std::string> keys;
    do {
      const Token& key = expect_ident("attribute name");
      expect_punct("=");
      ExprPtr value = parse_expr();
      if (!keys.insert(key.text).second)
        fail_at(key.span, "syntax_error", "duplicate template entry '" + key.text + "'");
      if (key.text == "interval") {
        t.interval = std::move(value);
        t.interval_span = key.span;
      } else {
        t.attributes.push_back({key.text, std::move(value), key.span});
      }
      if (is_punct(",")) {
        next();
        continue;
      }
      break;
    } while (true);
    if (!is_punct(")")) fail({"','", "')'"});
    const Token& close = next();
    if (!t.interval)
      fail_at(join(c.span, close.span), "missing_interval",
              "annotation template for " + t.concept_name + " has no 'interval = ...' entry");
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (is_kw("or")) {
      next();
      ExprPtr rhs = parse_and();
      lhs = make_expr(Binary{BinaryOp::logical_or, lhs, rhs}, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (is_kw("and")) {
      next();
      ExprPtr rhs = parse_not();
      lhs = make_expr(Binary{BinaryOp::logical_and, lhs, rhs}, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (is_kw("not")) {
      const SourceSpan start = next().span;
      ExprPtr operand = parse_not();
      return make_expr(Unary{UnaryOp::logical_not, operand}, join(start, operand->span));
    }
    return parse_cmp();
  }

  std::optional<BinaryOp> comparison_op() const {
    if (peek().kind != Tok::punct) return std::nullopt;
    const auto& p = peek().text;
    if (p == "==") return BinaryOp::eq;
    if (p == "!=") return BinaryOp::ne;
    if (p == "<") return BinaryOp::lt;
    if (p == "<=") return BinaryOp::le;
    if (p == ">") return BinaryOp::gt;
    if (p == ">=") return BinaryOp::ge;
    return std::nullopt;
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    if (auto op = comparison_op()) {
      next();
      ExprPtr rhs = parse_add();
      return make_expr(Binary{*op, lhs, rhs}, join(lhs->span, rhs->span));
    }
    if (peek().kind == Tok::keyword) {
      if (auto rel = parse_relation(peek().text)) {
        next();
        ExprPtr rhs = parse_add();
        return make_expr(TemporalPred{*rel, lhs, rhs}, join(lhs->span, rhs->span));
      }
    }
    return lhs;
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    while (is_punct("+") || is_punct("-")) {
      const BinaryOp op = next().text == "+" ? BinaryOp::add : BinaryOp::sub;
      ExprPtr rhs = parse_mul();
      lhs = make_expr(Binary{op, lhs, rhs}, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    while (is_punct("*") || is_punct("/")) {
      const BinaryOp op = next().text == "*" ? BinaryOp::mul : BinaryOp::div;
      ExprPtr rhs = parse_unary();
      lhs = make_expr(Binary{op, lhs, rhs}, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (is_punct("-")) {
      const SourceSpan start = next().span;
      ExprPtr operand = parse_unary();
      return make_expr(Unary{UnaryOp::negate, operand}, join(start, operand->span));
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer: {
        next();
        return make_expr(IntLit{int_value(t)}, t.span);
      }
      case Tok::decimal: {
        next();
        return make_expr(DecLit{std::stod(t.text)}, t.span);
      }
      case Tok::string: {
        next();
        return make_expr(StrLit{t.text}, t.span);
      }
      case Tok::punct:
        if (t.text == "(") {
          next();
          ExprPtr inner = parse_expr();
          if (!is_punct(")")) fail({"')'"});
          next();
          return inner;
        }
        break;
      case Tok::ident: {
        next();
        if (is_punct("(")) {
          next();
          Call call{t.text, {}};
          if (!is_punct(")")) {
            call.args.push_back(parse_expr());
            while (is_punct(",")) {
              next();
              call.args.push_back(parse_expr());
            }
          }
          if (!is_punct(")")) fail({"','", "')'"});
          const Token& close = next();
          return make_expr(std::move(call), join(t.span, close.span));
        }
        if (is_punct(".")) {
          next();
          const Token& field = expect_ident("field name");
          return make_expr(FieldRef{t.text, field.text}, join(t.span, field.span));
        }
        return make_expr(VarRef{t.text}, t.span);
      }
      default:
        break;
    }
    fail({"expression"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

ParseResult parse_rules(std::string_view text) {
  ParseResult result;
  std::vector<Token> toks = Lexer(text, result.diagnostics).run();
  RuleSet rs = Parser(std::move(toks), result.diagnostics).parse_all();
  if (result.diagnostics.empty()) result.rules = std::move(rs);
  return result;
}

}  // namespace chronotate::rules
