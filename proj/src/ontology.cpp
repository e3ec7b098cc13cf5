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

#include "chronotate/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace chronotate {

SyntaxError::SyntaxError(int line, int col, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      line_(line),
      col_(col),
      detail_(message) {}

UnresolvedReference::UnresolvedReference(std::string name, const std::string& context)
    : Error("unresolved reference '" + name + "'" + (context.empty() ? "" : " in " + context)),
      name_(std::move(name)) {}

NotFound::NotFound(std::string name) : Error("not found: " + name), name_(std::move(name)) {}

NoDurationAxiom::NoDurationAxiom(const std::string& class_name)
    : Error("time class '" + class_name + "' has no duration axiom") {}

std::string_view to_string(ValueType t) {
  switch (t) {
    case ValueType::string: return "string";
    case ValueType::integer: return "int";
    case ValueType::decimal: return "decimal";
  }
  return "?";
}

std::optional<ValueType> parse_value_type(std::string_view keyword) {
  if (keyword == "string") return ValueType::string;
  if (keyword == "int") return ValueType::integer;
  if (keyword == "decimal") return ValueType::decimal;
  return std::nullopt;
}

std::pair<std::string_view, std::string_view> split_qualified(std::string_view name) {
  auto colon = name.find(':');
  if (colon == std::string_view::npos) return {std::string_view{}, name};
  return {name.substr(0, colon), name.substr(colon + 1)};
}

namespace {

std::string qualify_with(std::string_view prefix, std::string_view name) {
  if (name.find(':') != std::string_view::npos) return std::string(name);
  return std::string(prefix) + ":" + std::string(name);
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { ident, qname, integer, decimal, string, punct, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    const int tl = line, tc = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      Tok kind = Tok::ident;
      if (j + 1 < src.size() && src[j] == ':' && ident_start(src[j + 1])) {
        ++j;
        while (j < src.size() && ident_char(src[j])) ++j;
        kind = Tok::qname;
      }
      out.push_back({kind, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      Tok kind = Tok::integer;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        kind = Tok::decimal;
      }
      out.push_back({kind, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string text;
      advance();
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance();
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < src.size()) {
          char e = src[i + 1];
          text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          advance(2);
          continue;
        }
        text += d;
        advance();
      }
      if (!closed) throw SyntaxError(tl, tc, "unterminated string literal");
      out.push_back({Tok::string, std::move(text), tl, tc});
      continue;
    }
    if (c == '.' && i + 1 < src.size() && src[i + 1] == '.') {
      out.push_back({Tok::punct, "..", tl, tc});
      advance(2);
      continue;
    }
    if (std::string_view("{}:;=,-").find(c) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, c), tl, tc});
      advance();
      continue;
    }
    throw SyntaxError(tl, tc, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class DocumentParser {
 public:
  explicit DocumentParser(std::string_view src) : toks_(tokenize(src)) {}

  Ontology parse() {
    expect_word("ontology");
    std::string prefix = expect_kind(Tok::ident, "ontology prefix").text;
    expect_word("version");
    const Token& v = peek();
    if (v.kind == Tok::end || v.kind == Tok::punct) fail(v, "expected version");
    std::string version = next().text;

    DomainOntology dom{prefix, version, {}, {}};
    TimeOntology time{prefix, version, {}};
    std::set<std::string> seen;
    const Token* first_domain = nullptr;
    const Token* first_time = nullptr;

    while (peek().kind != Tok::end) {
      const Token& kw = peek();
      if (kw.kind != Tok::ident) fail(kw, "expected 'concept', 'individual' or 'timeclass'");
      if (kw.text == "concept") {
        if (!first_domain) first_domain = &kw;
        next();
        dom.concepts.push_back(parse_concept(prefix, seen));
      } else if (kw.text == "individual") {
        if (!first_domain) first_domain = &kw;
        next();
        dom.individuals.push_back(parse_individual(prefix, seen));
      } else if (kw.text == "timeclass") {
        if (!first_time) first_time = &kw;
        next();
        time.classes.push_back(parse_timeclass(prefix, seen));
      } else {
        fail(kw, "expected 'concept', 'individual' or 'timeclass', found '" + kw.text + "'");
      }
      if (first_domain && first_time) {
        const Token* later = first_domain->line > first_time->line ||
                                     (first_domain->line == first_time->line &&
                                      first_domain->col > first_time->col)
                                 ? first_domain
                                 : first_time;
        fail(*later, "a document declares either a domain ontology or a time ontology, not both");
      }
    }
    if (first_time) return time;
    return dom;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw SyntaxError(t.line, t.col, msg);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::end) return "end of document";
    if (t.kind == Tok::string) return "string \"" + t.text + "\"";
    return "'" + t.text + "'";
  }

  void expect_word(std::string_view w) {
    const Token& t = peek();
    if (t.kind != Tok::ident || t.text != w)
      fail(t, "expected '" + std::string(w) + "', found " + describe(t));
    next();
  }

  void expect_punct(std::string_view p) {
    const Token& t = peek();
    if (t.kind != Tok::punct || t.text != p)
      fail(t, "expected '" + std::string(p) + "', found " + describe(t));
    next();
  }

  bool accept_punct(std::string_view p) {
    if (peek().kind == Tok::punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }

  const Token& expect_kind(Tok kind, const std::string& what) {
    const Token& t = peek();
    if (t.kind != kind) fail(t, "expected " + what + ", found " + describe(t));
    return next();
  }

  std::string expect_name(std::string_view prefix, const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::ident && t.kind != Tok::qname)
      fail(t, "expected " + what + ", found " + describe(t));
    next();
    return qualify_with(prefix, t.text);
  }

  std::string declare(std::string_view prefix, std::set<std::string>& seen) {
    const Token& t = peek();
    if (t.kind == Tok::qname) {
      auto [p, local] = split_qualified(t.text);
      if (p != prefix) fail(t, "declared name '" + t.text + "' must use prefix '" + std::string(prefix) + "'");
    } else if (t.kind != Tok::ident) {
      fail(t, "expected a name, found " + describe(t));
    }
    std::string name = qualify_with(prefix, t.text);
    if (!seen.insert(name).second) fail(t, "duplicate declaration of '" + name + "'");
    next();
    return name;
  }

  Concept parse_concept(std::string_view prefix, std::set<std::string>& seen) {
    Concept c;
    c.name = declare(prefix, seen);
    if (peek().kind == Tok::ident && peek().text == "extends") {
      next();
      do {
        c.parents.push_back(expect_name(prefix, "parent concept"));
      } while (accept_punct(","));
    }
    expect_punct("{");
    std::set<std::string> props;
    while (!accept_punct("}")) {
      const Token& key = expect_kind(Tok::ident, "property name or '}'");
      if (key.text == "timeclass" && peek().kind == Tok::punct && peek().text == "=") {
        next();
        if (c.timeclass) fail(key, "duplicate timeclass link");
        const Token& t = peek();
        if (t.kind != Tok::qname) fail(t, "timeclass link must be a qualified name");
        c.timeclass = next().text;
        expect_punct(";");
        continue;
      }
      expect_punct(":");
      const Token& ty = expect_kind(Tok::ident, "property type");
      auto vt = parse_value_type(ty.text);
      if (!vt) fail(ty, "unknown property type '" + ty.text + "' (expected string, int or decimal)");
      if (!props.insert(key.text).second) fail(key, "duplicate property '" + key.text + "'");
      c.properties.push_back({key.text, *vt});
      expect_punct(";");
    }
    return c;
  }

  Literal parse_literal() {
    bool negative = accept_punct("-");
    const Token& t = peek();
    if (t.kind == Tok::string && !negative) {
      next();
      return t.text;
    }
    if (t.kind == Tok::integer) {
      next();
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc()) fail(t, "integer literal out of range");
      return negative ? -v : v;
    }
    if (t.kind == Tok::decimal) {
      next();
      double v = std::stod(t.text);
      return negative ? -v : v;
    }
    fail(t, "expected a literal, found " + describe(t));
  }

  Individual parse_individual(std::string_view prefix, std::set<std::string>& seen) {
    Individual ind;
    ind.name = declare(prefix, seen);
    expect_punct(":");
    ind.concept_name = expect_name(prefix, "concept name");
    expect_punct("{");
    while (!accept_punct("}")) {
      const Token& key = expect_kind(Tok::ident, "attribute name or '}'");
      expect_punct("=");
      Literal value = parse_literal();
      if (!ind.attributes.emplace(key.text, std::move(value)).second)
        fail(key, "duplicate attribute '" + key.text + "'");
      expect_punct(";");
    }
    return ind;
  }

  std::int64_t parse_millis() {
    const Token& t = expect_kind(Tok::integer, "duration in milliseconds");
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(t, "duration out of range");
    return v;
  }

  TimeClass parse_timeclass(std::string_view prefix, std::set<std::string>& seen) {
    TimeClass tc;
    tc.name = declare(prefix, seen);
    expect_punct("{");
    while (!accept_punct("}")) {
      const Token& key = expect_kind(Tok::ident, "'duration', 'parts' or '}'");
      if (key.text == "duration") {
        if (tc.duration) fail(key, "duplicate duration axiom");
        expect_punct("=");
        const Token& at = peek();
        DurationBounds b;
        b.min_ms = parse_millis();
        b.max_ms = accept_punct("..") ? parse_millis() : b.min_ms;
        if (b.min_ms > b.max_ms) fail(at, "duration minimum exceeds maximum");
        expect_word("ms");
        tc.duration = b;
      } else if (key.text == "parts") {
        if (!tc.parts.empty()) fail(key, "duplicate parts list");
        expect_punct("=");
        tc.parts.push_back(expect_name(prefix, "time class name"));
        while (peek().kind == Tok::ident && parse_relation(peek().text)) {
          tc.part_relations.push_back(*parse_relation(next().text));
          tc.parts.push_back(expect_name(prefix, "time class name"));
        }
      } else {
        fail(key, "expected 'duration' or 'parts', found '" + key.text + "'");
      }
      expect_punct(";");
    }
    return tc;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Graph helpers

// Strongly connected components that contain a cycle (size > 1 or self loop),
// each sorted, in order of first member.
std::vector<std::vector<std::string>> find_cycles(
    const std::map<std::string, std::vector<std::string>>& edges) {
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> out;
  int counter = 0;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = edges.find(v);
    if (it != edges.end()) {
      for (const auto& w : it->second) {
        if (!edges.count(w)) continue;
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> scc;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
      } while (w != v);
      bool self_loop = false;
      if (it != edges.end())
        self_loop = std::find(it->second.begin(), it->second.end(), v) != it->second.end();
      if (scc.size() > 1 || self_loop) {
        std::sort(scc.begin(), scc.end());
        out.push_back(std::move(scc));
      }
    }
  };
  for (const auto& [v, _] : edges)
    if (!index.count(v)) visit(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

ValidationIssue dangling(const std::string& from, const std::string& to, const std::string& what) {
  return {ValidationIssue::Kind::dangling_reference, {from, to},
          from + ": " + what + " '" + to + "' is not declared"};
}

ValidationIssue cycle(std::vector<std::string> names, const std::string& what) {
  std::string msg = what + " cycle among {" + join(names) + "}";
  return {ValidationIssue::Kind::cycle, std::move(names), std::move(msg)};
}

void report_duplicates(const std::vector<std::string>& names, ValidationReport& report) {
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second)
      report.issues.push_back({ValidationIssue::Kind::duplicate_name, {n}, "duplicate name '" + n + "'"});
}

// Properties declared on a concept or any ancestor; stops on cycles.
void collect_properties(const DomainOntology& o, const std::string& concept_name,
                        std::map<std::string, ValueType>& out, std::set<std::string>& visited) {
  if (!visited.insert(concept_name).second) return;
  const Concept* c = o.find_concept(concept_name);
  if (!c) return;
  for (const auto& p : c->properties) out.emplace(p.name, p.type);
  for (const auto& parent : c->parents) collect_properties(o, parent, out, visited);
}

[[noreturn]] void throw_first(const ValidationReport& report) {
  const auto& issue = report.issues.front();
  if (issue.kind == ValidationIssue::Kind::dangling_reference)
    throw UnresolvedReference(issue.names.back(), issue.names.front());
  throw CyclicDefinition(issue.message);
}

}  // namespace

const Concept* DomainOntology::find_concept(std::string_view name) const {
  const std::string q = qualify(name);
  for (const auto& c : concepts)
    if (c.name == q) return &c;
  return nullptr;
}

const Individual* DomainOntology::find_individual(std::string_view name) const {
  const std::string q = qualify(name);
  for (const auto& i : individuals)
    if (i.name == q) return &i;
  return nullptr;
}

std::string DomainOntology::qualify(std::string_view name) const { return qualify_with(prefix, name); }

const TimeClass* TimeOntology::find_class(std::string_view name) const {
  const std::string q = qualify(name);
  for (const auto& c : classes)
    if (c.name == q) return &c;
  return nullptr;
}

std::string TimeOntology::qualify(std::string_view name) const { return qualify_with(prefix, name); }

Ontology parse_ontology(std::string_view text) { return DocumentParser(text).parse(); }

Ontology load_ontology(std::string_view text) {
  Ontology o = parse_ontology(text);
  ValidationReport report = validate(o);
  if (!report.empty()) throw_first(report);
  return o;
}

DomainOntology load_domain_ontology(std::string_view text) {
  Ontology o = load_ontology(text);
  if (!std::holds_alternative<DomainOntology>(o))
    throw SyntaxError(1, 1, "expected a domain ontology, found a time ontology");
  return std::get<DomainOntology>(std::move(o));
}

TimeOntology load_time_ontology(std::string_view text) {
  Ontology o = load_ontology(text);
  if (!std::holds_alternative<TimeOntology>(o))
    throw SyntaxError(1, 1, "expected a time ontology, found a domain ontology");
  return std::get<TimeOntology>(std::move(o));
}

Ontology load_ontology_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read ontology file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_ontology(buf.str());
}

ValidationReport validate(const DomainOntology& o) {
  ValidationReport report;
  std::vector<std::string> names;
  for (const auto& c : o.concepts) names.push_back(c.name);
  for (const auto& i : o.individuals) names.push_back(i.name);
  report_duplicates(names, report);

  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& c : o.concepts) {
    auto& out = edges[c.name];
    for (const auto& p : c.parents) {
      if (!o.find_concept(p))
        report.issues.push_back(dangling(c.name, p, "parent concept"));
      else
        out.push_back(o.qualify(p));
    }
  }
  for (const auto& i : o.individuals) {
    if (!o.find_concept(i.concept_name)) {
      report.issues.push_back(dangling(i.name, i.concept_name, "concept"));
      continue;
    }
    std::map<std::string, ValueType> props;
    std::set<std::string> visited;
    collect_properties(o, o.qualify(i.concept_name), props, visited);
    for (const auto& [key, _] : i.attributes)
      if (!props.count(key)) report.issues.push_back(dangling(i.name, key, "property"));
  }
  for (auto& members : find_cycles(edges)) report.issues.push_back(cycle(std::move(members), "subsumption"));
  return report;
}

ValidationReport validate(const TimeOntology& o) {
  ValidationReport report;
  std::vector<std::string> names;
  for (const auto& c : o.classes) names.push_back(c.name);
  report_duplicates(names, report);

  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& c : o.classes) {
    auto& out = edges[c.name];
    if (c.duration && c.duration->min_ms > c.duration->max_ms)
      report.issues.push_back({ValidationIssue::Kind::dangling_reference, {c.name},
                               c.name + ": duration minimum exceeds maximum"});
    if (!c.parts.empty() && c.part_relations.size() + 1 != c.parts.size())
      report.issues.push_back({ValidationIssue::Kind::dangling_reference, {c.name},
                               c.name + ": parts and relations do not alternate"});
    for (const auto& p : c.parts) {
      auto [prefix, local] = split_qualified(p);
      if ((!prefix.empty() && prefix != o.prefix) || !o.find_class(p))
        report.issues.push_back(dangling(c.name, p, "part"));
      else
        out.push_back(o.qualify(p));
    }
  }
  for (auto& members : find_cycles(edges)) report.issues.push_back(cycle(std::move(members), "part-of"));
  return report;
}

ValidationReport validate(const Ontology& o) {
  return std::visit([](const auto& x) { return validate(x); }, o);
}

ValidationReport validate_linkage(const DomainOntology& domain, const TimeOntology& time) {
  ValidationReport report;
  for (const auto& c : domain.concepts) {
    if (!c.timeclass) continue;
    auto [prefix, local] = split_qualified(*c.timeclass);
    if (prefix != time.prefix || !time.find_class(*c.timeclass))
      report.issues.push_back(dangling(c.name, *c.timeclass, "timeclass"));
  }
  return report;
}

namespace {

// Local name when the reference is in `prefix`, otherwise fully qualified.
std::string short_name(std::string_view prefix, const std::string& name) {
  auto [p, local] = split_qualified(name);
  return p == prefix ? std::string(local) : name;
}

}  // namespace

std::string serialize(const DomainOntology& o) {
  std::ostringstream out;
  out << "ontology " << o.prefix << " version " << quote(o.version) << "\n";
  for (const auto& c : o.concepts) {
    out << "\nconcept " << short_name(o.prefix, c.name);
    if (!c.parents.empty()) {
      out << " extends ";
      for (std::size_t i = 0; i < c.parents.size(); ++i)
        out << (i ? ", " : "") << short_name(o.prefix, c.parents[i]);
    }
    out << " {\n";
    for (const auto& p : c.properties) out << "  " << p.name << ": " << to_string(p.type) << ";\n";
    if (c.timeclass) out << "  timeclass = " << *c.timeclass << ";\n";
    out << "}\n";
  }
  for (const auto& i : o.individuals) {
    out << "\nindividual " << short_name(o.prefix, i.name) << " : " << short_name(o.prefix, i.concept_name)
        << " {\n";
    for (const auto& [k, v] : i.attributes) out << "  " << k << " = " << format_literal(v) << ";\n";
    out << "}\n";
  }
  return out.str();
}

std::string serialize(const TimeOntology& o) {
  std::ostringstream out;
  out << "ontology " << o.prefix << " version " << quote(o.version) << "\n";
  for (const auto& c : o.classes) {
    out << "\ntimeclass " << short_name(o.prefix, c.name) << " {\n";
    if (c.duration) out << "  duration = " << c.duration->min_ms << ".." << c.duration->max_ms << " ms;\n";
    if (!c.parts.empty()) {
      out << "  parts = " << short_name(o.prefix, c.parts[0]);
      for (std::size_t i = 1; i < c.parts.size(); ++i)
        out << " " << to_string(c.part_relations.at(i - 1)) << " " << short_name(o.prefix, c.parts[i]);
      out << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

DomainEntity resolve(const DomainOntology& o, std::string_view name) {
  auto [prefix, local] = split_qualified(name);
  if (prefix.empty() || prefix == o.prefix) {
    if (const Concept* c = o.find_concept(name)) return *c;
    if (const Individual* i = o.find_individual(name)) return *i;
  }
  throw NotFound(std::string(name));
}

const TimeClass& resolve(const TimeOntology& o, std::string_view name) {
  auto [prefix, local] = split_qualified(name);
  if (prefix.empty() || prefix == o.prefix)
    if (const TimeClass* c = o.find_class(name)) return *c;
  throw NotFound(std::string(name));
}

DurationVerdict check_duration(const TimeOntology& time, std::string_view class_name,
                               const Interval& iv, std::int64_t tolerance_ms) {
  const TimeClass& tc = resolve(time, class_name);
  if (!tc.duration) throw NoDurationAxiom(tc.name);
  DurationVerdict v;
  v.bounds = *tc.duration;
  v.duration_ms = iv.duration();
  if (v.duration_ms > v.bounds.max_ms)
    v.deviation_ms = v.duration_ms - v.bounds.max_ms;
  else if (v.duration_ms < v.bounds.min_ms)
    v.deviation_ms = v.duration_ms - v.bounds.min_ms;
  v.conforms = v.bounds.min_ms - tolerance_ms <= v.duration_ms &&
               v.duration_ms <= v.bounds.max_ms + tolerance_ms;
  return v;
}

}  // namespace chronotate
