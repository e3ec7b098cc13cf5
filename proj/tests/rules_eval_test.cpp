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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chronotate/ontology.hpp"
#include "chronotate/rules.hpp"
#include "support/eval_oracle.hpp"

namespace chronotate::rules {
namespace {

const std::filesystem::path kFixtures = CHRONOTATE_FIXTURES;

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Env {
  DomainOntology domain = std::get<DomainOntology>(load_ontology_file(kFixtures / "soccer/soccer.onto"));
  TimeOntology time = std::get<TimeOntology>(load_ontology_file(kFixtures / "soccer/soccertime.onto"));
  EventRegistry registry = EventRegistry::defaults();

  CheckResult check(const std::string& text) const {
    auto parsed = parse_rules(text);
    EXPECT_TRUE(parsed.ok()) << (parsed.diagnostics.empty() ? "" : parsed.diagnostics[0].message);
    if (!parsed.ok()) return {};
    return check_rules(*parsed.rules, domain, time, registry);
  }

  std::vector<Diagnostic> diags(const std::string& text) const { return check(text).diagnostics; }

  EvaluationResult eval(const std::string& text, const std::vector<Event>& timeline,
                        const EvaluationLimits& limits = {}) const {
    auto checked = check(text);
    EXPECT_TRUE(checked.ok()) << (checked.diagnostics.empty() ? "" : checked.diagnostics[0].message);
    return evaluate(*checked.rules, timeline, domain, time, limits);
  }
};

std::string one_rule(const std::string& when, const std::string& where, const std::string& annotate) {
  return "rule \"r\" {\n  when " + when + "\n" + (where.empty() ? "" : "  where " + where + "\n") + "  annotate " +
         annotate + "\n}\n";
}

Event ocr(std::string id, std::int64_t s, std::int64_t e, std::string text, double conf = 1.0) {
  Event ev{std::move(id), "ocr_text", Interval(s, e), conf, {}};
  ev.attributes["text"] = std::move(text);
  ev.attributes["track_id"] = std::int64_t{1};
  return ev;
}

Event shot(std::string id, std::int64_t s, std::int64_t e, std::int64_t index) {
  Event ev{std::move(id), "shot", Interval(s, e), 1.0, {}};
  ev.attributes["index"] = index;
  ev.attributes["start_frame"] = s / 40;
  ev.attributes["end_frame"] = e / 40;
  return ev;
}

TEST(Check, GoldenRulesPass) {
  Env env;
  EXPECT_TRUE(env.check(read(kFixtures / "soccer/soccer.rules")).ok());
  EXPECT_TRUE(env.check(read(kFixtures / "rules/corpus.rules")).ok());
}

TEST(Check, UnknownConceptHasSpan) {
  Env env;
  auto d = env.diags(one_rule("shot s", "", "soccer:Referee(interval = s)"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "unknown_concept");
  EXPECT_EQ(d[0].span.line, 3);
  EXPECT_EQ(d[0].span.col, 12);
  EXPECT_EQ(d[0].span.end_col, 26);
  // Concepts from another prefix and individuals are not annotation targets.
  EXPECT_EQ(env.diags(one_rule("shot s", "", "other:Goal(interval = s)"))[0].code, "unknown_concept");
  EXPECT_EQ(env.diags(one_rule("shot s", "", "soccer:Barcelona(interval = s)"))[0].code, "unknown_concept");
}

TEST(Check, DiagnosticCodes) {
  Env env;
  auto code = [&](const std::string& when, const std::string& where, const std::string& ann) {
    auto d = env.diags(one_rule(when, where, ann));
    return d.empty() ? std::string("ok") : d[0].code;
  };
  EXPECT_EQ(code("fish f", "", "soccer:Goal(interval = f)"), "unknown_event_type");
  EXPECT_EQ(code("shot s, shot s", "", "soccer:Goal(interval = s)"), "duplicate_variable");
  EXPECT_EQ(code("shot s", "t.index == 1", "soccer:Goal(interval = s)"), "unbound_variable");
  EXPECT_EQ(code("shot s", "s.text == \"x\"", "soccer:Goal(interval = s)"), "unknown_field");
  EXPECT_EQ(code("shot s", "s.index + \"x\" == 1", "soccer:Goal(interval = s)"), "type_mismatch");
  EXPECT_EQ(code("shot s", "s.index", "soccer:Goal(interval = s)"), "type_mismatch");
  EXPECT_EQ(code("shot s", "", "soccer:Goal(interval = s.index)"), "type_mismatch");
  EXPECT_EQ(code("shot s", "", "soccer:Goal(interval = s, x = s before s)"), "type_mismatch");
  EXPECT_EQ(code("shot s", "duration(s, s) > 1", "soccer:Goal(interval = s)"), "arity");
  EXPECT_EQ(code("shot s", "wobble(s)", "soccer:Goal(interval = s)"), "unknown_function");
  EXPECT_EQ(code("shot s", "conforms(s, \"soccertime:Match\")", "soccer:Goal(interval = s)"), "no_duration_axiom");
  EXPECT_EQ(code("shot s", "conforms(s, \"soccertime:Nope\")", "soccer:Goal(interval = s)"), "unknown_concept");
  EXPECT_EQ(code("shot s", "concept(\"soccer:Nope\") == \"x\"", "soccer:Goal(interval = s)"), "unknown_concept");
  EXPECT_EQ(code("shot s", "span(s, s) before s", "soccer:Goal(interval = s)"), "type_mismatch");
  EXPECT_EQ(code("shot s", "s.confidence > 0.5 and s.id != \"a\" and s.type == \"shot\"", "soccer:Goal(interval = s)"),
            "ok");
  EXPECT_EQ(code("shot s", "s.index * 1.5 > 2", "soccer:Goal(interval = s)"), "ok");
}

TEST(Check, CollectsAllDiagnostics) {
  Env env;
  auto d = env.diags(
      "rule \"a\" { when fish f annotate soccer:Goal(interval = f) }\n"
      "rule \"b\" { when shot s annotate soccer:Nope(interval = s) }\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].span.line, 1);
  EXPECT_EQ(d[1].span.line, 2);
}

TEST(Check, CustomRegistry) {
  Env env;
  env.registry.declare_type("face");
  env.registry.declare_field("face", "person", ValueType::string);
  EXPECT_TRUE(env.check(one_rule("face f", "f.person == \"x\"", "soccer:Player(interval = f, name = f.person)")).ok());
}

TEST(Evaluate, GoldenScenario) {
  Env env;
  const std::vector<Event> timeline{shot("s0", 0, 30000, 0), shot("s1", 30000, 60000, 1), shot("s2", 60000, 64000, 2),
                                    ocr("g", 61000, 62000, "GOAL", 0.9), ocr("u", 62000, 64000, "1-0", 0.5)};
  auto r = env.eval(read(kFixtures / "soccer/soccer.rules"), timeline);
  EXPECT_TRUE(r.errors.empty());
  ASSERT_EQ(r.assertions.size(), 6u);
  // kick-off has the highest priority and comes first.
  EXPECT_EQ(r.assertions[0].concept_name, "soccer:KickOff");
  EXPECT_EQ(std::get<std::string>(r.assertions[0].attributes.at("team")), "soccer:Barcelona");
  const Assertion* score = nullptr;
  for (const auto& a : r.assertions)
    if (a.concept_name == "soccer:ScoreUpdate") score = &a;
  ASSERT_NE(score, nullptr);
  EXPECT_EQ(score->interval, Interval(61000, 64000));
  EXPECT_DOUBLE_EQ(std::get<double>(score->attributes.at("confidence")), 0.9 * 0.5);
  EXPECT_EQ(score->provenance[0].event_ids, (std::vector<std::string>{"g", "u"}));
}

TEST(Evaluate, DuplicatesMergeProvenance) {
  Env env;
  const std::vector<Event> timeline{shot("s0", 0, 100, 0), ocr("a", 10, 20, "A"), ocr("b", 30, 40, "B")};
  auto r = env.eval(one_rule("shot s, ocr_text t", "t during s", "soccer:GoalShot(interval = s)"), timeline);
  ASSERT_EQ(r.assertions.size(), 1u);
  ASSERT_EQ(r.assertions[0].provenance.size(), 2u);
  EXPECT_EQ(r.assertions[0].provenance[1].event_ids, (std::vector<std::string>{"s0", "b"}));
}

TEST(Evaluate, FaultsSkipOnlyTheBinding) {
  Env env;
  const std::vector<Event> timeline{shot("s0", 0, 100, 0), shot("s1", 100, 200, 2)};
  auto r = env.eval(one_rule("shot s", "10 / s.index > 1", "soccer:Shot(interval = s)"), timeline);
  ASSERT_EQ(r.assertions.size(), 1u);
  EXPECT_EQ(r.assertions[0].interval, Interval(100, 200));
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].event_ids, std::vector<std::string>{"s0"});
  EXPECT_EQ(r.errors[0].rule, "r");
}

TEST(Evaluate, OverflowAndMissingAttributeAreFaults) {
  Env env;
  const std::vector<Event> timeline{shot("s0", 0, 100, 4611686018427387904LL)};
  auto r = env.eval(one_rule("shot s", "s.index * 4 > 0", "soccer:Shot(interval = s)"), timeline);
  EXPECT_TRUE(r.assertions.empty());
  EXPECT_EQ(r.errors.size(), 1u);

  Event bare{"x", "ocr_text", Interval(0, 5), 1.0, {}};
  auto m = env.eval(one_rule("ocr_text t", "t.text == \"A\"", "soccer:Goal(interval = t)"), {bare});
  EXPECT_TRUE(m.assertions.empty());
  EXPECT_EQ(m.errors.size(), 1u);
}

TEST(Evaluate, ShortCircuitAvoidsFaults) {
  Env env;
  const std::vector<Event> timeline{shot("s0", 0, 100, 0)};
  auto r = env.eval(one_rule("shot s", "s.index != 0 and 10 / s.index > 1", "soccer:Shot(interval = s)"), timeline);
  EXPECT_TRUE(r.errors.empty());
  auto o = env.eval(one_rule("shot s", "s.index == 0 or 10 / s.index > 1", "soccer:Shot(interval = s)"), timeline);
  EXPECT_TRUE(o.errors.empty());
  EXPECT_EQ(o.assertions.size(), 1u);
}

TEST(Evaluate, ArithmeticSemantics) {
  Env env;
  const std::vector<Event> timeline{shot("s0", 0, 100, 7)};
  auto r = env.eval(one_rule("shot s", "",
                             "soccer:Shot(interval = s, index = -7 / 2, score = s.index * 0.5, team = \"t\")"),
                    timeline);
  // Undeclared attribute names are allowed; integer division truncates.
  ASSERT_EQ(r.assertions.size(), 1u);
  EXPECT_EQ(std::get<std::int64_t>(r.assertions[0].attributes.at("index")), -3);
  EXPECT_DOUBLE_EQ(std::get<double>(r.assertions[0].attributes.at("score")), 3.5);
}

TEST(Evaluate, ConformsUsesDurationAxiom) {
  Env env;
  const std::vector<Event> timeline{shot("h", 0, 2700000, 0), shot("x", 2700000, 2700100, 1)};
  auto r = env.eval(one_rule("shot s", "conforms(s, \"soccertime:Half\")", "soccer:FirstHalf(interval = s)"), timeline);
  ASSERT_EQ(r.assertions.size(), 1u);
  EXPECT_EQ(r.assertions[0].interval, Interval(0, 2700000));
}

TEST(Evaluate, ComplexityLimits) {
  Env env;
  std::vector<Event> timeline;
  for (int i = 0; i < 20; ++i) timeline.push_back(shot("s" + std::to_string(i), i * 10, i * 10 + 10, i));
  const auto five = one_rule("shot a, shot b, shot c, shot d, shot e", "", "soccer:Shot(interval = a)");
  EXPECT_THROW(env.eval(five, timeline), ComplexityLimitExceeded);
  EvaluationLimits tight;
  tight.max_candidates = 100;
  EXPECT_THROW(env.eval(one_rule("shot a, shot b", "", "soccer:Shot(interval = a)"), timeline, tight),
               ComplexityLimitExceeded);
  EXPECT_NO_THROW(env.eval(one_rule("shot a", "", "soccer:Shot(interval = a)"), timeline, tight));
}

TEST(Evaluate, NoMatchingEventsYieldsNothing) {
  Env env;
  auto r = env.eval(read(kFixtures / "soccer/soccer.rules"), {});
  EXPECT_TRUE(r.assertions.empty());
  EXPECT_TRUE(r.errors.empty());
}

TEST(Evaluate, MatchesBruteForceOracle) {
  const auto domain = std::get<DomainOntology>(load_ontology(oracle::kDomainText));
  const auto time = std::get<TimeOntology>(load_ontology(oracle::kTimeText));
  const auto registry = oracle::registry();
  oracle::CaseGen gen(777);
  std::size_t total = 0, merged = 0;
  for (int t = 0; t < 500; ++t) {
    const auto c = gen.next();
    const std::string text = oracle::render(c.rules);
    auto parsed = parse_rules(text);
    ASSERT_TRUE(parsed.ok()) << text;
    auto checked = check_rules(*parsed.rules, domain, time, registry);
    ASSERT_TRUE(checked.ok()) << text << checked.diagnostics[0].message;
    const auto got = evaluate(*checked.rules, c.timeline, domain, time);
    ASSERT_TRUE(got.errors.empty());
    const auto want = oracle::brute_force(c);
    total += want.size();
    for (const auto& w : want) merged += w.provenance.size() > 1;
    ASSERT_EQ(got.assertions.size(), want.size()) << text;
    for (std::size_t i = 0; i < want.size(); ++i) {
      const auto& g = got.assertions[i];
      ASSERT_EQ(g.concept_name, want[i].concept_name) << text;
      ASSERT_EQ(g.interval, want[i].interval) << text;
      ASSERT_EQ(g.attributes, want[i].attributes) << text;
      ASSERT_EQ(g.provenance.size(), want[i].provenance.size()) << text;
      for (std::size_t p = 0; p < g.provenance.size(); ++p) {
        ASSERT_EQ(g.provenance[p].rule, want[i].provenance[p].first);
        ASSERT_EQ(g.provenance[p].event_ids, want[i].provenance[p].second);
      }
    }
  }
  std::cout << "oracle cases produced " << total << " assertions, " << merged << " with merged provenance\n";
  EXPECT_GT(total, 1000u);
  EXPECT_GT(merged, 50u);
}

}  // namespace
}  // namespace chronotate::rules
