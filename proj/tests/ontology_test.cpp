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
#include <random>

#include "chronotate/ontology.hpp"

namespace chronotate {
namespace {

const std::filesystem::path kFixtures = CHRONOTATE_FIXTURES;

DomainOntology soccer() { return std::get<DomainOntology>(load_ontology_file(kFixtures / "soccer/soccer.onto")); }
TimeOntology soccer_time() {
  return std::get<TimeOntology>(load_ontology_file(kFixtures / "soccer/soccertime.onto"));
}
TimeOntology basketball_time() {
  return std::get<TimeOntology>(load_ontology_file(kFixtures / "basketball/baskettime.onto"));
}

bool has_issue(const ValidationReport& r, ValidationIssue::Kind kind) {
  for (const auto& i : r.issues)
    if (i.kind == kind) return true;
  return false;
}

TEST(Ontology, LoadsSoccerFixture) {
  const auto o = soccer();
  EXPECT_EQ(o.prefix, "soccer");
  EXPECT_EQ(o.version, "1.0");
  const Concept* goal = o.find_concept("soccer:Goal");
  ASSERT_NE(goal, nullptr);
  EXPECT_EQ(goal->parents, std::vector<std::string>{"soccer:Event"});
  EXPECT_EQ(o.find_concept("Goal"), goal);
  EXPECT_EQ(o.find_concept("soccer:FirstHalf")->timeclass, "soccertime:FirstHalf");
  EXPECT_EQ(o.qualify("Goal"), "soccer:Goal");
  EXPECT_EQ(o.qualify("other:Goal"), "other:Goal");
}

TEST(Ontology, ResolvesIndividualsAndConcepts) {
  const auto o = soccer();
  auto barca = resolve(o, "soccer:Barcelona");
  ASSERT_TRUE(std::holds_alternative<Individual>(barca));
  const auto& ind = std::get<Individual>(barca);
  EXPECT_EQ(ind.concept_name, "soccer:Team");
  EXPECT_EQ(std::get<std::string>(ind.attributes.at("name")), "FC Barcelona");
  EXPECT_TRUE(std::holds_alternative<Concept>(resolve(o, "soccer:Player")));
  EXPECT_THROW(resolve(o, "soccer:Referee"), NotFound);
  EXPECT_EQ(resolve(soccer_time(), "soccertime:Half").duration->max_ms, 2700000);
  EXPECT_THROW(resolve(soccer_time(), "soccertime:Quarter"), NotFound);
}

TEST(Ontology, SyntaxErrorCarriesPosition) {
  try {
    parse_ontology("ontology x version 1\n\nconcept A {\n  name string;\n}\n");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.col(), 8);
  }
}

TEST(Ontology, MixedDocumentIsRejected) {
  EXPECT_THROW(parse_ontology("ontology x version 1\nconcept A { }\ntimeclass T { duration = 5 ms; }\n"),
               SyntaxError);
}

TEST(Ontology, DuplicateDeclarationIsSyntaxError) {
  EXPECT_THROW(parse_ontology("ontology x version 1\nconcept A { }\nconcept A { }\n"), SyntaxError);
}

TEST(Ontology, DanglingParentIsReported) {
  const char* text = "ontology x version 1\nconcept A extends Missing { }\n";
  const auto report = validate(parse_ontology(text));
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].kind, ValidationIssue::Kind::dangling_reference);
  EXPECT_EQ(report.issues[0].names, (std::vector<std::string>{"x:A", "x:Missing"}));
  EXPECT_THROW(load_ontology(text), UnresolvedReference);
}

TEST(Ontology, UndeclaredIndividualAttributeIsReported) {
  const auto report = validate(parse_ontology(
      "ontology x version 1\nconcept T { name: string; }\nindividual i : T { colour = \"red\"; }\n"));
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].kind, ValidationIssue::Kind::dangling_reference);
}

TEST(Ontology, InheritedPropertiesCount) {
  EXPECT_TRUE(validate(parse_ontology("ontology x version 1\nconcept B { n: int; }\nconcept T extends B { }\n"
                                      "individual i : T { n = 3; }\n"))
                  .empty());
}

TEST(Ontology, SubsumptionCycleIsReported) {
  const char* text = "ontology x version 1\nconcept A extends C { }\nconcept B extends A { }\nconcept C extends B { }\n";
  const auto report = validate(parse_ontology(text));
  ASSERT_TRUE(has_issue(report, ValidationIssue::Kind::cycle));
  EXPECT_EQ(report.issues[0].names, (std::vector<std::string>{"x:A", "x:B", "x:C"}));
  EXPECT_THROW(load_ontology(text), CyclicDefinition);
}

TEST(Ontology, SelfParentIsACycle) {
  EXPECT_TRUE(has_issue(validate(parse_ontology("ontology x version 1\nconcept A extends A { }\n")),
                        ValidationIssue::Kind::cycle));
}

TEST(Ontology, TimePartsMustResolve) {
  const auto report = validate(parse_ontology("ontology t version 1\ntimeclass M { parts = A before B; }\n"
                                              "timeclass A { duration = 5 ms; }\n"));
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].names, (std::vector<std::string>{"t:M", "t:B"}));
}

TEST(Ontology, PartOfCycleIsReported) {
  EXPECT_TRUE(has_issue(validate(parse_ontology("ontology t version 1\ntimeclass A { parts = B meets B; }\n"
                                                "timeclass B { parts = A; }\n")),
                        ValidationIssue::Kind::cycle));
}

TEST(Ontology, LinkageToMissingTimeClass) {
  auto domain = std::get<DomainOntology>(
      parse_ontology("ontology d version 1\nconcept Half { timeclass = soccertime:Quarter; }\n"));
  const auto report = validate_linkage(domain, soccer_time());
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_TRUE(validate_linkage(soccer(), soccer_time()).empty());
}

TEST(Duration, SoccerHalfAcceptsFortyFiveMinutes) {
  const auto v = check_duration(soccer_time(), "soccertime:Half", Interval(0, 2700000));
  EXPECT_TRUE(v.conforms);
  EXPECT_EQ(v.deviation_ms, 0);
  EXPECT_EQ(v.duration_ms, 2700000);
}

TEST(Duration, BasketballHalfRejectsFortyFiveMinutes) {
  const auto v = check_duration(basketball_time(), "baskettime:Half", Interval(0, 2700000));
  EXPECT_FALSE(v.conforms);
  EXPECT_EQ(v.deviation_ms, 2700000 - 1200000);
  EXPECT_EQ(v.bounds.max_ms, 1200000);
}

TEST(Duration, BelowRangeAndTolerance) {
  const auto t = std::get<TimeOntology>(
      parse_ontology("ontology t version 1\ntimeclass R { duration = 100..200 ms; }\ntimeclass P { }\n"));
  EXPECT_TRUE(check_duration(t, "t:R", Interval(0, 150)).conforms);
  EXPECT_TRUE(check_duration(t, "t:R", Interval(0, 100)).conforms);
  EXPECT_TRUE(check_duration(t, "t:R", Interval(0, 200)).conforms);
  auto low = check_duration(t, "t:R", Interval(0, 90));
  EXPECT_FALSE(low.conforms);
  EXPECT_EQ(low.deviation_ms, -10);
  EXPECT_TRUE(check_duration(t, "t:R", Interval(0, 90), 10).conforms);
  EXPECT_FALSE(check_duration(t, "t:R", Interval(0, 211), 10).conforms);
  EXPECT_THROW(check_duration(t, "t:P", Interval(0, 5)), NoDurationAxiom);
  EXPECT_THROW(check_duration(t, "t:Nope", Interval(0, 5)), NotFound);
}

TEST(Serialize, FixturesRoundTrip) {
  const auto d = soccer();
  EXPECT_EQ(std::get<DomainOntology>(load_ontology(serialize(d))), d);
  const auto t = soccer_time();
  EXPECT_EQ(std::get<TimeOntology>(load_ontology(serialize(t))), t);
  EXPECT_EQ(serialize(std::get<DomainOntology>(load_ontology(serialize(d)))), serialize(d));
}

// Random well-formed ontologies survive serialize -> load unchanged.
TEST(Serialize, RandomDomainRoundTrip) {
  std::mt19937 rng(42);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  for (int t = 0; t < 200; ++t) {
    DomainOntology o{"p" + std::to_string(t % 7), std::to_string(t) + ".0-beta", {}, {}};
    const int n = 1 + pick(6);
    for (int i = 0; i < n; ++i) {
      Concept c;
      c.name = o.prefix + ":C" + std::to_string(i);
      for (int j = 0; j < i; ++j)
        if (pick(3) == 0) c.parents.push_back(o.prefix + ":C" + std::to_string(j));
      if (pick(2)) c.properties.push_back({"s" + std::to_string(i), ValueType::string});
      if (pick(2)) c.properties.push_back({"n" + std::to_string(i), ValueType::integer});
      if (pick(2)) c.properties.push_back({"d" + std::to_string(i), ValueType::decimal});
      if (pick(4) == 0) c.timeclass = "tt:T" + std::to_string(i);
      o.concepts.push_back(std::move(c));
    }
    for (int i = 0; i < pick(4); ++i) {
      Individual ind;
      ind.name = o.prefix + ":i" + std::to_string(i);
      const Concept& c = o.concepts[static_cast<std::size_t>(pick(n))];
      ind.concept_name = c.name;
      for (const auto& p : c.properties) {
        if (p.type == ValueType::string) ind.attributes[p.name] = std::string("q\"uote\\ ") + std::to_string(pick(100));
        if (p.type == ValueType::integer) ind.attributes[p.name] = std::int64_t{pick(2001) - 1000};
        if (p.type == ValueType::decimal) ind.attributes[p.name] = (pick(2001) - 1000) / 8.0 + 0.125;
      }
      o.individuals.push_back(std::move(ind));
    }
    ASSERT_TRUE(validate(o).empty());
    const auto back = load_ontology(serialize(o));
    ASSERT_TRUE(std::holds_alternative<DomainOntology>(back));
    ASSERT_EQ(std::get<DomainOntology>(back), o) << serialize(o);
  }
}

TEST(Serialize, RandomTimeRoundTrip) {
  std::mt19937 rng(43);
  for (int t = 0; t < 200; ++t) {
    TimeOntology o{"tt", "v" + std::to_string(t), {}};
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      TimeClass c;
      c.name = "tt:T" + std::to_string(i);
      if (rng() % 2) {
        const std::int64_t lo = rng() % 100000;
        c.duration = DurationBounds{lo, lo + static_cast<std::int64_t>(rng() % 3) * 1000};
      }
      if (i >= 2 && rng() % 2) {
        c.parts = {"tt:T0", "tt:T1"};
        c.part_relations = {kAllRelations[rng() % kRelationCount]};
      }
      o.classes.push_back(std::move(c));
    }
    const auto back = load_ontology(serialize(o));
    ASSERT_TRUE(std::holds_alternative<TimeOntology>(back));
    ASSERT_EQ(std::get<TimeOntology>(back), o) << serialize(o);
  }
}

}  // namespace
}  // namespace chronotate
