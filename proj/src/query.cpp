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

#include <map>

#include "chronotate/annotator.hpp"

namespace chronotate {

namespace {

void require_concept(const AnnotationSet& set, const std::string& name, const DomainOntology* domain) {
  auto [prefix, local] = split_qualified(name);
  if (local.empty() || prefix.empty()) throw UnknownConcept(name);
  if (domain) {
    if (prefix != domain->prefix || !domain->find_concept(name)) throw UnknownConcept(name);
  } else if (prefix != set.domain.prefix) {
    throw UnknownConcept(name);
  }
}

}  // namespace

QueryResult query(const AnnotationSet& set, const TemporalQuery& q, const DomainOntology* domain) {
  require_concept(set, q.concept_name, domain);
  QueryResult result;
  if (q.reference) {
    for (const auto& a : set.annotations)
      if (a.concept_name == q.concept_name && relation(a.interval, *q.reference) == q.relation) result.matches.push_back(a);
    return result;
  }
  if (!q.other_concept) throw Error("query needs a reference interval or a second concept");
  require_concept(set, *q.other_concept, domain);
  result.pair_form = true;
  for (std::size_t i = 0; i < set.annotations.size(); ++i) {
    const auto& a = set.annotations[i];
    if (a.concept_name != q.concept_name) continue;
    for (std::size_t j = 0; j < set.annotations.size(); ++j) {
      const auto& b = set.annotations[j];
      if (i == j || b.concept_name != *q.other_concept) continue;
      if (relation(a.interval, b.interval) == q.relation) result.pairs.emplace_back(a, b);
    }
  }
  return result;
}

ConsistencyReport consistency_check(const AnnotationSet& set, const TimeOntology& time,
                                    const DomainOntology& domain, std::int64_t tolerance_ms) {
  ConsistencyReport report;

  // Time class of each annotation, when its concept links one. Only linked
  // annotations enter the network; the rest carry no part constraints.
  std::vector<const TimeClass*> linked(set.annotations.size(), nullptr);
  std::vector<std::size_t> node(set.annotations.size(), 0);
  IntervalNetwork net;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < set.annotations.size(); ++i) {
    const Annotation& a = set.annotations[i];
    const Concept* c = domain.find_concept(a.concept_name);
    const TimeClass* tc = nullptr;
    if (c && c->timeclass) {
      auto [prefix, local] = split_qualified(*c->timeclass);
      if (prefix == time.prefix) tc = time.find_class(*c->timeclass);
    }
    linked[i] = tc;
    if (tc) {
      ++report.linked;
      node[i] = net.add_variable(a.id);
      members.push_back(i);
    } else {
      ++report.unlinked;
    }
  }
  for (std::size_t x = 0; x < members.size(); ++x)
    for (std::size_t y = x + 1; y < members.size(); ++y)
      net.restrict(x, y, relation(set.annotations[members[x]].interval, set.annotations[members[y]].interval));

  // Consecutive parts of every time class order the annotations of those parts.
  struct Required {
    std::size_t first, second;
    AllenRelation rel;
    const TimeClass* owner;
  };
  std::vector<Required> required;
  for (const auto& owner : time.classes) {
    for (std::size_t p = 0; p + 1 < owner.parts.size(); ++p) {
      const std::string first = time.qualify(owner.parts[p]);
      const std::string second = time.qualify(owner.parts[p + 1]);
      for (std::size_t i : members) {
        if (linked[i]->name != first) continue;
        for (std::size_t j : members) {
          if (i == j || linked[j]->name != second) continue;
          net.restrict(node[i], node[j], owner.part_relations[p]);
          required.push_back({i, j, owner.part_relations[p], &owner});
        }
      }
    }
  }

  const PropagationResult prop = propagate(net);
  report.network_consistent = prop.consistent;
  if (!prop.consistent) {
    for (const auto& r : required) {
      const auto actual = relation(set.annotations[r.first].interval, set.annotations[r.second].interval);
      if (actual != r.rel)
        report.ordering_violations.push_back(
            {r.owner->name, set.annotations[r.first].id, set.annotations[r.second].id, r.rel, actual});
    }
  }

  for (std::size_t i = 0; i < linked.size(); ++i) {
    if (!linked[i] || !linked[i]->duration) continue;
    const Annotation& a = set.annotations[i];
    DurationVerdict v = check_duration(time, linked[i]->name, a.interval, tolerance_ms);
    if (!v.conforms) report.duration_violations.push_back({a.id, a.concept_name, linked[i]->name, v});
  }
  return report;
}

}  // namespace chronotate
