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

// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <iostream>
#include <set>
#include <thread>

#include "chronotate/annotator.hpp"
#include "chronotate/service.hpp"
#include "support/cli.hpp"
#include "support/eval_oracle.hpp"
#include "support/oracles.hpp"
#include "support/service_fixture.hpp"
#include "support/shot_streams.hpp"

using namespace chronotate;
namespace fs = std::filesystem;
using testing_support::read_file;

namespace {

const fs::path kFixtures = CHRONOTATE_FIXTURES;
const fs::path kSoccer = kFixtures / "soccer";

struct Failed {
  std::string why;
};

void require(bool cond, const std::string& why) {
  if (!cond) throw Failed{why};
}

int failures = 0;

void criterion(const std::string& name, const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string why;
  try {
    body();
  } catch (const Failed& f) {
    why = f.why;
  } catch (const std::exception& e) {
    why = std::string("exception: ") + e.what();
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (why.empty()) {
    std::cout << "PASS " << name << " (" << static_cast<long>(ms) << " ms)\n";
  } else {
    ++failures;
    std::cout << "FAIL " << name << ": " << why << "\n";
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void relations_exhaustive() {
  const auto t0 = std::chrono::steady_clock::now();
  int pairs = 0;
  for (int as = 0; as <= 6; ++as)
    for (int ae = as + 1; ae <= 6; ++ae)
      for (int bs = 0; bs <= 6; ++bs)
        for (int be = bs + 1; be <= 6; ++be) {
          const auto holding = oracle::relations_holding(as, ae, bs, be);
          require(holding.size() == 1, "not exactly one relation holds");
          require(static_cast<int>(relation(Interval(as, ae), Interval(bs, be))) == holding[0], "relation disagrees with oracle");
          ++pairs;
        }
  require(pairs == 21 * 21, "expected 441 pairs");
  require(seconds_since(t0) < 1.0, "took longer than 1 s");
}

void composition_table() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = oracle::composition_table(8);
  int entries = 0;
  for (int r1 = 0; r1 < 13; ++r1)
    for (int r2 = 0; r2 < 13; ++r2, ++entries)
      require(compose(static_cast<AllenRelation>(r1), static_cast<AllenRelation>(r2)).mask() == table[r1][r2],
              "entry " + std::to_string(r1) + "," + std::to_string(r2) + " differs");
  require(entries == 169, "expected 169 entries");
  require(seconds_since(t0) < 10.0, "took longer than 10 s");
}

void propagation() {
  std::mt19937 rng(20261015);
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + static_cast<int>(rng() % 5);
    std::vector<Interval> ivs;
    for (int i = 0; i < n; ++i) {
      const int s = static_cast<int>(rng() % 12);
      ivs.emplace_back(s, s + 1 + static_cast<int>(rng() % 8));
    }
    IntervalNetwork net;
    for (int i = 0; i < n; ++i) net.add_variable("v" + std::to_string(i));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        RelationSet s = relation(ivs[i], ivs[j]);
        if (rng() % 2) s = s | RelationSet::from_mask(static_cast<std::uint16_t>(rng() & RelationSet::kFullMask));
        net.restrict(i, j, s);
      }
    const auto r = propagate(net);
    require(r.consistent, "realizable network reported inconsistent");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        require(r.network.constraint(i, j).contains(relation(ivs[i], ivs[j])), "propagation removed the true relation");
  }
  IntervalNetwork bad;
  const auto x = bad.add_variable("X"), y = bad.add_variable("Y");
  bad.restrict(x, y, AllenRelation::before);
  bad.restrict(y, x, AllenRelation::before);
  require(!propagate(bad).consistent, "{X before Y, Y before X} reported consistent");
}

void shot_detection() {
  using testing_support::cut_frames;
  using testing_support::synthetic;
  std::mt19937 rng(11);
  const std::vector<std::int64_t> truth{30, 61, 90, 128, 150, 190, 222, 260, 300, 333};
  const auto found = cut_frames(detect_shots(synthetic(400, truth, rng), {0.5, 5}));
  require(found == truth, "precision or recall below 1 on ten clean cuts");
  for (int t = 0; t < 100; ++t) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 500);
    std::vector<std::int64_t> cuts;
    for (std::int64_t f = 1; f < n; ++f)
      if (rng() % 20 == 0) cuts.push_back(f);
    auto s = synthetic(n, cuts, rng);
    s.fps = {static_cast<std::int64_t>(1 + rng() % 60) * 1000, 1001};
    const ShotParams params{0.05 + (rng() % 90) / 100.0, 1 + static_cast<std::int64_t>(rng() % 10)};
    const auto shots = detect_shots(s, params);
    require(!shots.empty() && shots.front().interval.start_ms() == 0 && shots.back().interval.end_ms() == s.duration_ms(),
            "shots do not cover the stream");
    for (std::size_t i = 0; i + 1 < shots.size(); ++i)
      require(shots[i].interval.end_ms() == shots[i + 1].interval.start_ms(), "gap or overlap between shots");
  }
}

void rule_round_trip() {
  auto first = rules::parse_rules(read_file(kFixtures / "rules/corpus.rules"));
  require(first.ok(), "corpus does not parse");
  require(first.rules->rules.size() >= 20, "corpus has fewer than 20 rules");
  const std::string printed = rules::pretty_print(*first.rules);
  auto second = rules::parse_rules(printed);
  require(second.ok() && *second.rules == *first.rules, "printed corpus does not parse back to the same rules");
  require(rules::pretty_print(*second.rules) == printed, "printing is not a fixed point");
}

void evaluation_oracle() {
  oracle::CaseGen gen(4242);
  for (int t = 0; t < 200; ++t) {
    const auto why = oracle::mismatch(gen.next());
    require(why.empty(), "case " + std::to_string(t) + ": " + why);
  }
}

void duration_axioms() {
  const auto soccer = std::get<TimeOntology>(load_ontology_file(kSoccer / "soccertime.onto"));
  const auto basket = std::get<TimeOntology>(load_ontology_file(kFixtures / "basketball/baskettime.onto"));
  const Interval half(0, 2700000);
  require(check_duration(soccer, "soccertime:Half", half).conforms, "soccer half of 45 min rejected");
  const auto v = check_duration(basket, "baskettime:Half", half);
  require(!v.conforms, "basketball half of 45 min accepted");
  require(v.deviation_ms == 1500000, "deviation is " + std::to_string(v.deviation_ms));
}

void golden_identity() {
  const std::string golden = read_file(kSoccer / "golden.ann");
  const auto project = load_project(kSoccer / "soccer.proj");
  require(serialize(annotate(project).annotations) == golden, "first run differs from golden");
  require(serialize(annotate(project).annotations) == golden, "second run differs from golden");

  const auto cli = testing_support::run_cli("annotate --project " + testing_support::quote((kSoccer / "soccer.proj").string()));
  require(cli.exit_code == 0, "CLI annotate failed: " + cli.err);
  testing_support::TempDir root;
  service::Service svc({root.path(), std::nullopt, {}});
  require(svc.handle({"POST", "/projects", testing_support::soccer_create_body(), ""}).status == 201, "project creation failed");
  const auto http = svc.handle({"POST", "/projects/soccer/annotate", "", ""});
  require(http.status == 200, "POST annotate returned " + std::to_string(http.status));
  require(cli.out == http.body, "CLI and service documents differ");
  require(http.body == golden, "service document differs from golden");
}

void concurrent_annotate() {
  testing_support::TempDir root;
  std::mutex mu;
  std::condition_variable cv;
  bool rejected = false;
  service::Service svc({root.path(), std::nullopt, [&](const std::string&) {
                          std::unique_lock lock(mu);
                          cv.wait_for(lock, std::chrono::seconds(5), [&] { return rejected; });
                        }});
  const int port = svc.bind_to_any_port("127.0.0.1");
  require(port > 0, "cannot bind");
  std::thread server([&] { svc.listen_after_bind(); });
  struct Stop {
    service::Service& svc;
    std::thread& t;
    ~Stop() {
      svc.stop();
      t.join();
    }
  } stop{svc, server};

  httplib::Client setup("127.0.0.1", port);
  auto created = setup.Post("/projects", testing_support::soccer_create_body(), "application/json");
  require(created && created->status == 201, "project creation failed");

  for (int it = 0; it < 100; ++it) {
    {
      std::lock_guard lock(mu);
      rejected = false;
    }
    std::array<int, 2> status{0, 0};
    auto fire = [&](int k) {
      httplib::Client c("127.0.0.1", port);
      c.set_read_timeout(30, 0);
      auto res = c.Post("/projects/soccer/annotate", "", "application/json");
      status[k] = res ? res->status : -1;
      if (status[k] == 409) {
        std::lock_guard lock(mu);
        rejected = true;
        cv.notify_all();
      }
    };
    std::thread a(fire, 0), b(fire, 1);
    a.join();
    b.join();
    std::multiset<int> got(status.begin(), status.end());
    require(got == std::multiset<int>{200, 409},
            "iteration " + std::to_string(it) + ": statuses " + std::to_string(status[0]) + ", " + std::to_string(status[1]));
  }
}

}  // namespace

int main() {
  criterion("allen relations exhaustive over endpoints 0..6", relations_exhaustive);
  criterion("composition table matches 169 brute-force entries", composition_table);
  criterion("path consistency on 1000 realizable networks and a contradictory pair", propagation);
  criterion("shot detection recovers clean cuts and tiles random streams", shot_detection);
  criterion("rule corpus print/parse round trip", rule_round_trip);
  criterion("rule evaluation matches brute force on 200 cases", evaluation_oracle);
  criterion("duration axioms accept soccer and reject basketball", duration_axioms);
  criterion("golden annotation document is byte identical across runs and transports", golden_identity);
  criterion("concurrent annotate yields exactly one 200 and one 409", concurrent_annotate);
  return failures;
}
