// Copyright 2026 The gract Authors
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
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "gract/explorer.hpp"
#include "gract/parser.hpp"
#include "gract/printer.hpp"

using namespace gract;
using gract::testing::load_corpus;
using gract::testing::read_corpus;

namespace {

Configuration all_idle(const Program& p) {
  Configuration c;
  c.resources = p.init;
  for (const auto& a : p.actors) c.process.push_back(Idle{a.name});
  return c;
}

Thread thread(const Program& p, const std::string& actor, const std::string& future,
              const std::string& body) {
  return Thread{{}, parse_expr(body, p), future, actor, true};
}

// Configurations visited by a seeded random run of the cafe.
std::vector<Configuration> random_states(const Program& p, std::uint64_t seed, std::uint64_t n) {
  Trace t = run(p, initial_configuration(p), random_chooser(seed), n);
  std::vector<Configuration> out{t.initial};
  for (const auto& s : t.steps) out.push_back(s.config);
  return out;
}

// Renames every future `f#i` to `f#(i + shift)` outside expressions.
Configuration shift_futures(const Configuration& c, std::uint64_t shift) {
  auto fut = [&](const std::string& f) { return fresh_future_name(*fresh_index(f) + shift); };
  auto val = [&](const Value& v) -> Value {
    if (const auto* f = std::get_if<FutureValue>(&v)) return future_value(fut(f->name));
    return v;
  };
  Configuration out = c;
  for (auto& atom : out.process) {
    if (auto* t = std::get_if<Thread>(&atom)) {
      t->future = fut(t->future);
      for (auto& [x, v] : t->env) v = val(v);
    } else if (auto* m = std::get_if<CallMsg>(&atom)) {
      m->future = fut(m->future);
      for (auto& v : m->args) v = val(v);
    } else if (auto* f = std::get_if<Fulfilled>(&atom)) {
      f->future = fut(f->future);
      f->value = val(f->value);
    }
  }
  return out;
}

bool mentions_no_future_literal(const Configuration& c) {
  for (const auto& atom : c.process)
    if (const auto* t = std::get_if<Thread>(&atom); t && !futures_in(*t->expr).empty())
      return false;
  return true;
}

}  // namespace

TEST_CASE("idle actors commute under canonicalization") {
  Program cafe = load_corpus("cafe.gract");
  Configuration ab{{}, {Idle{"A"}, Idle{"B"}}, 0};
  Configuration ba{{}, {Idle{"B"}, Idle{"A"}}, 0};
  CHECK(canonical_key(cafe.monoid(), ab) == canonical_key(cafe.monoid(), ba));
}

TEST_CASE("a fulfilled future and its reader do not commute") {
  Program cafe = load_corpus("cafe.gract");
  const auto& m = cafe.monoid();
  Atom done = Fulfilled{"f#0", unit_value()};
  Atom reader = thread(cafe, "Customer", "f#1", "f#0?");
  REQUIRE_FALSE(independent(done, reader));
  Configuration before{{}, {done, reader}, 2};
  Configuration after{{}, {reader, done}, 2};
  CHECK(canonical_key(m, before) != canonical_key(m, after));
}

TEST_CASE("yield followed by activate returns to the same canonical state") {
  Program cafe = load_corpus("cafe.gract");
  const auto& m = cafe.monoid();
  std::size_t round_trips = 0;
  for (const auto& c : random_states(cafe, 11, 60)) {
    std::string key = canonical_key(m, c);
    for (const auto& yielded : precongruence_moves(m, c.process)) {
      if (yielded.size() != c.process.size() + 1) continue;
      Configuration y{c.resources, yielded, c.fresh};
      CHECK(canonical_key(m, y) != key);
      bool back = false;
      for (const auto& q : precongruence_moves(m, yielded))
        if (q.size() == c.process.size())
          back = back || canonical_key(m, Configuration{c.resources, q, c.fresh}) == key;
      CHECK(back);
      ++round_trips;
    }
  }
  CHECK(round_trips > 0);
}

TEST_CASE("canonical keys ignore legal swaps and fresh-name choice") {
  Program cafe = load_corpus("cafe.gract");
  const auto& m = cafe.monoid();
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    for (const auto& c : random_states(cafe, seed, 80)) {
      std::string key = canonical_key(m, c);
      Configuration canon = canonicalize(c);
      CHECK(canonical_key(m, canon) == key);
      CHECK(well_formed(canon).empty());
      CHECK(config_measure(cafe, canon) == config_measure(cafe, c));

      Configuration shuffled = c;
      for (int k = 0; k < 20; ++k) {
        auto moves = precongruence_moves(m, shuffled.process);
        std::vector<Process> swaps;
        for (auto& q : moves)
          if (q.size() == shuffled.process.size()) swaps.push_back(std::move(q));
        if (swaps.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, swaps.size() - 1);
        shuffled.process = swaps[pick(rng)];
      }
      CHECK(canonical_key(m, shuffled) == key);
      // Futures written inside expressions are not rewritten by the helper.
      if (mentions_no_future_literal(c)) CHECK(canonical_key(m, shift_futures(c, 50)) == key);
    }
  }
}

TEST_CASE("recursive methods are the ones on a call cycle") {
  Program cafe = load_corpus("cafe.gract");
  auto rec = recursive_methods(cafe);
  CHECK(rec == std::set<std::pair<std::string, std::string>>{{"Customer", "main"}});
}

TEST_CASE("subject reduction holds along the scripted cafe opening") {
  Program cafe = load_corpus("cafe.gract");
  std::string error;
  auto script = parse_script(read_corpus("cafe-opening.script"));
  Trace t = run(cafe, initial_configuration(cafe), script_chooser(script, &error), script.size());
  REQUIRE(t.steps.size() == script.size());
  SrReport r = check_subject_reduction(cafe, t);
  INFO((r.violation ? r.violation->code + " " + r.violation->detail : std::string()));
  CHECK(r.ok());
  CHECK(r.steps_checked == t.steps.size());
}

TEST_CASE("subject reduction on an empty trace is vacuous") {
  Program cafe = load_corpus("cafe.gract");
  Trace t;
  t.initial = initial_configuration(cafe);
  SrReport r = check_subject_reduction(cafe, t);
  CHECK(r.ok());
  CHECK(r.steps_checked == 0);
}

TEST_CASE("subject reduction holds along random cafe runs") {
  Program cafe = load_corpus("cafe.gract");
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    Trace t = run(cafe, initial_configuration(cafe), random_chooser(seed), 200);
    SrReport r = check_subject_reduction(cafe, t);
    INFO("seed " << seed);
    INFO((r.violation ? r.violation->code + " " + r.violation->detail : std::string()));
    CHECK(r.ok());
  }
}

TEST_CASE("a resource moved between actors is caught at that step") {
  Program cafe = load_corpus("cafe.gract");
  const auto& m = cafe.monoid();
  Trace t = run(cafe, initial_configuration(cafe), fifo_chooser(), 200);
  REQUIRE(t.steps.size() > 3);
  std::size_t k = 2;
  REQUIRE(ctx_get(m, t.steps[k].config.resources, "Barista", "CleanCup") == Grade::finite(1));
  ctx_set(t.steps[k].config.resources, "Barista", "CleanCup", Grade::finite(0));
  ctx_set(t.steps[k].config.resources, "Counter", "CleanCup", Grade::finite(1));
  SrReport r = check_subject_reduction(cafe, t);
  REQUIRE(r.violation);
  CHECK(r.violation->step == k + 1);
  CHECK(r.steps_checked == k);
}

TEST_CASE("the helpful run of the cafe strictly decreases to zero") {
  Program cafe = load_corpus("cafe.gract");
  HelpfulRun h = helpful_run(cafe, initial_configuration(cafe));
  INFO(h.failure);
  REQUIRE(h.ok());
  REQUIRE(h.trace.initial_measure);
  Measure prev = *h.trace.initial_measure;
  CHECK(prev == config_measure(cafe, initial_configuration(cafe)));
  for (const auto& s : h.trace.steps) {
    REQUIRE(s.measure);
    CHECK(*s.measure < prev);
    CHECK(*s.measure == config_measure(cafe, s.config));
    prev = *s.measure;
  }
  CHECK(prev == 0);
  CHECK(is_terminated(h.trace.steps.back().config));
  CHECK(h.trace.steps.size() <= *h.trace.initial_measure);
  CHECK(h.trace.status == RunStatus::kTerminated);
}

TEST_CASE("the helpful run of a terminated configuration is empty") {
  Program cafe = load_corpus("cafe.gract");
  HelpfulRun h = helpful_run(cafe, all_idle(cafe));
  CHECK(h.ok());
  CHECK(h.trace.steps.empty());
  CHECK(h.trace.initial_measure == Measure{0});
}

TEST_CASE("the helpful chooser drives run to termination") {
  Program cafe = load_corpus("cafe.gract");
  Trace t = run(cafe, initial_configuration(cafe), helpful_chooser(cafe), 1000);
  CHECK(t.status == RunStatus::kTerminated);
  CHECK(t.steps.size() == helpful_run(cafe, initial_configuration(cafe)).trace.steps.size());
}

TEST_CASE("the cafe is fair terminating with two unfoldings") {
  Program cafe = load_corpus("cafe.gract");
  ExploreBounds b;
  b.unfold = 2;
  ExploreResult r = explore(cafe, initial_configuration(cafe), b);
  CHECK(r.verdict == VerdictKind::kFairTerminating);
  CHECK(r.helpful_violations == 0);
  CHECK(r.zero_violations == 0);
  CHECK(r.untyped_states == 0);
  CHECK(r.frontier_states == 0);
  CHECK(r.truncated_states == 0);
  CHECK(r.terminated_states > 0);
  CHECK(r.measure_histogram.at(0) == r.terminated_states);
  CHECK_FALSE(r.witness.steps.empty());
  CHECK(is_terminated(r.witness.steps.back().config));
  CHECK(check_subject_reduction(cafe, r.witness).ok());

  b.jobs = 4;
  ExploreResult again = explore(cafe, initial_configuration(cafe), b);
  CHECK(again.states == r.states);
  CHECK(again.transitions == r.transitions);
  CHECK(again.measure_histogram == r.measure_histogram);
}

TEST_CASE("more unfoldings only add states") {
  Program cafe = load_corpus("cafe.gract");
  ExploreBounds b;
  std::uint64_t prev = 0;
  for (std::uint64_t u = 1; u <= 3; ++u) {
    b.unfold = u;
    ExploreResult r = explore(cafe, initial_configuration(cafe), b);
    CHECK(r.verdict == VerdictKind::kFairTerminating);
    CHECK(r.states > prev);
    prev = r.states;
  }
}

TEST_CASE("with no unfolding only the recursive branches are pruned") {
  Program cafe = load_corpus("cafe.gract");
  ExploreBounds b;
  b.unfold = 0;
  ExploreResult r = explore(cafe, initial_configuration(cafe), b);
  CHECK(r.pruned_transitions > 0);
  CHECK(r.truncated_states == 0);
  CHECK(r.verdict == VerdictKind::kFairTerminating);
  CHECK(r.terminated_states == 1);
}

TEST_CASE("a state whose only step is pruned is truncated") {
  Program p = parse_program(
      "grade natLeq\n"
      "A {\n"
      "  loop(): Unit requires {} produces {} measure 0 {\n"
      "    (f = A!loop(); f?; return unit (+) g = A!loop(); g?; return unit)\n"
      "  }\n"
      "}\n"
      "init {}; start A!loop()");
  ExploreBounds b;
  b.unfold = 0;
  b.check_measures = false;
  ExploreResult r = explore(p, initial_configuration(p), b);
  CHECK(r.truncated_states > 0);
  CHECK(r.verdict == VerdictKind::kBoundExhausted);
}

TEST_CASE("without a clean cup exploration finds the stuck hold") {
  Program nocup = load_corpus("cafe-nocup.gract");
  ExploreBounds b;
  b.check_measures = false;
  ExploreResult r = explore(nocup, initial_configuration(nocup), b);
  REQUIRE(r.verdict == VerdictKind::kStuckFound);
  REQUIRE(r.stuck_state);
  CHECK_FALSE(is_terminated(*r.stuck_state));
  REQUIRE_FALSE(r.diagnosis.empty());
  CHECK(r.diagnosis[0].code == "StuckAtHold");
  CHECK(r.diagnosis[0].actor == "Barista");
  CHECK(r.diagnosis[0].resource == "CleanCup");
  CHECK(r.diagnosis[0].grade == Grade::finite(1));
  CHECK(step_config(nocup, r.witness.steps.back().config).empty());
}

TEST_CASE("a terminated start is one state") {
  Program cafe = load_corpus("cafe.gract");
  ExploreResult r = explore(cafe, all_idle(cafe), ExploreBounds{});
  CHECK(r.verdict == VerdictKind::kFairTerminating);
  CHECK(r.states == 1);
  CHECK(r.witness.steps.empty());
}

TEST_CASE("depth zero exhausts the bound") {
  Program cafe = load_corpus("cafe.gract");
  ExploreBounds b;
  b.max_depth = 0;
  ExploreResult r = explore(cafe, initial_configuration(cafe), b);
  CHECK(r.verdict == VerdictKind::kBoundExhausted);
  CHECK(r.states == 1);
  CHECK(r.frontier_states == 1);
}

TEST_CASE("a state limit exhausts the bound") {
  Program cafe = load_corpus("cafe.gract");
  ExploreBounds b;
  b.max_states = 10;
  ExploreResult r = explore(cafe, initial_configuration(cafe), b);
  CHECK(r.verdict == VerdictKind::kBoundExhausted);
  CHECK(r.states == 10);
}

TEST_CASE("the privacy example terminates fairly") {
  Program p = load_corpus("privacy.gract");
  ExploreResult r = explore(p, initial_configuration(p), ExploreBounds{});
  CHECK(r.verdict == VerdictKind::kFairTerminating);
  CHECK(r.helpful_violations == 0);
  CHECK(r.zero_violations == 0);
}
