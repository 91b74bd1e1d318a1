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
#include "gract/printer.hpp"
#include "gract/typing.hpp"

using namespace gract;
using gract::testing::load_corpus;

namespace {

Grade n(std::uint64_t v) { return Grade::finite(v); }

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const TypeErrorException& e) {
    return e.error().code;
  }
  return "";
}

ActorContext ctx1(const std::string& a, const std::string& r, Grade g) {
  ActorContext c;
  ctx_set(c, a, r, g);
  return c;
}

const char* kSmall =
    "grade natLeq\n"
    "wash(x: Dirty^1): Clean^1\n"
    "B {\n"
    "  give(): Unit requires B: {Clean^1} produces B: {Clean^1} measure 4 {\n"
    "    let c = hold 1 Clean in\n"
    "    release 1 c^1; return unit\n"
    "  }\n"
    "}\n"
    "init {B: {Clean^1}}; start B!give()";

// Measure by summing per-rule constants; independent of any typing.
Measure count_measure(const Program& p, const Expr& e) {
  return std::visit(
      [&](const auto& node) -> Measure {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, Return>) return 0;
        if constexpr (std::is_same_v<N, Call>) return p.method(node.actor, node.method)->measure + 3;
        if constexpr (std::is_same_v<N, Let>)
          return 1 + count_measure(p, *node.bound) + count_measure(p, *node.body);
        if constexpr (std::is_same_v<N, Choice>)
          return 1 + std::min(count_measure(p, *node.left), count_measure(p, *node.right));
        return 1;
      },
      e.node);
}

ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) {
    switch (rng() % 6) {
      case 0:
        return make_return(Value(unit_value()));
      case 1:
        return make_hold(n(rng() % 3), "Clean");
      case 2:
        return make_release(n(1), Value(resource_value("Clean", n(1 + rng() % 2))));
      case 3:
        return make_call("B", "give", {});
      case 4:
        return make_primop("wash", {Value(resource_value("Dirty", n(1)))});
      default:
        return make_release(n(1), GradedVar{"u", n(1)});
    }
  }
  if (rng() % 2) return make_choice(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
  return make_let("$" + std::to_string(rng() % 1000), random_expr(rng, depth - 1),
                  random_expr(rng, depth - 1));
}

}  // namespace

TEST_CASE("value expressions report exactly what they use") {
  auto m = make_nat_leq();
  TypingContext gamma{{"x", Type::res("CC", n(1))}};
  auto vt = type_value_expr(*m, gamma, {}, GradedVar{"x", n(1)});
  CHECK(vt.type == Type::res("CC", n(1)));
  CHECK(vt.vars == VarUsage{{"x", Type::res("CC", n(1))}});
  CHECK(vt.futures.empty());

  Type fut = Type::fut(Type::unit(), ctx1("B", "CC", n(1)));
  FutureContext sigma{{"f", FutureEntry{fut, false}}};
  auto ft = type_value_expr(*m, {}, sigma, Value(future_value("f")));
  CHECK(ft.type == fut);
  CHECK(ft.vars.empty());
  CHECK(ft.futures == std::set<std::string>{"f"});

  auto ut = type_value_expr(*m, {}, {}, Value(unit_value()));
  CHECK(ut.type == Type::unit());
  CHECK(ut.vars.empty());
}

TEST_CASE("value expression errors") {
  auto m = make_nat_leq();
  TypingContext gamma{{"x", Type::res("CC", n(1))}, {"u", Type::unit()}};
  CHECK(error_code([&] { type_value_expr(*m, gamma, {}, VarRef{"nope"}); }) ==
        "UnknownVariable");
  CHECK(error_code([&] { type_value_expr(*m, gamma, {}, GradedVar{"x", n(2)}); }) ==
        "GradeTooSmall");
  CHECK(error_code([&] { type_value_expr(*m, gamma, {}, VarRef{"x"}); }) ==
        "UngradedResourceUse");
  CHECK(error_code([&] { type_value_expr(*m, gamma, {}, GradedVar{"u", n(1)}); }) ==
        "NotAResource");
  FutureContext marked{{"f", FutureEntry{Type::fut(Type::unit(), {}), true}}};
  CHECK(error_code([&] { type_value_expr(*m, {}, marked, Value(future_value("f"))); }) ==
        "MarkedFutureUse");
  CHECK(error_code([&] { type_value_expr(*m, {}, {}, Value(future_value("g"))); }) ==
        "UnknownFuture");
}

TEST_CASE("canonical instances of the basic rules") {
  Program p = parse_program(kSmall);
  auto ret = type_expr(p, "Cs", {}, {}, *make_return(Value(unit_value())));
  CHECK(ret.type == Type::unit());
  CHECK(ret.requires_ctx.empty());
  CHECK(ret.produces_ctx.empty());
  CHECK(ret.measure == 0);

  auto hold = type_expr(p, "B", {}, {}, *make_hold(n(1), "CC"));
  CHECK(hold.type == Type::res("CC", n(1)));
  CHECK(ctx_equal(p.monoid(), hold.requires_ctx, ctx1("B", "CC", n(1))));
  CHECK(hold.produces_ctx.empty());
  CHECK(hold.measure == 1);

  TypingContext gamma{{"x", Type::res("CC", n(2))}};
  auto rls = type_expr(p, "B", gamma, {}, *parse_expr("release 1 x^2", p, {"x"}));
  CHECK(ctx_equal(p.monoid(), rls.produces_ctx, ctx1("B", "CC", n(1))));
  CHECK(rls.measure == 1);

  auto call = type_expr(p, "A", {}, {}, *parse_expr("B!give()", p));
  CHECK(call.type == Type::fut(Type::unit(), ctx1("B", "Clean", n(1))));
  CHECK(ctx_equal(p.monoid(), call.requires_ctx, ctx1("B", "Clean", n(1))));
  CHECK(call.measure == 4 + 3);

  auto op = type_expr(p, "A", {}, {}, *parse_expr("wash(Dirty^3)", p));
  CHECK(op.type == Type::res("Clean", n(1)));
  CHECK(op.measure == 1);

  CHECK(error_code([&] { type_expr(p, "A", {}, {}, *parse_expr("unit?", p)); }) == "NotAFuture");
  CHECK(error_code([&] { type_expr(p, "A", {}, {}, *parse_expr("B!nope()", p)); }) ==
        "UnknownMethod");
  CHECK(error_code([&] { type_expr(p, "A", {}, {}, *parse_expr("wash(Clean^1)", p)); }) ==
        "ArgumentMismatch");
}

TEST_CASE("let cancels what the bound expression produces for the body") {
  Program p = parse_program(kSmall);
  const auto& m = p.monoid();
  // Produced 1, then required 1: nothing escapes.
  auto inner = type_expr(p, "A", {}, {}, *parse_expr("release 1 CC^1; hold 1 CC", p));
  CHECK(inner.requires_ctx.empty());
  CHECK(inner.produces_ctx.empty());
  CHECK(inner.measure == 3);

  // Required first, produced after: both remain.
  auto outer = type_expr(p, "A", {}, {}, *parse_expr("let c = hold 2 CC in release 1 c^2", p));
  CHECK(ctx_equal(m, outer.requires_ctx, ctx1("A", "CC", n(2))));
  CHECK(ctx_equal(m, outer.produces_ctx, ctx1("A", "CC", n(1))));

  // Produced 3, required 1: 2 escape.
  auto part = type_expr(p, "A", {}, {}, *parse_expr("release 3 CC^3; hold 1 CC", p));
  CHECK(part.requires_ctx.empty());
  CHECK(ctx_equal(m, part.produces_ctx, ctx1("A", "CC", n(2))));
}

TEST_CASE("choice lifts the cheaper branch to match") {
  Program cafe = load_corpus("cafe.gract");
  auto e = parse_expr("(return unit (+) y = Customer!main(); y?; return unit)", cafe);
  auto t = type_expr(cafe, "Customer", {}, {}, *e);
  CHECK(ctx_equal(cafe.monoid(), t.requires_ctx, ctx1("Barista", "CleanCup", n(1))));
  CHECK(ctx_equal(cafe.monoid(), t.produces_ctx, ctx1("Barista", "CleanCup", n(1))));
  CHECK(t.measure == 1);

  auto bad = parse_expr("(return unit (+) hold 1 CleanCup)", cafe);
  CHECK(error_code([&] { type_expr(cafe, "Barista", {}, {}, *bad); }) == "BranchMismatch");
  auto unreconciled = parse_expr("(return unit (+) release 1 Coffee^1)", cafe);
  CHECK(error_code([&] { type_expr(cafe, "Barista", {}, {}, *unreconciled); }) ==
        "BranchMismatch");
}

TEST_CASE("futures are linear and resources are counted") {
  Program lin = parse_program("grade lin\nA { m(): Unit requires {} produces {} measure 0 "
                              "{ return unit } }\ninit {}; start A!m()");
  const auto& m = lin.monoid();
  TypingContext one{{"x", Type::res("R", n(1))}};
  auto use_once = type_expr(lin, "A", one, {}, *parse_expr("release 1 x^1", lin, {"x"}));
  CHECK_NOTHROW(check_usage_fits(m, one, use_once.usage, {}));
  auto use_twice =
      type_expr(lin, "A", one, {}, *parse_expr("release 1 x^1; release 1 x^1", lin, {"x"}));
  CHECK(error_code([&] { check_usage_fits(m, one, use_twice.usage, {}); }) == "GradeTooSmall");
  TypingContext many{{"x", Type::res("R", Grade::infinity())}};
  CHECK_NOTHROW(check_usage_fits(m, many, use_twice.usage, {}));
  auto ignore = type_expr(lin, "A", one, {}, *parse_expr("return unit", lin));
  CHECK(error_code([&] { check_usage_fits(m, one, ignore.usage, {}); }) ==
        "NonDiscardableLeftover");

  TypingContext fut{{"f", Type::fut(Type::unit(), {})}};
  auto twice = [&] { type_expr(lin, "A", fut, {}, *parse_expr("f?; f?", lin, {"f"})); };
  CHECK(error_code(twice) == "NonLinearFuture");
  auto dropped = type_expr(lin, "A", fut, {}, *parse_expr("return unit", lin));
  CHECK(error_code([&] { check_usage_fits(m, fut, dropped.usage, {}); }) ==
        "NonDiscardableLeftover");
}

TEST_CASE("local environments") {
  auto m = make_nat_leq();
  auto empty = type_local_env(*m, {}, {});
  CHECK(empty.gamma.empty());
  CHECK(empty.futures.empty());
  auto res = type_local_env(*m, {{"x", resource_value("CC", n(1))}}, {});
  CHECK(res.gamma == TypingContext{{"x", Type::res("CC", n(1))}});
  Type fut = Type::fut(Type::unit(), ctx1("B", "CC", n(1)));
  auto f = type_local_env(*m, {{"y", future_value("f")}}, {{"f", FutureEntry{fut, false}}});
  CHECK(f.gamma == TypingContext{{"y", fut}});
  CHECK(f.futures == std::set<std::string>{"f"});
}

TEST_CASE("processes") {
  Program cafe = load_corpus("cafe.gract");
  const auto& m = cafe.monoid();
  auto idle = type_process(cafe, {Idle{"Barista"}}, {});
  CHECK(idle.requires_ctx.empty());
  CHECK(idle.measure == 0);
  CHECK(idle.produced.empty());

  Type promised = Type::fut(Type::unit(), ctx1("Barista", "CleanCup", n(1)));
  auto done = type_process(cafe, {Fulfilled{"f", unit_value()}}, {}, {{"f", promised}});
  CHECK(done.measure == 0);
  CHECK(done.produced.at("f").type == promised);
  CHECK(ctx_equal(m, done.requires_ctx, promised.ctx));

  auto msg = type_process(cafe, {CallMsg{"f", "Customer", "main", {}}}, {});
  CHECK(msg.measure == cafe.method("Customer", "main")->measure + 2);

  Thread reader{{{"y", future_value("f")}}, parse_expr("y?", cafe, {"y"}), "g", "Customer", true};
  CHECK(error_code([&] { type_process(cafe, {reader, Fulfilled{"f", unit_value()}}, {}); }) ==
        "FutureConsumedBeforeProduced");
  auto ok = type_process(cafe, {Fulfilled{"f", unit_value()}, reader}, {});
  CHECK(ok.produced.at("f").marked);
  CHECK_FALSE(ok.produced.at("g").marked);
  Thread reader2 = reader;
  reader2.future = "h";
  reader2.actor = "Counter";
  CHECK(error_code([&] {
          type_process(cafe, {Fulfilled{"f", unit_value()}, reader, reader2}, {});
        }) == "MarkedReuse");
  CHECK(error_code([&] {
          type_process(cafe, {Fulfilled{"f", unit_value()}, Fulfilled{"f", unit_value()}}, {});
        }) == "DoubleProduce");
  auto open = type_process(cafe, {reader}, {{"f", FutureEntry{Type::fut(Type::unit(), {}), false}}});
  CHECK(open.consumed.count("f") == 1);
}

TEST_CASE("configurations need their requirement covered") {
  Program cafe = load_corpus("cafe.gract");
  auto t = type_config(cafe, initial_configuration(cafe));
  CHECK(t.measure == cafe.method("Customer", "main")->measure + 2);

  Program nocup = load_corpus("cafe-nocup.gract");
  try {
    type_config(nocup, initial_configuration(nocup), {}, {}, nocup.init_loc);
    FAIL("expected insufficient resources");
  } catch (const TypeErrorException& e) {
    CHECK(e.error().code == "InsufficientInitialResources");
    CHECK(e.error().loc == nocup.init_loc);
    CHECK(e.error().detail.rfind("(Barista, CleanCup)", 0) == 0);
  }

  Configuration done;
  done.process = {Idle{"Barista"}, Fulfilled{"f#0", unit_value()}, Idle{"Customer"}};
  done.resources = cafe.init;
  CHECK(type_config(cafe, done).measure == 0);
}

TEST_CASE("labels") {
  Program cafe = load_corpus("cafe.gract");
  const auto& m = cafe.monoid();
  auto tau = type_label(cafe, "Customer", Label::tau());
  CHECK(tau.requires_ctx.empty());
  CHECK(tau.produces_ctx.empty());
  CHECK(tau.consumed.empty());
  CHECK(tau.produced.empty());
  auto rls = type_label(cafe, "Counter", Label::rls("Coffee", n(1)));
  CHECK(ctx_equal(m, rls.produces_ctx, ctx1("Counter", "Coffee", n(1))));
  auto hold = type_label(cafe, "Barista", Label::hold("CleanCup", n(1)));
  CHECK(ctx_equal(m, hold.requires_ctx, ctx1("Barista", "CleanCup", n(1))));
  auto call = type_label(cafe, "Customer", Label::call("f", "Counter", "pickup", {}));
  CHECK(call.produced.at("f").type == method_future_type(cafe, "Counter", "pickup"));
}

TEST_CASE("the method table of the corpus") {
  Program cafe = load_corpus("cafe.gract");
  std::vector<MethodReport> reports;
  CHECK(check_method_table(cafe, &reports).empty());
  for (const auto& r : reports) {
    CHECK(r.ok);
    REQUIRE(r.computed);
    CHECK(r.computed->measure == cafe.method(r.actor, r.method)->measure);
  }
  // hold, let and return.
  CHECK(std::find_if(reports.begin(), reports.end(), [](const MethodReport& r) {
          return r.method == "pickup" && r.computed->measure == 1 + 1 + 0;
        }) != reports.end());
  CHECK(check_program(cafe).ok());

  auto nocup = check_program(load_corpus("cafe-nocup.gract"));
  REQUIRE(nocup.errors.size() == 1);
  CHECK(nocup.errors[0].code == "InsufficientInitialResources");

  auto linear = check_program(load_corpus("linear-future.gract"));
  REQUIRE_FALSE(linear.ok());
  CHECK(linear.errors[0].code == "NonLinearFuture");

  auto spin = check_program(load_corpus("recursive-unsolvable.gract"));
  REQUIRE_FALSE(spin.ok());
  CHECK(spin.errors[0].code == "UnsolvableRecursiveMeasure");

  CHECK(check_program(load_corpus("privacy.gract")).ok());
}

TEST_CASE("declared measures must match") {
  std::string src = kSmall;
  src.replace(src.find("measure 4"), 9, "measure 6");
  auto errors = check_method_table(parse_program(src));
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].code == "MeasureMismatch");
  CHECK(errors[0].actor == "B");

  std::string ctx = kSmall;
  ctx.replace(ctx.find("produces B: {Clean^1}"), 21, "produces B: {Clean^2}");
  auto ce = check_method_table(parse_program(ctx));
  REQUIRE(ce.size() == 1);
  CHECK(ce[0].code == "ContextMismatch");
}

TEST_CASE("measures are the per-rule sums") {
  Program p = parse_program(kSmall);
  TypingContext gamma{{"u", Type::res("Clean", n(5))}};
  std::mt19937_64 rng(11);
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    auto e = random_expr(rng, 4);
    try {
      auto t = type_expr(p, "A", gamma, {}, *e);
      CHECK(t.measure == count_measure(p, *e));
      ++accepted;
    } catch (const TypeErrorException&) {
    }
  }
  CHECK(accepted > 100);
}

TEST_CASE("discardable extra variables do not change a typing") {
  Program p = parse_program(kSmall);
  const auto& m = p.monoid();
  TypingContext gamma{{"u", Type::res("Clean", n(5))}};
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    auto e = random_expr(rng, 4);
    ExprTyping base;
    try {
      base = type_expr(p, "A", gamma, {}, *e);
      check_usage_fits(m, gamma, base.usage, {});
    } catch (const TypeErrorException&) {
      continue;
    }
    TypingContext wider = gamma;
    wider["extra" + std::to_string(rng() % 5)] = rng() % 2 ? Type::unit() : Type::res("Dirty", n(rng() % 4));
    auto more = type_expr(p, "A", wider, {}, *e);
    CHECK_NOTHROW(check_usage_fits(m, wider, more.usage, {}));
    CHECK(more.type == base.type);
    CHECK(more.measure == base.measure);
    CHECK(ctx_equal(m, more.requires_ctx, base.requires_ctx));
    CHECK(ctx_equal(m, more.produces_ctx, base.produces_ctx));
  }
}

TEST_CASE("process typings produce fp and consume fr along random runs") {
  Program cafe = load_corpus("cafe.gract");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Trace t = run(cafe, initial_configuration(cafe), random_chooser(seed), 150);
    for (const auto& s : t.steps) {
      auto pt = type_process(cafe, s.config.process, {});
      std::set<std::string> produced;
      for (const auto& [f, e] : pt.produced) produced.insert(f);
      CHECK(produced == futures_produced(s.config.process));
      CHECK(pt.consumed.empty());
      CHECK(futures_consumed(s.config.process).empty());
    }
  }
}
