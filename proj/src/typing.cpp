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

#include "gract/typing.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "gract/printer.hpp"

namespace gract {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(std::string code, SourceLoc loc, std::string detail) {
  throw TypeErrorException(TypeError{std::move(code), loc, std::move(detail), "", ""});
}

using Key = std::pair<std::string, std::string>;

std::set<Key> keys_of(std::initializer_list<const ActorContext*> ctxs) {
  std::set<Key> out;
  for (const auto* c : ctxs)
    for (const auto& [a, env] : *c)
      for (const auto& [r, g] : env) out.insert({a, r});
  return out;
}

// d with a + d == b exactly, when minus yields one.
std::optional<Grade> exact_gap(const GradeMonoid& m, Grade a, Grade b) {
  if (a == b) return m.zero();
  auto d = m.minus(b, a);
  if (!d || m.plus(a, *d) != b) return std::nullopt;
  return d;
}

// Theta with from + Theta == to, pointwise.
std::optional<ActorContext> ctx_gap(const GradeMonoid& m, const ActorContext& from,
                                    const ActorContext& to) {
  ActorContext theta;
  for (const auto& [a, r] : keys_of({&from, &to})) {
    auto d = exact_gap(m, ctx_get(m, from, a, r), ctx_get(m, to, a, r));
    if (!d) return std::nullopt;
    ctx_set(theta, a, r, *d);
  }
  return ctx_normalize(theta);
}

ActorContext single(const std::string& actor, const std::string& resource, Grade g) {
  ActorContext c;
  ctx_set(c, actor, resource, g);
  return ctx_normalize(c);
}

std::string usage_key(const GradeMonoid& m, const VarUsage& u) {
  std::string out;
  for (const auto& [x, t] : u) out += x + ":" + print_type(m, t) + ";";
  return out;
}

void dedupe(const GradeMonoid& m, std::vector<VarUsage>& alts) {
  std::set<std::string> seen;
  std::vector<VarUsage> out;
  for (auto& u : alts)
    if (seen.insert(usage_key(m, u)).second) out.push_back(std::move(u));
  alts = std::move(out);
}

std::set<std::string> disjoint_union(const std::set<std::string>& a,
                                     const std::set<std::string>& b, SourceLoc loc) {
  std::set<std::string> out = a;
  for (const auto& f : b)
    if (!out.insert(f).second) fail("NonLinearFuture", loc, "future " + f + " is used twice");
  return out;
}

Usage usage_product(const GradeMonoid& m, const Usage& a, const Usage& b, SourceLoc loc) {
  Usage out;
  out.alternatives.clear();
  try {
    for (const auto& x : a.alternatives)
      for (const auto& y : b.alternatives) out.alternatives.push_back(usage_sum(m, x, y));
  } catch (TypeErrorException& e) {
    fail(e.error().code, loc, e.error().detail);
  }
  dedupe(m, out.alternatives);
  out.futures = disjoint_union(a.futures, b.futures, loc);
  return out;
}

// One bound variable against its uses in one alternative.
void check_var_fits(const GradeMonoid& m, const std::string& x, const Type& declared,
                    const Type* used, SourceLoc loc) {
  if (!used) {
    if (!is_discardable(m, declared))
      fail("NonDiscardableLeftover", loc,
           "variable " + x + " of type " + print_type(m, declared) + " is never used");
    return;
  }
  if (declared.is_res()) {
    if (!m.leq(used->grade, declared.grade))
      fail("GradeTooSmall", loc,
           "variable " + x + " is used at " + m.format(used->grade) + " but holds " +
               m.format(declared.grade));
  }
}

// Whether a value of type `have` may stand for `want`; literals weaken.
bool fits(const GradeMonoid& m, const Type& have, const Type& want, bool literal) {
  if (have == want) return true;
  return literal && have.is_res() && want.is_res() && have.resource == want.resource &&
         m.leq(want.grade, have.grade);
}

bool is_literal_resource(const ValueExpr& ve) {
  const auto* v = std::get_if<Value>(&ve);
  return v && std::holds_alternative<ResourceValue>(*v);
}

class Checker {
 public:
  Checker(const Program& program, std::string actor, const CalleeMeasure& callee)
      : program_(program), m_(program.monoid()), actor_(std::move(actor)), callee_(callee) {}

  ExprTyping go(const TypingContext& gamma, const FutureContext& sigma, const Expr& e) {
    return std::visit(
        overloaded{
            [&](const Call& c) { return call(gamma, sigma, c, e.loc); },
            [&](const Await& a) { return await(gamma, sigma, a, e.loc); },
            [&](const Hold& h) {
              ExprTyping t;
              t.type = Type::res(h.resource, h.grade);
              t.requires_ctx = single(actor_, h.resource, h.grade);
              t.measure = 1;
              return t;
            },
            [&](const Release& r) { return release(gamma, sigma, r, e.loc); },
            [&](const PrimOp& op) { return primop(gamma, sigma, op, e.loc); },
            [&](const Choice& c) { return choice(gamma, sigma, c, e.loc); },
            [&](const Return& r) {
              auto vt = value(gamma, sigma, r.value, e.loc);
              ExprTyping t;
              t.type = vt.type;
              t.usage = usage_of(vt);
              t.measure = 0;
              return t;
            },
            [&](const Let& l) { return let(gamma, sigma, l, e.loc); },
        },
        e.node);
  }

 private:
  ValueTyping value(const TypingContext& gamma, const FutureContext& sigma, const ValueExpr& ve,
                    SourceLoc loc) {
    try {
      return type_value_expr(m_, gamma, sigma, ve);
    } catch (TypeErrorException& e) {
      fail(e.error().code, loc, e.error().detail);
    }
  }

  static Usage usage_of(const ValueTyping& vt) {
    Usage u;
    u.alternatives = {vt.vars};
    u.futures = vt.futures;
    return u;
  }

  Usage arguments(const TypingContext& gamma, const FutureContext& sigma,
                  const std::vector<ValueExpr>& args, const std::vector<Param>& params,
                  const std::string& what, SourceLoc loc) {
    if (args.size() != params.size()) {
      std::ostringstream d;
      d << what << " expects " << params.size() << " argument(s), got " << args.size();
      fail("ArgumentMismatch", loc, d.str());
    }
    Usage u;
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto vt = value(gamma, sigma, args[i], loc);
      if (!fits(m_, vt.type, params[i].type, is_literal_resource(args[i])))
        fail("ArgumentMismatch", loc,
             what + " argument " + std::to_string(i + 1) + " has type " +
                 print_type(m_, vt.type) + ", expected " + print_type(m_, params[i].type));
      u = usage_product(m_, u, usage_of(vt), loc);
    }
    return u;
  }

  ExprTyping call(const TypingContext& gamma, const FutureContext& sigma, const Call& c,
                  SourceLoc loc) {
    const MethodDecl* md = program_.method(c.actor, c.method);
    if (!md) fail("UnknownMethod", loc, "no method " + c.actor + "!" + c.method);
    ExprTyping t;
    t.usage = arguments(gamma, sigma, c.args, md->params, c.actor + "!" + c.method, loc);
    t.type = Type::fut(md->result, md->produces_ctx);
    t.requires_ctx = ctx_normalize(md->requires_ctx);
    t.measure = measure_add(callee_(c.actor, c.method), 3);
    return t;
  }

  ExprTyping await(const TypingContext& gamma, const FutureContext& sigma, const Await& a,
                   SourceLoc loc) {
    auto vt = value(gamma, sigma, a.target, loc);
    if (!vt.type.is_fut())
      fail("NotAFuture", loc, "awaiting a value of type " + print_type(m_, vt.type));
    ExprTyping t;
    t.type = *vt.type.payload;
    t.produces_ctx = vt.type.ctx;
    t.measure = 1;
    t.usage = usage_of(vt);
    return t;
  }

  ExprTyping release(const TypingContext& gamma, const FutureContext& sigma, const Release& r,
                     SourceLoc loc) {
    auto vt = value(gamma, sigma, r.target, loc);
    if (!vt.type.is_res())
      fail("NotAResource", loc, "releasing a value of type " + print_type(m_, vt.type));
    if (!m_.leq(r.grade, vt.type.grade))
      fail("GradeTooSmall", loc,
           "releasing " + m_.format(r.grade) + " of " + print_type(m_, vt.type));
    ExprTyping t;
    t.type = Type::unit();
    t.produces_ctx = single(actor_, vt.type.resource, r.grade);
    t.measure = 1;
    t.usage = usage_of(vt);
    return t;
  }

  ExprTyping primop(const TypingContext& gamma, const FutureContext& sigma, const PrimOp& op,
                    SourceLoc loc) {
    const OpSig* sig = program_.op(op.op);
    if (!sig) fail("UnknownOp", loc, "no operation " + op.op);
    ExprTyping t;
    t.usage = arguments(gamma, sigma, op.args, sig->params, op.op, loc);
    t.type = sig->result;
    t.measure = 1;
    return t;
  }

  ExprTyping choice(const TypingContext& gamma, const FutureContext& sigma, const Choice& c,
                    SourceLoc loc) {
    ExprTyping l = go(gamma, sigma, *c.left);
    ExprTyping r = go(gamma, sigma, *c.right);
    if (!(l.type == r.type))
      fail("BranchMismatch", loc,
           "branches have types " + print_type(m_, l.type) + " and " + print_type(m_, r.type));
    if (l.usage.futures != r.usage.futures)
      fail("BranchMismatch", loc, "branches consume different futures");
    // Lift both branches by the smallest contexts that equalise them.
    ActorContext join = l.requires_ctx;
    for (const auto& [a, res] : keys_of({&l.requires_ctx, &r.requires_ctx})) {
      Grade x = ctx_get(m_, l.requires_ctx, a, res);
      Grade y = ctx_get(m_, r.requires_ctx, a, res);
      if (exact_gap(m_, x, y)) {
        ctx_set(join, a, res, y);
      } else if (exact_gap(m_, y, x)) {
        ctx_set(join, a, res, x);
      } else {
        fail("BranchMismatch", loc, "branch requirements cannot be reconciled");
      }
    }
    auto tl = ctx_gap(m_, l.requires_ctx, join);
    auto tr = ctx_gap(m_, r.requires_ctx, join);
    if (!tl || !tr ||
        !ctx_equal(m_, ctx_plus(m_, l.produces_ctx, *tl), ctx_plus(m_, r.produces_ctx, *tr)))
      fail("BranchMismatch", loc,
           "branches produce " + print_ctx(m_, l.produces_ctx) + " and " +
               print_ctx(m_, r.produces_ctx));
    ExprTyping t;
    t.type = l.type;
    t.requires_ctx = ctx_normalize(join);
    t.produces_ctx = ctx_normalize(ctx_plus(m_, l.produces_ctx, *tl));
    t.measure = measure_add(1, std::min(l.measure, r.measure));
    t.usage.alternatives = l.usage.alternatives;
    for (const auto& u : r.usage.alternatives) t.usage.alternatives.push_back(u);
    dedupe(m_, t.usage.alternatives);
    t.usage.futures = l.usage.futures;
    return t;
  }

  ExprTyping let(const TypingContext& gamma, const FutureContext& sigma, const Let& l,
                 SourceLoc loc) {
    ExprTyping first = go(gamma, sigma, *l.bound);
    TypingContext inner = gamma;
    inner[l.var] = first.type;
    ExprTyping second = go(inner, sigma, *l.body);
    for (auto& alt : second.usage.alternatives) {
      auto it = alt.find(l.var);
      check_var_fits(m_, l.var, first.type, it == alt.end() ? nullptr : &it->second, loc);
      if (it != alt.end()) alt.erase(it);
    }
    dedupe(m_, second.usage.alternatives);

    // Cancel what the bound expression produces and the body requires.
    ActorContext cancel;
    for (const auto& [a, r] : keys_of({&first.produces_ctx, &second.requires_ctx})) {
      Grade psi = ctx_get(m_, first.produces_ctx, a, r);
      Grade phi = ctx_get(m_, second.requires_ctx, a, r);
      Grade c = m_.meet(psi, phi);
      if (exact_gap(m_, c, psi) && exact_gap(m_, c, phi)) ctx_set(cancel, a, r, c);
    }
    auto phi2 = ctx_gap(m_, cancel, second.requires_ctx);
    auto psi1 = ctx_gap(m_, cancel, first.produces_ctx);
    ExprTyping t;
    t.type = second.type;
    t.requires_ctx = ctx_normalize(ctx_plus(m_, first.requires_ctx, *phi2));
    t.produces_ctx = ctx_normalize(ctx_plus(m_, *psi1, second.produces_ctx));
    t.measure = measure_add(measure_add(1, first.measure), second.measure);
    t.usage = usage_product(m_, first.usage, second.usage, loc);
    return t;
  }

  const Program& program_;
  const GradeMonoid& m_;
  std::string actor_;
  const CalleeMeasure& callee_;
};

}  // namespace

// ---------------------------------------------------------------------------

Measure measure_add(Measure a, Measure b) {
  if (a == kUnbounded || b == kUnbounded || a > kUnbounded - b) return kUnbounded;
  return a + b;
}

std::string format_measure(Measure n) { return n == kUnbounded ? "unbounded" : std::to_string(n); }

TypeErrorException::TypeErrorException(TypeError e)
    : std::runtime_error(format_type_error(e)), error_(std::move(e)) {}

std::string format_type_error(const TypeError& e) {
  std::ostringstream out;
  if (e.loc.line > 0) out << e.loc.line << ":" << e.loc.col << ": ";
  out << e.code;
  if (!e.actor.empty()) out << " in " << e.actor << "." << e.method;
  if (!e.detail.empty()) out << ": " << e.detail;
  return out.str();
}

VarUsage usage_sum(const GradeMonoid& m, const VarUsage& a, const VarUsage& b) {
  VarUsage out = a;
  for (const auto& [x, t] : b) {
    auto it = out.find(x);
    if (it == out.end()) {
      out.emplace(x, t);
      continue;
    }
    const Type& s = it->second;
    if (s.is_unit() && t.is_unit()) continue;
    if (s.is_res() && t.is_res() && s.resource == t.resource) {
      it->second = Type::res(s.resource, m.plus(s.grade, t.grade));
      continue;
    }
    if (s.is_fut() || t.is_fut()) fail("NonLinearFuture", {}, "future variable " + x + " is used twice");
    fail("ArgumentMismatch", {}, "variable " + x + " is used at two types");
  }
  return out;
}

bool is_discardable(const GradeMonoid& m, const Type& t) {
  switch (t.kind) {
    case Type::Kind::kUnit:
      return true;
    case Type::Kind::kRes:
      return m.is_discardable(t.grade);
    case Type::Kind::kFut:
      return false;
  }
  return false;
}

ValueTyping type_value_expr(const GradeMonoid& m, const TypingContext& gamma,
                            const FutureContext& sigma, const ValueExpr& ve) {
  return std::visit(
      overloaded{
          [&](const VarRef& v) {
            auto it = gamma.find(v.name);
            if (it == gamma.end()) fail("UnknownVariable", {}, "variable " + v.name + " is unbound");
            if (it->second.is_res())
              fail("UngradedResourceUse", {}, "resource variable " + v.name + " needs a grade");
            return ValueTyping{it->second, {{v.name, it->second}}, {}};
          },
          [&](const GradedVar& v) {
            auto it = gamma.find(v.name);
            if (it == gamma.end()) fail("UnknownVariable", {}, "variable " + v.name + " is unbound");
            if (!it->second.is_res())
              fail("NotAResource", {},
                   "variable " + v.name + " has type " + print_type(m, it->second));
            if (!m.leq(v.grade, it->second.grade))
              fail("GradeTooSmall", {},
                   "variable " + v.name + " is used at " + m.format(v.grade) + " but holds " +
                       m.format(it->second.grade));
            Type t = Type::res(it->second.resource, v.grade);
            return ValueTyping{t, {{v.name, t}}, {}};
          },
          [&](const Value& v) {
            return std::visit(
                overloaded{
                    [](const UnitValue&) { return ValueTyping{Type::unit(), {}, {}}; },
                    [](const ResourceValue& r) {
                      return ValueTyping{Type::res(r.name, r.grade), {}, {}};
                    },
                    [&](const FutureValue& f) {
                      auto it = sigma.find(f.name);
                      if (it == sigma.end()) fail("UnknownFuture", {}, "future " + f.name + " is not available");
                      if (it->second.marked)
                        fail("MarkedFutureUse", {}, "future " + f.name + " was already consumed");
                      return ValueTyping{it->second.type, {}, {f.name}};
                    },
                },
                v);
          },
      },
      ve);
}

CalleeMeasure declared_measures(const Program& program) {
  return [&program](const std::string& actor, const std::string& method) -> Measure {
    const MethodDecl* md = program.method(actor, method);
    return md ? md->measure : kUnbounded;
  };
}

ExprTyping type_expr(const Program& program, const std::string& actor, const TypingContext& gamma,
                     const FutureContext& sigma, const Expr& e) {
  return type_expr(program, actor, gamma, sigma, e, declared_measures(program));
}

ExprTyping type_expr(const Program& program, const std::string& actor, const TypingContext& gamma,
                     const FutureContext& sigma, const Expr& e, const CalleeMeasure& callee) {
  Checker c(program, actor, callee);
  return c.go(gamma, sigma, e);
}

void check_usage_fits(const GradeMonoid& m, const TypingContext& gamma, const Usage& usage,
                      SourceLoc loc) {
  for (const auto& alt : usage.alternatives) {
    for (const auto& [x, t] : alt)
      if (!gamma.count(x)) fail("UnknownVariable", loc, "variable " + x + " is unbound");
    for (const auto& [x, declared] : gamma) {
      auto it = alt.find(x);
      check_var_fits(m, x, declared, it == alt.end() ? nullptr : &it->second, loc);
    }
  }
}

EnvTyping type_local_env(const GradeMonoid& m, const LocalEnv& env, const FutureContext& sigma) {
  EnvTyping out;
  for (const auto& [x, v] : env) {
    auto vt = type_value_expr(m, {}, sigma, Value(v));
    out.gamma[x] = vt.type;
    out.futures = disjoint_union(out.futures, vt.futures, {});
  }
  return out;
}

Type method_future_type(const Program& program, const std::string& actor,
                        const std::string& method) {
  const MethodDecl* md = program.method(actor, method);
  if (!md) fail("UnknownMethod", {}, "no method " + actor + "!" + method);
  return Type::fut(md->result, md->produces_ctx);
}

FutureHints hints_for_messages(const Program& program, const Process& p) {
  FutureHints out;
  for (const auto& a : p)
    if (const auto* msg = std::get_if<CallMsg>(&a); msg && program.method(msg->actor, msg->method))
      out[msg->future] = method_future_type(program, msg->actor, msg->method);
  return out;
}

ProcTyping type_process(const Program& program, const Process& p, const FutureContext& ambient,
                        const FutureHints& hints) {
  const GradeMonoid& m = program.monoid();
  ProcTyping out;

  // Futures produced strictly right of each position.
  std::vector<std::set<std::string>> right(p.size() + 1);
  for (std::size_t i = p.size(); i-- > 0;) {
    right[i] = right[i + 1];
    for (const auto& f : futures_produced(p[i])) right[i].insert(f);
  }

  for (std::size_t i = 0; i < p.size(); ++i) {
    const Atom& atom = p[i];
    // Sigma for this atom: unmarked futures from the left, then the ambient.
    FutureContext avail;
    for (const auto& f : futures_consumed(atom)) {
      auto it = out.produced.find(f);
      if (it != out.produced.end()) {
        if (it->second.marked) fail("MarkedReuse", {}, "future " + f + " is consumed twice");
        avail[f] = it->second;
      } else if (right[i + 1].count(f) || futures_produced(atom).count(f)) {
        fail("FutureConsumedBeforeProduced", {},
             "future " + f + " is consumed left of its producer");
      } else if (auto amb = ambient.find(f); amb != ambient.end()) {
        if (out.consumed.count(f)) fail("NonLinearFuture", {}, "future " + f + " is consumed twice");
        avail[f] = amb->second;
      } else {
        fail("UnknownFuture", {}, "future " + f + " is neither produced nor available");
      }
    }

    std::optional<std::pair<std::string, Type>> produced;
    std::visit(
        overloaded{
            [&](const Idle&) {},
            [&](const Fulfilled& f) {
              auto vt = type_value_expr(m, {}, avail, Value(f.value));
              Type fut = Type::fut(vt.type, {});
              if (auto h = hints.find(f.future); h != hints.end()) {
                bool literal = std::holds_alternative<ResourceValue>(f.value);
                if (!fits(m, vt.type, *h->second.payload, literal))
                  fail("FutureTypeMismatch", {},
                       "future " + f.future + " holds " + print_type(m, vt.type) +
                           ", expected " + print_type(m, *h->second.payload));
                fut = h->second;
              }
              out.requires_ctx = ctx_plus(m, out.requires_ctx, fut.ctx);
              produced = {f.future, fut};
            },
            [&](const CallMsg& msg) {
              const MethodDecl* md = program.method(msg.actor, msg.method);
              if (!md) fail("UnknownMethod", {}, "no method " + msg.actor + "!" + msg.method);
              if (msg.args.size() != md->params.size())
                fail("ArgumentMismatch", {}, msg.actor + "!" + msg.method + " arity");
              std::set<std::string> used;
              for (std::size_t k = 0; k < msg.args.size(); ++k) {
                auto vt = type_value_expr(m, {}, avail, Value(msg.args[k]));
                bool literal = std::holds_alternative<ResourceValue>(msg.args[k]);
                if (!fits(m, vt.type, md->params[k].type, literal))
                  fail("ArgumentMismatch", {},
                       msg.actor + "!" + msg.method + " argument " + std::to_string(k + 1) +
                           " has type " + print_type(m, vt.type));
                used = disjoint_union(used, vt.futures, {});
              }
              Type fut = Type::fut(md->result, md->produces_ctx);
              if (auto h = hints.find(msg.future); h != hints.end() && !(h->second == fut))
                fail("FutureTypeMismatch", {}, "future " + msg.future + " changed type");
              out.requires_ctx = ctx_plus(m, out.requires_ctx, md->requires_ctx);
              out.measure = measure_add(out.measure, measure_add(md->measure, 2));
              produced = {msg.future, fut};
            },
            [&](const Thread& t) {
              auto env = type_local_env(m, t.env, avail);
              ExprTyping et = type_expr(program, t.actor, env.gamma, avail, *t.expr);
              check_usage_fits(m, env.gamma, et.usage, t.expr->loc);
              disjoint_union(env.futures, et.usage.futures, t.expr->loc);
              Type fut = Type::fut(et.type, et.produces_ctx);
              ActorContext req = et.requires_ctx;
              if (auto h = hints.find(t.future); h != hints.end()) {
                if (!(*h->second.payload == et.type))
                  fail("FutureTypeMismatch", t.expr->loc,
                       "thread for " + t.future + " returns " + print_type(m, et.type) +
                           ", expected " + print_type(m, *h->second.payload));
                auto theta = ctx_gap(m, et.produces_ctx, h->second.ctx);
                if (!theta)
                  fail("FutureTypeMismatch", t.expr->loc,
                       "thread for " + t.future + " produces " + print_ctx(m, et.produces_ctx) +
                           ", promised " + print_ctx(m, h->second.ctx));
                req = ctx_plus(m, req, *theta);
                fut = h->second;
              }
              out.requires_ctx = ctx_plus(m, out.requires_ctx, req);
              out.measure = measure_add(out.measure, measure_add(et.measure, 1));
              produced = {t.future, fut};
            },
        },
        atom);

    for (const auto& [f, entry] : avail) {
      if (auto it = out.produced.find(f); it != out.produced.end()) {
        it->second.marked = true;
      } else {
        out.consumed[f] = entry;
      }
    }
    if (produced) {
      const auto& [f, type] = *produced;
      if (out.produced.count(f) || ambient.count(f))
        fail("DoubleProduce", {}, "future " + f + " is produced twice");
      out.produced[f] = FutureEntry{type, false};
    }
  }
  out.requires_ctx = ctx_normalize(out.requires_ctx);
  return out;
}

ProcTyping type_config(const Program& program, const Configuration& config,
                       const ActorContext& residual, const FutureHints& hints, SourceLoc loc) {
  const GradeMonoid& m = program.monoid();
  FutureHints all = hints_for_messages(program, config.process);
  for (const auto& [f, t] : hints) all[f] = t;
  ProcTyping pt = type_process(program, config.process, {}, all);
  ActorContext need = ctx_plus(m, pt.requires_ctx, residual);
  for (const auto& [a, r] : keys_of({&need, &config.resources})) {
    Grade want = ctx_get(m, need, a, r);
    Grade have = ctx_get(m, config.resources, a, r);
    if (!m.leq(want, have)) {
      TypeError e{"InsufficientInitialResources", loc,
                  "(" + a + ", " + r + "): requires " + m.format(want) + ", available " +
                      m.format(have),
                  "", ""};
      throw TypeErrorException(std::move(e));
    }
  }
  return pt;
}

LabelTyping type_label(const Program& program, const std::string& actor, const Label& l,
                       const FutureHints& hints) {
  LabelTyping out;
  auto hinted = [&](const std::string& f) {
    auto it = hints.find(f);
    return it == hints.end() ? Type::unit() : it->second;
  };
  switch (l.kind) {
    case Label::Kind::kTau:
      break;
    case Label::Kind::kRls:
      out.produces_ctx = single(actor, l.resource, l.grade);
      break;
    case Label::Kind::kHold:
      out.requires_ctx = single(actor, l.resource, l.grade);
      break;
    case Label::Kind::kCall: {
      for (const auto& v : l.args)
        for (const auto& f : futures_in(v)) out.consumed[f] = FutureEntry{hinted(f), false};
      const MethodDecl* md = program.method(l.actor, l.method);
      if (md) {
        out.requires_ctx = ctx_normalize(md->requires_ctx);
        out.produced[l.future] = FutureEntry{Type::fut(md->result, md->produces_ctx), false};
      }
      break;
    }
    case Label::Kind::kFut: {
      for (const auto& f : futures_in(l.value)) out.consumed[f] = FutureEntry{hinted(f), false};
      Type t = hinted(l.future);
      if (t.is_fut()) out.requires_ctx = t.ctx;
      out.produced[l.future] = FutureEntry{t, false};
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using MethodKey = std::pair<std::string, std::string>;

ExprTyping type_body(const Program& program, const ActorDecl& a, const MethodDecl& md,
                     const CalleeMeasure& callee) {
  TypingContext gamma;
  for (const auto& p : md.params) gamma[p.name] = p.type;
  ExprTyping t = type_expr(program, a.name, gamma, {}, *md.body, callee);
  check_usage_fits(program.monoid(), gamma, t.usage, md.loc);
  return t;
}

TypeError in_method(TypeError e, const ActorDecl& a, const MethodDecl& md) {
  if (e.loc.line == 0) e.loc = md.loc;
  e.actor = a.name;
  e.method = md.name;
  return e;
}

}  // namespace

std::vector<TypeError> check_method_table(const Program& program,
                                          std::vector<MethodReport>* reports) {
  const GradeMonoid& m = program.monoid();
  std::vector<TypeError> errors;
  std::map<MethodKey, ExprTyping> typed;
  auto declared = declared_measures(program);

  for (const auto& a : program.actors) {
    for (const auto& md : a.methods) {
      try {
        typed.emplace(MethodKey{a.name, md.name}, type_body(program, a, md, declared));
      } catch (TypeErrorException& e) {
        errors.push_back(in_method(e.error(), a, md));
      }
    }
  }

  // Greatest solution of the measure equations, from kUnbounded downwards.
  std::map<MethodKey, Measure> solved;
  for (const auto& [k, t] : typed) solved[k] = kUnbounded;
  CalleeMeasure current = [&](const std::string& actor, const std::string& method) {
    auto it = solved.find({actor, method});
    return it == solved.end() ? declared(actor, method) : it->second;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& [k, n] : solved) {
      const ActorDecl* a = program.actor(k.first);
      const MethodDecl* md = program.method(k.first, k.second);
      Measure next = type_body(program, *a, *md, current).measure;
      if (next != n) {
        n = next;
        changed = true;
      }
    }
  }

  for (const auto& a : program.actors) {
    for (const auto& md : a.methods) {
      MethodReport report{a.name, md.name, std::nullopt, false};
      auto it = typed.find({a.name, md.name});
      if (it != typed.end()) {
        const ExprTyping& t = it->second;
        report.computed = t;
        std::size_t before = errors.size();
        auto error = [&](std::string code, std::string detail) {
          errors.push_back(
              in_method(TypeError{std::move(code), md.loc, std::move(detail), "", ""}, a, md));
        };
        if (!(t.type == md.result))
          error("ResultTypeMismatch", "body returns " + print_type(m, t.type) + ", declared " +
                                          print_type(m, md.result));
        auto theta = ctx_gap(m, t.requires_ctx, md.requires_ctx);
        if (!theta) {
          error("ContextMismatch", "body requires " + print_ctx(m, t.requires_ctx) +
                                       ", declared " + print_ctx(m, md.requires_ctx));
        } else if (!ctx_equal(m, ctx_plus(m, t.produces_ctx, *theta), md.produces_ctx)) {
          error("ContextMismatch",
                "body produces " + print_ctx(m, ctx_plus(m, t.produces_ctx, *theta)) +
                    ", declared " + print_ctx(m, md.produces_ctx));
        }
        if (solved.at({a.name, md.name}) == kUnbounded) {
          error("UnsolvableRecursiveMeasure",
                "every path through the body calls back into it; no finite measure exists");
        } else if (t.measure != md.measure) {
          error("MeasureMismatch", "declared " + std::to_string(md.measure) + ", computed " +
                                       format_measure(t.measure));
        }
        report.ok = errors.size() == before;
      }
      if (reports) reports->push_back(std::move(report));
    }
  }
  return errors;
}

ProgramReport check_program(const Program& program) {
  ProgramReport report;
  report.errors = check_method_table(program, &report.methods);
  bool starts_ok = true;
  for (const auto& s : program.starts) {
    if (!program.method(s.actor, s.method)) {
      report.errors.push_back(
          TypeError{"UnknownMethod", s.loc, "no method " + s.actor + "!" + s.method, "", ""});
      starts_ok = false;
    }
  }
  if (starts_ok) {
    try {
      report.config =
          type_config(program, initial_configuration(program), {}, {}, program.init_loc);
    } catch (TypeErrorException& e) {
      TypeError err = e.error();
      if (err.loc.line == 0) err.loc = program.init_loc;
      report.errors.push_back(std::move(err));
    }
  }
  return report;
}

}  // namespace gract
