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

#include "gract/ast.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace gract {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr wrap(decltype(Expr::node) node, SourceLoc loc) {
  return std::make_shared<const Expr>(Expr{std::move(node), loc});
}

bool args_equal(const std::vector<ValueExpr>& a, const std::vector<ValueExpr>& b) {
  return a == b;
}

}  // namespace

ExprPtr make_call(std::string actor, std::string method, std::vector<ValueExpr> args,
                  SourceLoc loc) {
  return wrap(Call{std::move(actor), std::move(method), std::move(args)}, loc);
}
ExprPtr make_await(ValueExpr target, SourceLoc loc) { return wrap(Await{std::move(target)}, loc); }
ExprPtr make_hold(Grade g, std::string resource, SourceLoc loc) {
  return wrap(Hold{g, std::move(resource)}, loc);
}
ExprPtr make_release(Grade g, ValueExpr target, SourceLoc loc) {
  return wrap(Release{g, std::move(target)}, loc);
}
ExprPtr make_primop(std::string op, std::vector<ValueExpr> args, SourceLoc loc) {
  return wrap(PrimOp{std::move(op), std::move(args)}, loc);
}
ExprPtr make_choice(ExprPtr left, ExprPtr right, SourceLoc loc) {
  return wrap(Choice{std::move(left), std::move(right)}, loc);
}
ExprPtr make_return(ValueExpr value, SourceLoc loc) { return wrap(Return{std::move(value)}, loc); }
ExprPtr make_let(std::string var, ExprPtr bound, ExprPtr body, SourceLoc loc) {
  return wrap(Let{std::move(var), std::move(bound), std::move(body)}, loc);
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Call& x) {
            const auto& y = std::get<Call>(b.node);
            return x.actor == y.actor && x.method == y.method && args_equal(x.args, y.args);
          },
          [&](const Await& x) { return x.target == std::get<Await>(b.node).target; },
          [&](const Hold& x) {
            const auto& y = std::get<Hold>(b.node);
            return x.grade == y.grade && x.resource == y.resource;
          },
          [&](const Release& x) {
            const auto& y = std::get<Release>(b.node);
            return x.grade == y.grade && x.target == y.target;
          },
          [&](const PrimOp& x) {
            const auto& y = std::get<PrimOp>(b.node);
            return x.op == y.op && args_equal(x.args, y.args);
          },
          [&](const Choice& x) {
            const auto& y = std::get<Choice>(b.node);
            return expr_equal(*x.left, *y.left) && expr_equal(*x.right, *y.right);
          },
          [&](const Return& x) { return x.value == std::get<Return>(b.node).value; },
          [&](const Let& x) {
            const auto& y = std::get<Let>(b.node);
            return x.var == y.var && expr_equal(*x.bound, *y.bound) &&
                   expr_equal(*x.body, *y.body);
          },
      },
      a.node);
}

namespace {

ValueExpr rename_ve(const ValueExpr& ve, const std::string& from, const std::string& to) {
  if (const auto* v = std::get_if<VarRef>(&ve); v && v->name == from) return VarRef{to};
  if (const auto* g = std::get_if<GradedVar>(&ve); g && g->name == from)
    return GradedVar{to, g->grade};
  return ve;
}

std::vector<ValueExpr> rename_all(const std::vector<ValueExpr>& args, const std::string& from,
                                  const std::string& to) {
  std::vector<ValueExpr> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(rename_ve(a, from, to));
  return out;
}

void collect_free(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out);

void collect_ve(const ValueExpr& ve, const std::set<std::string>& bound,
                std::set<std::string>& out) {
  std::string name;
  if (const auto* v = std::get_if<VarRef>(&ve)) name = v->name;
  if (const auto* g = std::get_if<GradedVar>(&ve)) name = g->name;
  if (!name.empty() && !bound.count(name)) out.insert(name);
}

void collect_free(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const Call& x) {
                   for (const auto& a : x.args) collect_ve(a, bound, out);
                 },
                 [&](const Await& x) { collect_ve(x.target, bound, out); },
                 [&](const Hold&) {},
                 [&](const Release& x) { collect_ve(x.target, bound, out); },
                 [&](const PrimOp& x) {
                   for (const auto& a : x.args) collect_ve(a, bound, out);
                 },
                 [&](const Choice& x) {
                   collect_free(*x.left, bound, out);
                   collect_free(*x.right, bound, out);
                 },
                 [&](const Return& x) { collect_ve(x.value, bound, out); },
                 [&](const Let& x) {
                   collect_free(*x.bound, bound, out);
                   bool fresh = bound.insert(x.var).second;
                   collect_free(*x.body, bound, out);
                   if (fresh) bound.erase(x.var);
                 },
             },
             e.node);
}

}  // namespace

ExprPtr rename_var(const ExprPtr& e, const std::string& from, const std::string& to) {
  if (!occurs_free(*e, from)) return e;
  return std::visit(
      overloaded{
          [&](const Call& x) {
            return make_call(x.actor, x.method, rename_all(x.args, from, to), e->loc);
          },
          [&](const Await& x) { return make_await(rename_ve(x.target, from, to), e->loc); },
          [&](const Hold&) { return e; },
          [&](const Release& x) {
            return make_release(x.grade, rename_ve(x.target, from, to), e->loc);
          },
          [&](const PrimOp& x) { return make_primop(x.op, rename_all(x.args, from, to), e->loc); },
          [&](const Choice& x) {
            return make_choice(rename_var(x.left, from, to), rename_var(x.right, from, to),
                               e->loc);
          },
          [&](const Return& x) { return make_return(rename_ve(x.value, from, to), e->loc); },
          [&](const Let& x) {
            ExprPtr body = x.var == from ? x.body : rename_var(x.body, from, to);
            return make_let(x.var, rename_var(x.bound, from, to), body, e->loc);
          },
      },
      e->node);
}

bool occurs_free(const Expr& e, const std::string& var) { return free_vars(e).count(var) > 0; }

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(e, bound, out);
  return out;
}

Type Type::unit() { return Type{}; }

Type Type::res(std::string resource, Grade g) {
  Type t;
  t.kind = Kind::kRes;
  t.resource = std::move(resource);
  t.grade = g;
  return t;
}

Type Type::fut(Type payload, const ActorContext& ctx) {
  Type t;
  t.kind = Kind::kFut;
  t.payload = std::make_shared<const Type>(std::move(payload));
  t.ctx = ctx_normalize(ctx);
  return t;
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Type::Kind::kUnit:
      return true;
    case Type::Kind::kRes:
      return a.resource == b.resource && a.grade == b.grade;
    case Type::Kind::kFut:
      return *a.payload == *b.payload && a.ctx == b.ctx;
  }
  return false;
}

const Value* env_lookup(const LocalEnv& env, const std::string& var) {
  for (const auto& [name, value] : env)
    if (name == var) return &value;
  return nullptr;
}

bool atom_equal(const Atom& a, const Atom& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const Thread& x) {
            const auto& y = std::get<Thread>(b);
            return x.env == y.env && x.future == y.future && x.actor == y.actor &&
                   x.active == y.active && expr_equal(*x.expr, *y.expr);
          },
          [&](const Idle& x) { return x.actor == std::get<Idle>(b).actor; },
          [&](const CallMsg& x) {
            const auto& y = std::get<CallMsg>(b);
            return x.future == y.future && x.actor == y.actor && x.method == y.method &&
                   x.args == y.args;
          },
          [&](const Fulfilled& x) {
            const auto& y = std::get<Fulfilled>(b);
            return x.future == y.future && x.value == y.value;
          },
      },
      a);
}

bool config_equal(const Configuration& a, const Configuration& b) {
  if (ctx_normalize(a.resources) != ctx_normalize(b.resources)) return false;
  if (a.process.size() != b.process.size()) return false;
  for (std::size_t i = 0; i < a.process.size(); ++i)
    if (!atom_equal(a.process[i], b.process[i])) return false;
  return true;
}

std::set<std::string> futures_in(const Value& v) {
  if (const auto* f = std::get_if<FutureValue>(&v)) return {f->name};
  return {};
}

std::set<std::string> futures_in(const ValueExpr& ve) {
  if (const auto* v = std::get_if<Value>(&ve)) return futures_in(*v);
  return {};
}

namespace {

void add_all(std::set<std::string>& into, const std::set<std::string>& from) {
  into.insert(from.begin(), from.end());
}

}  // namespace

std::set<std::string> futures_in(const Expr& e) {
  std::set<std::string> out;
  std::visit(overloaded{
                 [&](const Call& x) {
                   for (const auto& a : x.args) add_all(out, futures_in(a));
                 },
                 [&](const Await& x) { add_all(out, futures_in(x.target)); },
                 [&](const Hold&) {},
                 [&](const Release& x) { add_all(out, futures_in(x.target)); },
                 [&](const PrimOp& x) {
                   for (const auto& a : x.args) add_all(out, futures_in(a));
                 },
                 [&](const Choice& x) {
                   add_all(out, futures_in(*x.left));
                   add_all(out, futures_in(*x.right));
                 },
                 [&](const Return& x) { add_all(out, futures_in(x.value)); },
                 [&](const Let& x) {
                   add_all(out, futures_in(*x.bound));
                   add_all(out, futures_in(*x.body));
                 },
             },
             e.node);
  return out;
}

std::set<std::string> futures_produced(const Atom& atom) {
  return std::visit(overloaded{
                        [](const Thread& t) { return std::set<std::string>{t.future}; },
                        [](const Idle&) { return std::set<std::string>{}; },
                        [](const CallMsg& m) { return std::set<std::string>{m.future}; },
                        [](const Fulfilled& f) { return std::set<std::string>{f.future}; },
                    },
                    atom);
}

std::set<std::string> futures_consumed(const Atom& atom) {
  std::set<std::string> out;
  std::visit(overloaded{
                 [&](const Thread& t) {
                   for (const auto& [_, v] : t.env) add_all(out, futures_in(v));
                   add_all(out, futures_in(*t.expr));
                 },
                 [](const Idle&) {},
                 [&](const CallMsg& m) {
                   for (const auto& v : m.args) add_all(out, futures_in(v));
                 },
                 [&](const Fulfilled& f) { add_all(out, futures_in(f.value)); },
             },
             atom);
  return out;
}

std::set<std::string> futures_produced(const Process& p) {
  std::set<std::string> out;
  for (const auto& a : p) add_all(out, futures_produced(a));
  return out;
}

std::set<std::string> futures_consumed(const Process& p) {
  std::set<std::string> fp;
  std::set<std::string> fr;
  for (const auto& a : p) {
    for (const auto& f : futures_consumed(a))
      if (!fp.count(f)) fr.insert(f);
    add_all(fp, futures_produced(a));
  }
  return fr;
}

namespace {

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a)
    if (b.count(x)) return false;
  return true;
}

}  // namespace

bool independent(const Atom& a, const Atom& b) {
  return disjoint(futures_produced(a), futures_consumed(b)) &&
         disjoint(futures_produced(b), futures_consumed(a));
}

std::vector<std::string> well_formed(const Configuration& config) {
  std::vector<std::string> out;
  struct Count {
    int active = 0;
    int idle = 0;
    int suspended = 0;
  };
  std::map<std::string, Count> actors;
  std::map<std::string, int> producers;
  for (const auto& atom : config.process) {
    if (const auto* t = std::get_if<Thread>(&atom)) {
      auto& c = actors[t->actor];
      (t->active ? c.active : c.suspended)++;
    } else if (const auto* i = std::get_if<Idle>(&atom)) {
      actors[i->actor].idle++;
    }
    for (const auto& f : futures_produced(atom)) producers[f]++;
  }
  for (const auto& [name, c] : actors) {
    if (c.active + c.idle != 1) {
      out.push_back("actor " + name + " has " + std::to_string(c.active) + " active thread(s) and " +
                    std::to_string(c.idle) + " idle marker(s)");
    }
  }
  for (const auto& [f, n] : producers)
    if (n > 1) out.push_back("future " + f + " is produced " + std::to_string(n) + " times");
  return out;
}

std::string fresh_future_name(std::uint64_t index) { return "f#" + std::to_string(index); }
std::string fresh_var_name(std::uint64_t index) { return "y#" + std::to_string(index); }

std::optional<std::uint64_t> fresh_index(const std::string& name) {
  auto pos = name.find(kFreshMarker);
  if (pos == std::string::npos || pos + 1 >= name.size()) return std::nullopt;
  std::uint64_t value = 0;
  const char* begin = name.data() + pos + 1;
  const char* end = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

const ActorDecl* Program::actor(const std::string& name) const {
  for (const auto& a : actors)
    if (a.name == name) return &a;
  return nullptr;
}

const MethodDecl* Program::method(const std::string& actor_name, const std::string& name) const {
  const ActorDecl* a = actor(actor_name);
  if (!a) return nullptr;
  for (const auto& m : a->methods)
    if (m.name == name) return &m;
  return nullptr;
}

const OpSig* Program::op(const std::string& name) const {
  for (const auto& o : ops)
    if (o.name == name) return &o;
  return nullptr;
}

Configuration initial_configuration(const Program& program) {
  Configuration config;
  config.resources = ctx_normalize(program.init);
  for (const auto& s : program.starts) {
    config.process.push_back(
        CallMsg{fresh_future_name(config.fresh), s.actor, s.method, s.args});
    ++config.fresh;
  }
  for (const auto& a : program.actors) config.process.push_back(Idle{a.name});
  return config;
}

}  // namespace gract
