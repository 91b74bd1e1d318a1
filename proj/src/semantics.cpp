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

#include "gract/semantics.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "gract/printer.hpp"

namespace gract {

Label Label::hold(std::string resource, Grade g) {
  Label l;
  l.kind = Kind::kHold;
  l.resource = std::move(resource);
  l.grade = g;
  return l;
}

Label Label::rls(std::string resource, Grade g) {
  Label l;
  l.kind = Kind::kRls;
  l.resource = std::move(resource);
  l.grade = g;
  return l;
}

Label Label::call(std::string future, std::string actor, std::string method,
                  std::vector<Value> args) {
  Label l;
  l.kind = Kind::kCall;
  l.future = std::move(future);
  l.actor = std::move(actor);
  l.method = std::move(method);
  l.args = std::move(args);
  return l;
}

Label Label::fut(std::string future, Value v) {
  Label l;
  l.kind = Kind::kFut;
  l.future = std::move(future);
  l.value = std::move(v);
  return l;
}

std::string print_label(const GradeMonoid& m, const Label& l) {
  switch (l.kind) {
    case Label::Kind::kTau:
      return "tau";
    case Label::Kind::kHold:
      return l.resource + "^" + m.format(l.grade) + "?";
    case Label::Kind::kRls:
      return l.resource + "^" + m.format(l.grade) + "!";
    case Label::Kind::kCall: {
      std::string out = l.future + " <- " + l.actor + "!" + l.method + "(";
      for (std::size_t i = 0; i < l.args.size(); ++i)
        out += (i ? ", " : "") + print_value(m, l.args[i]);
      return out + ")";
    }
    case Label::Kind::kFut:
      return l.future + " <- " + print_value(m, l.value);
  }
  return "?";
}

// ---------------------------------------------------------------------------

std::optional<EvalResult> eval_value_expr(const GradeMonoid& m, const LocalEnv& env,
                                          const ValueExpr& ve, EvalFailure* why) {
  auto fail = [&](EvalFailure f) -> std::optional<EvalResult> {
    if (why) *why = f;
    return std::nullopt;
  };
  if (const auto* v = std::get_if<Value>(&ve)) return EvalResult{env, *v};
  const std::string& name = std::holds_alternative<VarRef>(ve) ? std::get<VarRef>(ve).name
                                                              : std::get<GradedVar>(ve).name;
  auto it = std::find_if(env.begin(), env.end(), [&](const auto& b) { return b.first == name; });
  if (it == env.end()) return fail(EvalFailure::kUnboundVariable);

  if (const auto* gv = std::get_if<GradedVar>(&ve)) {
    const auto* res = std::get_if<ResourceValue>(&it->second);
    if (!res) return fail(EvalFailure::kNotAResource);
    auto rest = m.minus(res->grade, gv->grade);
    if (!rest) return fail(EvalFailure::kInsufficientGrade);
    EvalResult out{env, resource_value(res->name, gv->grade)};
    std::get<ResourceValue>(out.env[static_cast<std::size_t>(it - env.begin())].second).grade =
        *rest;
    return out;
  }
  if (std::holds_alternative<FutureValue>(it->second)) {
    EvalResult out{env, it->second};
    out.env.erase(out.env.begin() + (it - env.begin()));
    return out;
  }
  if (std::holds_alternative<ResourceValue>(it->second))
    return fail(EvalFailure::kUngradedResourceVar);
  return EvalResult{env, it->second};
}

namespace {

// Evaluates `args` left to right, threading the environment.
std::optional<std::pair<LocalEnv, std::vector<Value>>> eval_args(
    const GradeMonoid& m, LocalEnv env, const std::vector<ValueExpr>& args) {
  std::vector<Value> values;
  for (const auto& ve : args) {
    auto r = eval_value_expr(m, env, ve);
    if (!r) return std::nullopt;
    env = std::move(r->env);
    values.push_back(std::move(r->value));
  }
  return std::make_pair(std::move(env), std::move(values));
}

}  // namespace

const Expr& redex(const Expr& e) {
  const Expr* cur = &e;
  while (const auto* let = std::get_if<Let>(&cur->node)) {
    if (std::holds_alternative<Return>(let->bound->node)) return *cur;
    cur = let->bound.get();
  }
  return *cur;
}

std::optional<std::string> awaited_future(const GradeMonoid& m, const LocalEnv& env,
                                          const Expr& e) {
  const auto* aw = std::get_if<Await>(&redex(e).node);
  if (!aw) return std::nullopt;
  auto r = eval_value_expr(m, env, aw->target);
  if (!r) return std::nullopt;
  if (const auto* f = std::get_if<FutureValue>(&r->value)) return f->name;
  return std::nullopt;
}

std::optional<Value> apply_primop(const GradeMonoid& m, const OpSig& sig,
                                  const std::vector<Value>& args) {
  if (args.size() != sig.params.size()) return std::nullopt;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Type& t = sig.params[i].type;
    if (t.is_unit()) {
      if (!std::holds_alternative<UnitValue>(args[i])) return std::nullopt;
    } else if (t.is_res()) {
      const auto* r = std::get_if<ResourceValue>(&args[i]);
      if (!r || r->name != t.resource || !m.leq(t.grade, r->grade)) return std::nullopt;
    } else {
      return std::nullopt;
    }
  }
  if (sig.result.is_unit()) return unit_value();
  if (sig.result.is_res()) return resource_value(sig.result.resource, sig.result.grade);
  return std::nullopt;
}

std::vector<ExprStep> step_expr(const Program& program, const LocalEnv& env, const ExprPtr& e,
                                const ExprInputs& inputs, std::uint64_t fresh) {
  const GradeMonoid& m = program.monoid();
  std::vector<ExprStep> out;
  const SourceLoc loc = e->loc;
  std::visit(
      [&](const auto& node) {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, Call>) {
          auto r = eval_args(m, env, node.args);
          if (!r) return;
          std::string f = fresh_future_name(fresh);
          out.push_back({Label::call(f, node.actor, node.method, r->second), r->first,
                         make_return(Value(future_value(f)), loc), "e-cl", fresh + 1});
        } else if constexpr (std::is_same_v<N, Await>) {
          auto r = eval_value_expr(m, env, node.target);
          if (!r || !inputs.fulfilled) return;
          const auto* f = std::get_if<FutureValue>(&r->value);
          if (!f) return;
          auto v = inputs.fulfilled(f->name);
          if (!v) return;
          out.push_back({Label::fut(f->name, *v), r->env, make_return(*v, loc), "e-awt", fresh});
        } else if constexpr (std::is_same_v<N, Hold>) {
          if (!inputs.can_hold || !inputs.can_hold(node.resource, node.grade)) return;
          out.push_back({Label::hold(node.resource, node.grade), env,
                         make_return(Value(resource_value(node.resource, node.grade)), loc),
                         "e-hld", fresh});
        } else if constexpr (std::is_same_v<N, Release>) {
          auto r = eval_value_expr(m, env, node.target);
          if (!r) return;
          const auto* res = std::get_if<ResourceValue>(&r->value);
          if (!res || !m.leq(node.grade, res->grade)) return;
          out.push_back({Label::rls(res->name, node.grade), r->env,
                         make_return(Value(unit_value()), loc), "e-rls", fresh});
        } else if constexpr (std::is_same_v<N, PrimOp>) {
          const OpSig* sig = program.op(node.op);
          if (!sig) return;
          auto r = eval_args(m, env, node.args);
          if (!r) return;
          auto v = apply_primop(m, *sig, r->second);
          if (!v) return;
          out.push_back({Label::tau(), r->first, make_return(*v, loc), "e-op", fresh});
        } else if constexpr (std::is_same_v<N, Choice>) {
          out.push_back({Label::tau(), env, node.left, "e-ch-l", fresh});
          out.push_back({Label::tau(), env, node.right, "e-ch-r", fresh});
        } else if constexpr (std::is_same_v<N, Return>) {
          // Consumed by the configuration rule.
        } else if constexpr (std::is_same_v<N, Let>) {
          if (const auto* ret = std::get_if<Return>(&node.bound->node)) {
            auto r = eval_value_expr(m, env, ret->value);
            if (!r) return;
            std::string y = fresh_var_name(fresh);
            r->env.emplace_back(y, r->value);
            out.push_back({Label::tau(), std::move(r->env), rename_var(node.body, node.var, y),
                           "e-let", fresh + 1});
            return;
          }
          for (auto& s : step_expr(program, env, node.bound, inputs, fresh)) {
            s.expr = make_let(node.var, s.expr, node.body, loc);
            out.push_back(std::move(s));
          }
        }
      },
      e->node);
  return out;
}

// ---------------------------------------------------------------------------
// Configurations.

bool is_terminated(const Configuration& config) {
  return std::all_of(config.process.begin(), config.process.end(), [](const Atom& a) {
    return std::holds_alternative<Idle>(a) || std::holds_alternative<Fulfilled>(a);
  });
}

bool can_bring_adjacent(const Process& p, std::size_t from, std::size_t to) {
  if (from >= to || to >= p.size()) return false;
  // Atoms that must stay right of `from` and atoms that must stay left of
  // `to`; any atom in both blocks the move.
  std::vector<bool> after_from(p.size(), false);
  std::vector<bool> before_to(p.size(), false);
  for (std::size_t k = from + 1; k < to; ++k) {
    bool dep = !independent(p[from], p[k]);
    for (std::size_t j = from + 1; j < k && !dep; ++j)
      dep = after_from[j] && !independent(p[j], p[k]);
    after_from[k] = dep;
  }
  for (std::size_t k = to; k-- > from + 1;) {
    bool dep = !independent(p[k], p[to]);
    for (std::size_t j = k + 1; j < to && !dep; ++j)
      dep = before_to[j] && !independent(p[k], p[j]);
    before_to[k] = dep;
    if (dep && after_from[k]) return false;
  }
  return true;
}

namespace {

std::optional<std::size_t> index_of_future(const Process& p, const std::string& f) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto* t = std::get_if<Thread>(&p[i]);
    if (t && t->future == f) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> index_of_idle(const Process& p, const std::string& actor) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto* idle = std::get_if<Idle>(&p[i]);
    if (idle && idle->actor == actor) return i;
  }
  return std::nullopt;
}

// Steps of the thread at `i`, which must be active in `c`. `origin` is the
// position reported for the acting atom.
void expand_active(const Program& program, const Configuration& c, std::size_t i,
                   std::size_t origin, std::vector<StepResult>& out) {
  const GradeMonoid& m = program.monoid();
  const Thread& t = std::get<Thread>(c.process[i]);

  if (const auto* ret = std::get_if<Return>(&t.expr->node)) {
    auto r = eval_value_expr(m, t.env, ret->value);
    if (!r) return;
    StepResult s{"return", t.actor, "", Label::tau(), origin, c};
    s.next.process[i] = Fulfilled{t.future, r->value};
    s.next.process.insert(s.next.process.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                          Idle{t.actor});
    out.push_back(std::move(s));
    return;
  }

  ExprInputs inputs;
  inputs.can_hold = [&](const std::string& r, Grade g) {
    return m.minus(ctx_get(m, c.resources, t.actor, r), g).has_value();
  };
  inputs.fulfilled = [&](const std::string& f) -> std::optional<Value> {
    for (std::size_t j = 0; j < i; ++j) {
      const auto* ff = std::get_if<Fulfilled>(&c.process[j]);
      if (ff && ff->future == f && can_bring_adjacent(c.process, j, i)) return ff->value;
    }
    return std::nullopt;
  };

  for (auto& es : step_expr(program, t.env, t.expr, inputs, c.fresh)) {
    StepResult s{"", t.actor, es.rule, es.label, origin, c};
    s.next.fresh = es.fresh;
    Thread nt = t;
    nt.env = std::move(es.env);
    nt.expr = std::move(es.expr);
    auto& proc = s.next.process;
    proc[i] = nt;
    switch (es.label.kind) {
      case Label::Kind::kTau:
        s.rule = "silent";
        break;
      case Label::Kind::kCall:
        s.rule = "call";
        proc.insert(proc.begin() + static_cast<std::ptrdiff_t>(i),
                    CallMsg{es.label.future, es.label.actor, es.label.method, es.label.args});
        break;
      case Label::Kind::kHold: {
        s.rule = "hold";
        Grade have = ctx_get(m, c.resources, t.actor, es.label.resource);
        ctx_set(s.next.resources, t.actor, es.label.resource, *m.minus(have, es.label.grade));
        break;
      }
      case Label::Kind::kRls: {
        s.rule = "rls";
        Grade have = ctx_get(m, c.resources, t.actor, es.label.resource);
        ctx_set(s.next.resources, t.actor, es.label.resource, m.plus(have, es.label.grade));
        break;
      }
      case Label::Kind::kFut: {
        s.rule = "get";
        for (std::size_t j = 0; j < i; ++j) {
          const auto* ff = std::get_if<Fulfilled>(&proc[j]);
          if (ff && ff->future == es.label.future) {
            proc.erase(proc.begin() + static_cast<std::ptrdiff_t>(j));
            break;
          }
        }
        break;
      }
    }
    s.next.resources = ctx_normalize(s.next.resources);
    out.push_back(std::move(s));
  }
}

// Spawn from the message at `j`; `c` must contain Idle(actor).
void expand_spawn(const Program& program, const Configuration& c, std::size_t j,
                  std::size_t origin, std::vector<StepResult>& out) {
  const CallMsg& msg = std::get<CallMsg>(c.process[j]);
  const MethodDecl* md = program.method(msg.actor, msg.method);
  if (!md || md->params.size() != msg.args.size()) return;
  auto idle = index_of_idle(c.process, msg.actor);
  if (!idle) return;
  Thread t;
  for (std::size_t k = 0; k < md->params.size(); ++k)
    t.env.emplace_back(md->params[k].name, msg.args[k]);
  t.expr = md->body;
  t.future = msg.future;
  t.actor = msg.actor;
  t.active = true;
  StepResult s{"spawn", msg.actor, "", Label::tau(), origin, c};
  s.next.process[j] = std::move(t);
  s.next.process.erase(s.next.process.begin() + static_cast<std::ptrdiff_t>(*idle));
  out.push_back(std::move(s));
}

// `c` with the active thread at `i` yielded in place.
Configuration yield_at(const Configuration& c, std::size_t i) {
  Configuration y = c;
  auto& t = std::get<Thread>(y.process[i]);
  t.active = false;
  std::string actor = t.actor;
  y.process.insert(y.process.begin() + static_cast<std::ptrdiff_t>(i), Idle{actor});
  return y;
}

// `c`, whose actor is idle, with the suspended thread `future` activated.
Configuration activate(const Configuration& c, const std::string& actor,
                       const std::string& future) {
  Configuration a = c;
  a.process.erase(a.process.begin() + static_cast<std::ptrdiff_t>(*index_of_idle(a.process, actor)));
  std::get<Thread>(a.process[*index_of_future(a.process, future)]).active = true;
  return a;
}

// Everything an idle actor can do in `c`: run a suspended thread or spawn.
void expand_idle_actor(const Program& program, const Configuration& c, const std::string& actor,
                       const std::vector<std::size_t>& origins, std::vector<StepResult>& out) {
  for (std::size_t k = 0; k < c.process.size(); ++k) {
    const auto* t = std::get_if<Thread>(&c.process[k]);
    if (t && t->actor == actor && !t->active) {
      Configuration a = activate(c, actor, t->future);
      expand_active(program, a, *index_of_future(a.process, t->future), origins[k], out);
    }
  }
  for (std::size_t j = 0; j < c.process.size(); ++j) {
    const auto* msg = std::get_if<CallMsg>(&c.process[j]);
    if (msg && msg->actor == actor) expand_spawn(program, c, j, origins[j], out);
  }
}

}  // namespace

std::vector<StepResult> step_config(const Program& program, const Configuration& config) {
  const GradeMonoid& m = program.monoid();
  std::vector<StepResult> out;
  std::vector<std::string> actors;
  for (const auto& atom : config.process) {
    std::string a;
    if (const auto* t = std::get_if<Thread>(&atom)) {
      if (t->active) a = t->actor;
    } else if (const auto* i = std::get_if<Idle>(&atom)) {
      a = i->actor;
    }
    if (!a.empty() && std::find(actors.begin(), actors.end(), a) == actors.end())
      actors.push_back(a);
  }
  for (const auto& actor : actors) {
    std::optional<std::size_t> active;
    for (std::size_t i = 0; i < config.process.size(); ++i) {
      const auto* t = std::get_if<Thread>(&config.process[i]);
      if (t && t->active && t->actor == actor) active = i;
    }
    if (!active) {
      std::vector<std::size_t> origins(config.process.size());
      for (std::size_t k = 0; k < origins.size(); ++k) origins[k] = k;
      expand_idle_actor(program, config, actor, origins, out);
      continue;
    }
    expand_active(program, config, *active, *active, out);
    const Thread& t = std::get<Thread>(config.process[*active]);
    if (!awaited_future(m, t.env, *t.expr)) continue;
    // Yield, then act as an idle actor; positions map back past the inserted
    // Idle, and the yielded thread itself is skipped.
    Configuration y = yield_at(config, *active);
    std::vector<std::size_t> origins(y.process.size());
    for (std::size_t k = 0; k < origins.size(); ++k) origins[k] = k <= *active ? k : k - 1;
    std::vector<StepResult> yielded;
    expand_idle_actor(program, y, actor, origins, yielded);
    for (auto& s : yielded) {
      bool self = s.rule != "spawn" && s.position == *active;
      if (!self) out.push_back(std::move(s));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const StepResult& a, const StepResult& b) {
    return a.position < b.position;
  });
  return out;
}

std::vector<Process> precongruence_moves(const GradeMonoid& m, const Process& p) {
  std::vector<Process> out;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (independent(p[i], p[i + 1])) {
      Process q = p;
      std::swap(q[i], q[i + 1]);
      out.push_back(std::move(q));
    }
  }
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const auto* idle = std::get_if<Idle>(&p[i]);
    const auto* t = std::get_if<Thread>(&p[i + 1]);
    if (idle && t && !t->active && t->actor == idle->actor) {
      Process q = p;
      std::get<Thread>(q[i + 1]).active = true;
      q.erase(q.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(std::move(q));
    }
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto* t = std::get_if<Thread>(&p[i]);
    if (t && t->active && awaited_future(m, t->env, *t->expr)) {
      Process q = p;
      std::get<Thread>(q[i]).active = false;
      q.insert(q.begin() + static_cast<std::ptrdiff_t>(i), Idle{t->actor});
      out.push_back(std::move(q));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<StuckDiagnosis> diagnose_stuck(const Program& program, const Configuration& config) {
  const GradeMonoid& m = program.monoid();
  std::vector<StuckDiagnosis> primary;
  std::vector<StuckDiagnosis> waiting;
  for (const auto& atom : config.process) {
    if (const auto* t = std::get_if<Thread>(&atom)) {
      const Expr& r = redex(*t->expr);
      if (const auto* h = std::get_if<Hold>(&r.node)) {
        Grade have = ctx_get(m, config.resources, t->actor, h->resource);
        if (!m.minus(have, h->grade)) {
          primary.push_back({"StuckAtHold", t->actor, h->resource, h->grade, t->future,
                             "holds " + m.format(have)});
          continue;
        }
      }
      if (auto f = awaited_future(m, t->env, *t->expr)) {
        waiting.push_back({"AwaitingUnfulfilled", t->actor, "", Grade(), *f, ""});
        continue;
      }
      if (t->active)
        primary.push_back(
            {"StuckExpression", t->actor, "", Grade(), t->future, print_expr(m, r)});
    } else if (const auto* msg = std::get_if<CallMsg>(&atom)) {
      std::string why = program.method(msg->actor, msg->method) ? "never scheduled"
                                                                : "no such method";
      primary.push_back({"OrphanMessage", msg->actor, "", Grade(), msg->future,
                         msg->actor + "!" + msg->method + ": " + why});
    }
  }
  primary.insert(primary.end(), waiting.begin(), waiting.end());
  return primary;
}

std::string format_diagnosis(const GradeMonoid& m, const StuckDiagnosis& d) {
  std::ostringstream out;
  out << d.code << "(";
  if (d.code == "StuckAtHold") {
    out << d.actor << ", " << d.resource << ", " << m.format(d.grade) << ")";
    if (!d.detail.empty()) out << ": actor " << d.detail;
  } else if (d.code == "AwaitingUnfulfilled") {
    out << d.actor << ", " << d.future << ")";
  } else {
    out << d.actor << ", " << d.future << "): " << d.detail;
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::string_view run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kTerminated:
      return "terminated";
    case RunStatus::kStuck:
      return "stuck";
    case RunStatus::kBoundExhausted:
      return "bound-exhausted";
    case RunStatus::kAborted:
      return "aborted";
  }
  return "?";
}

Trace run(const Program& program, Configuration start, const Chooser& choose,
          std::uint64_t max_steps) {
  Trace trace;
  trace.initial = start;
  Configuration cur = std::move(start);
  for (std::uint64_t n = 0;; ++n) {
    if (is_terminated(cur)) {
      trace.status = RunStatus::kTerminated;
      return trace;
    }
    auto options = step_config(program, cur);
    if (options.empty()) {
      trace.status = RunStatus::kStuck;
      trace.stuck = diagnose_stuck(program, cur);
      return trace;
    }
    if (n >= max_steps) {
      trace.status = RunStatus::kBoundExhausted;
      return trace;
    }
    auto pick = choose(cur, options);
    if (!pick || *pick >= options.size()) {
      trace.status = RunStatus::kAborted;
      return trace;
    }
    StepResult& s = options[*pick];
    trace.steps.push_back({n + 1, s.rule, s.actor, s.expr_rule, s.label, s.next, std::nullopt});
    cur = std::move(s.next);
  }
}

Chooser random_chooser(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const Configuration&, const std::vector<StepResult>& options) {
    return std::optional<std::size_t>((*rng)() % options.size());
  };
}

Chooser fifo_chooser() {
  return [](const Configuration&, const std::vector<StepResult>& options) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < options.size(); ++i)
      if (options[i].position < options[best].position) best = i;
    return std::optional<std::size_t>(best);
  };
}

std::vector<ScriptDirective> parse_script(std::string_view text) {
  std::vector<ScriptDirective> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    ScriptDirective d;
    d.line = no;
    if (!(words >> d.rule)) continue;
    words >> d.actor >> d.expr_rule;
    out.push_back(std::move(d));
  }
  return out;
}

Chooser script_chooser(std::vector<ScriptDirective> script, std::string* error) {
  auto next = std::make_shared<std::size_t>(0);
  auto steps = std::make_shared<std::vector<ScriptDirective>>(std::move(script));
  return [next, steps, error](const Configuration&,
                              const std::vector<StepResult>& options) -> std::optional<std::size_t> {
    if (*next >= steps->size()) {
      if (error) *error = "script exhausted after " + std::to_string(*next) + " step(s)";
      return std::nullopt;
    }
    const ScriptDirective& d = (*steps)[(*next)++];
    for (std::size_t i = 0; i < options.size(); ++i) {
      const StepResult& s = options[i];
      if (s.rule == d.rule && (d.actor.empty() || s.actor == d.actor) &&
          (d.expr_rule.empty() || s.expr_rule == d.expr_rule))
        return i;
    }
    if (error) {
      *error = "script line " + std::to_string(d.line) + ": no successor matches '" + d.rule +
               (d.actor.empty() ? "" : " " + d.actor) +
               (d.expr_rule.empty() ? "" : " " + d.expr_rule) + "'";
    }
    return std::nullopt;
  };
}

}  // namespace gract
