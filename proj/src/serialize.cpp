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

#include "gract/serialize.hpp"

#include <sstream>

#include "gract/parser.hpp"
#include "gract/printer.hpp"

namespace gract {

namespace {

Grade grade_from(const GradeMonoid& m, const Json& j) {
  std::string text = j.get<std::string>();
  auto g = m.parse(text);
  if (!g) throw SerializeError("bad grade '" + text + "'");
  return *g;
}

Value value_from(const GradeMonoid& m, const Json& j) {
  try {
    return parse_value(j.get<std::string>(), m);
  } catch (const ParseError& e) {
    throw SerializeError("bad value '" + j.get<std::string>() + "': " + e.what());
  }
}

Json values_to_json(const GradeMonoid& m, const std::vector<Value>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(print_value(m, v));
  return out;
}

std::vector<Value> values_from(const GradeMonoid& m, const Json& j) {
  std::vector<Value> out;
  for (const auto& v : j) out.push_back(value_from(m, v));
  return out;
}

std::string loc_text(SourceLoc loc) {
  if (loc.line == 0) return "";
  return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

Json step_line(const GradeMonoid& m, const TraceStep& s) {
  Json j;
  j["step"] = s.index;
  j["rule"] = s.rule;
  j["actor"] = s.actor;
  j["exprRule"] = s.expr_rule;
  j["label"] = label_to_json(m, s.label);
  if (s.measure) j["measure"] = *s.measure;
  j["config"] = config_to_json(m, s.config);
  return j;
}

Json measure_json(Measure n) {
  if (n == kUnbounded) return "unbounded";
  return n;
}

Json typing_json(const GradeMonoid& m, const Type& t, const ActorContext& req,
                 const ActorContext& prod, Measure n) {
  Json j;
  j["type"] = print_type(m, t);
  j["requires"] = ctx_to_json(m, req);
  j["produces"] = ctx_to_json(m, prod);
  j["measure"] = measure_json(n);
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

Json ctx_to_json(const GradeMonoid& m, const ActorContext& ctx) {
  Json out = Json::object();
  for (const auto& [actor, env] : ctx_normalize(ctx)) {
    Json e = Json::object();
    for (const auto& [r, g] : env) e[r] = m.format(g);
    out[actor] = std::move(e);
  }
  return out;
}

ActorContext ctx_from_json(const GradeMonoid& m, const Json& j) {
  ActorContext out;
  for (const auto& [actor, env] : j.items())
    for (const auto& [r, g] : env.items()) ctx_set(out, actor, r, grade_from(m, g));
  return ctx_normalize(out);
}

Json label_to_json(const GradeMonoid& m, const Label& l) {
  Json j;
  j["text"] = print_label(m, l);
  switch (l.kind) {
    case Label::Kind::kTau:
      j["kind"] = "tau";
      break;
    case Label::Kind::kHold:
    case Label::Kind::kRls:
      j["kind"] = l.kind == Label::Kind::kHold ? "hold" : "rls";
      j["resource"] = l.resource;
      j["grade"] = m.format(l.grade);
      break;
    case Label::Kind::kCall:
      j["kind"] = "call";
      j["future"] = l.future;
      j["actor"] = l.actor;
      j["method"] = l.method;
      j["args"] = values_to_json(m, l.args);
      break;
    case Label::Kind::kFut:
      j["kind"] = "fut";
      j["future"] = l.future;
      j["value"] = print_value(m, l.value);
      break;
  }
  return j;
}

Label label_from_json(const GradeMonoid& m, const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "tau") return Label::tau();
  if (kind == "hold")
    return Label::hold(j.at("resource").get<std::string>(), grade_from(m, j.at("grade")));
  if (kind == "rls")
    return Label::rls(j.at("resource").get<std::string>(), grade_from(m, j.at("grade")));
  if (kind == "call")
    return Label::call(j.at("future").get<std::string>(), j.at("actor").get<std::string>(),
                       j.at("method").get<std::string>(), values_from(m, j.at("args")));
  if (kind == "fut")
    return Label::fut(j.at("future").get<std::string>(), value_from(m, j.at("value")));
  throw SerializeError("unknown label kind '" + kind + "'");
}

Json atom_to_json(const GradeMonoid& m, const Atom& atom) {
  Json j;
  if (const auto* t = std::get_if<Thread>(&atom)) {
    j["kind"] = "thread";
    j["actor"] = t->actor;
    j["future"] = t->future;
    j["active"] = t->active;
    Json env = Json::array();
    for (const auto& [x, v] : t->env) env.push_back(Json{{"var", x}, {"value", print_value(m, v)}});
    j["env"] = std::move(env);
    j["expr"] = print_expr(m, *t->expr);
  } else if (const auto* i = std::get_if<Idle>(&atom)) {
    j["kind"] = "idle";
    j["actor"] = i->actor;
  } else if (const auto* c = std::get_if<CallMsg>(&atom)) {
    j["kind"] = "call";
    j["future"] = c->future;
    j["actor"] = c->actor;
    j["method"] = c->method;
    j["args"] = values_to_json(m, c->args);
  } else {
    const auto& f = std::get<Fulfilled>(atom);
    j["kind"] = "fulfilled";
    j["future"] = f.future;
    j["value"] = print_value(m, f.value);
  }
  return j;
}

Atom atom_from_json(const Program& program, const Json& j) {
  const GradeMonoid& m = program.monoid();
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "thread") {
    Thread t;
    t.actor = j.at("actor").get<std::string>();
    t.future = j.at("future").get<std::string>();
    t.active = j.at("active").get<bool>();
    std::vector<std::string> scope;
    for (const auto& b : j.at("env")) {
      t.env.emplace_back(b.at("var").get<std::string>(), value_from(m, b.at("value")));
      scope.push_back(t.env.back().first);
    }
    std::string text = j.at("expr").get<std::string>();
    try {
      t.expr = parse_expr(text, program, scope);
    } catch (const ParseError& e) {
      throw SerializeError("bad expression '" + text + "': " + e.what());
    }
    return t;
  }
  if (kind == "idle") return Idle{j.at("actor").get<std::string>()};
  if (kind == "call")
    return CallMsg{j.at("future").get<std::string>(), j.at("actor").get<std::string>(),
                   j.at("method").get<std::string>(), values_from(m, j.at("args"))};
  if (kind == "fulfilled")
    return Fulfilled{j.at("future").get<std::string>(), value_from(m, j.at("value"))};
  throw SerializeError("unknown atom kind '" + kind + "'");
}

Json config_to_json(const GradeMonoid& m, const Configuration& config) {
  Json j;
  j["actors"] = ctx_to_json(m, config.resources);
  Json procs = Json::array();
  for (const auto& a : config.process) procs.push_back(atom_to_json(m, a));
  j["processes"] = std::move(procs);
  j["fresh"] = config.fresh;
  return j;
}

Configuration config_from_json(const Program& program, const Json& j) {
  Configuration c;
  c.resources = ctx_from_json(program.monoid(), j.at("actors"));
  for (const auto& a : j.at("processes")) c.process.push_back(atom_from_json(program, a));
  c.fresh = j.at("fresh").get<std::uint64_t>();
  return c;
}

std::string trace_to_jsonl(const GradeMonoid& m, const Trace& trace) {
  std::ostringstream out;
  Json init;
  init["step"] = 0;
  init["rule"] = "init";
  if (trace.initial_measure) init["measure"] = *trace.initial_measure;
  init["config"] = config_to_json(m, trace.initial);
  out << init.dump() << "\n";
  for (const auto& s : trace.steps) out << step_line(m, s).dump() << "\n";
  return out.str();
}

Trace trace_from_jsonl(const Program& program, std::string_view text) {
  Trace t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool seen_init = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Json j = Json::parse(line);
      std::optional<Measure> measure;
      if (j.contains("measure")) measure = j["measure"].get<Measure>();
      Configuration config = config_from_json(program, j.at("config"));
      if (!seen_init) {
        if (j.at("rule").get<std::string>() != "init")
          throw SerializeError("first line must be the init configuration");
        t.initial = std::move(config);
        t.initial_measure = measure;
        seen_init = true;
        continue;
      }
      TraceStep s;
      s.index = j.at("step").get<std::uint64_t>();
      s.rule = j.at("rule").get<std::string>();
      s.actor = j.value("actor", "");
      s.expr_rule = j.value("exprRule", "");
      s.label = label_from_json(program.monoid(), j.at("label"));
      s.config = std::move(config);
      s.measure = measure;
      t.steps.push_back(std::move(s));
    } catch (const Json::exception& e) {
      throw SerializeError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const SerializeError& e) {
      throw SerializeError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!seen_init) throw SerializeError("empty trace");
  return t;
}

// ---------------------------------------------------------------------------

Json type_error_to_json(const TypeError& e) {
  Json j;
  j["code"] = e.code;
  j["loc"] = loc_text(e.loc);
  j["detail"] = e.detail;
  if (!e.actor.empty()) j["actor"] = e.actor;
  if (!e.method.empty()) j["method"] = e.method;
  return j;
}

Json diagnosis_to_json(const GradeMonoid& m, const StuckDiagnosis& d) {
  Json j;
  j["code"] = d.code;
  j["actor"] = d.actor;
  if (!d.resource.empty()) {
    j["resource"] = d.resource;
    j["grade"] = m.format(d.grade);
  }
  if (!d.future.empty()) j["future"] = d.future;
  if (!d.detail.empty()) j["detail"] = d.detail;
  j["text"] = format_diagnosis(m, d);
  return j;
}

Json program_report_to_json(const Program& program, const ProgramReport& report) {
  const GradeMonoid& m = program.monoid();
  Json j;
  j["schema"] = kSchema;
  j["ok"] = report.ok();
  Json methods = Json::array();
  for (const auto& r : report.methods) {
    Json mr;
    mr["actor"] = r.actor;
    mr["method"] = r.method;
    if (r.computed)
      mr["computed"] = typing_json(m, r.computed->type, r.computed->requires_ctx,
                                   r.computed->produces_ctx, r.computed->measure);
    else
      mr["computed"] = nullptr;
    if (const MethodDecl* d = program.method(r.actor, r.method))
      mr["declared"] = typing_json(m, d->result, d->requires_ctx, d->produces_ctx, d->measure);
    mr["ok"] = r.ok;
    methods.push_back(std::move(mr));
  }
  j["methodReports"] = std::move(methods);
  if (report.config) {
    Json c;
    c["requires"] = ctx_to_json(m, report.config->requires_ctx);
    c["available"] = ctx_to_json(m, program.init);
    c["measure"] = measure_json(report.config->measure);
    j["configReport"] = std::move(c);
  } else {
    j["configReport"] = nullptr;
  }
  Json errors = Json::array();
  for (const auto& e : report.errors) errors.push_back(type_error_to_json(e));
  j["errors"] = std::move(errors);
  return j;
}

Json sr_report_to_json(const SrReport& report) {
  Json j;
  j["ok"] = report.ok();
  j["stepsChecked"] = report.steps_checked;
  if (report.violation) {
    j["violation"] = Json{{"step", report.violation->step},
                          {"code", report.violation->code},
                          {"detail", report.violation->detail}};
  }
  return j;
}

Json explore_to_json(const GradeMonoid& m, const ExploreResult& r, const ExploreBounds& bounds) {
  Json j;
  j["schema"] = kSchema;
  j["verdict"] = std::string(verdict_name(r.verdict));
  j["statesVisited"] = r.states;
  j["transitions"] = r.transitions;
  j["maxDepth"] = r.max_depth;
  j["bounds"] = Json{{"depth", bounds.max_depth},
                     {"states", bounds.max_states},
                     {"unfold", bounds.unfold}};
  j["terminatedStates"] = r.terminated_states;
  j["prunedTransitions"] = r.pruned_transitions;
  j["truncatedStates"] = r.truncated_states;
  j["frontierStates"] = r.frontier_states;
  if (bounds.check_measures) {
    Json hist = Json::object();
    for (const auto& [n, count] : r.measure_histogram) hist[format_measure(n)] = count;
    j["measureHistogram"] = std::move(hist);
    j["helpfulViolations"] = r.helpful_violations;
    j["zeroViolations"] = r.zero_violations;
    j["untypedStates"] = r.untyped_states;
  }
  if (r.stuck_state) {
    Json s;
    s["config"] = config_to_json(m, *r.stuck_state);
    Json diag = Json::array();
    for (const auto& d : r.diagnosis) diag.push_back(diagnosis_to_json(m, d));
    s["diagnosis"] = std::move(diag);
    j["stuckState"] = std::move(s);
  }
  if (!r.witness.steps.empty() || r.verdict != VerdictKind::kBoundExhausted) {
    Json w = Json::array();
    Json init;
    init["step"] = 0;
    init["rule"] = "init";
    init["config"] = config_to_json(m, r.witness.initial);
    w.push_back(std::move(init));
    for (const auto& s : r.witness.steps) w.push_back(step_line(m, s));
    j["witnessTrace"] = std::move(w);
  }
  return j;
}

}  // namespace gract
