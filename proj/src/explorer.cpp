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

#include "gract/explorer.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <thread>
#include <unordered_map>
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

using NameMap = std::function<std::string(const std::string&)>;

bool is_fresh_var(const std::string& name) {
  return !name.empty() && name[0] == 'y' && fresh_index(name).has_value();
}

Value map_value(const Value& v, const NameMap& fut) {
  if (const auto* f = std::get_if<FutureValue>(&v)) return future_value(fut(f->name));
  return v;
}

ValueExpr map_ve(const ValueExpr& ve, const NameMap& fut) {
  if (const auto* v = std::get_if<Value>(&ve)) return map_value(*v, fut);
  return ve;
}

std::vector<ValueExpr> map_args(const std::vector<ValueExpr>& args, const NameMap& fut) {
  std::vector<ValueExpr> out;
  for (const auto& a : args) out.push_back(map_ve(a, fut));
  return out;
}

ExprPtr map_futures(const ExprPtr& e, const NameMap& fut) {
  if (futures_in(*e).empty()) return e;
  return std::visit(
      overloaded{
          [&](const Call& x) {
            return make_call(x.actor, x.method, map_args(x.args, fut), e->loc);
          },
          [&](const Await& x) { return make_await(map_ve(x.target, fut), e->loc); },
          [&](const Hold&) { return e; },
          [&](const Release& x) { return make_release(x.grade, map_ve(x.target, fut), e->loc); },
          [&](const PrimOp& x) { return make_primop(x.op, map_args(x.args, fut), e->loc); },
          [&](const Choice& x) {
            return make_choice(map_futures(x.left, fut), map_futures(x.right, fut), e->loc);
          },
          [&](const Return& x) { return make_return(map_ve(x.value, fut), e->loc); },
          [&](const Let& x) {
            return make_let(x.var, map_futures(x.bound, fut), map_futures(x.body, fut), e->loc);
          },
      },
      e->node);
}

// Applies the future and fresh-variable maps to one atom. The variable map
// must be injective on the atom's fresh variables.
Atom map_atom(const Atom& atom, const NameMap& fut, const NameMap& var) {
  return std::visit(
      overloaded{
          [&](const Thread& t) -> Atom {
            Thread out = t;
            out.future = fut(t.future);
            ExprPtr e = map_futures(t.expr, fut);
            // Two passes keep the renaming simultaneous.
            std::vector<std::pair<std::string, std::string>> renames;
            for (auto& [x, v] : out.env) {
              v = map_value(v, fut);
              if (is_fresh_var(x)) {
                std::string tmp = "~" + std::to_string(renames.size());
                e = rename_var(e, x, tmp);
                renames.emplace_back(tmp, var(x));
                x = tmp;
              }
            }
            for (const auto& [tmp, final_name] : renames) {
              e = rename_var(e, tmp, final_name);
              for (auto& [x, v] : out.env)
                if (x == tmp) x = final_name;
            }
            out.expr = e;
            return out;
          },
          [](const Idle& i) -> Atom { return i; },
          [&](const CallMsg& c) -> Atom {
            CallMsg out = c;
            out.future = fut(c.future);
            for (auto& v : out.args) v = map_value(v, fut);
            return out;
          },
          [&](const Fulfilled& f) -> Atom {
            return Fulfilled{fut(f.future), map_value(f.value, fut)};
          },
      },
      atom);
}

// Collects fresh names in the order they are first met.
void note_names(const Atom& atom, std::vector<std::string>& futs, std::vector<std::string>& vars,
                std::set<std::string>& seen) {
  auto fut = [&](const std::string& f) {
    if (seen.insert("F" + f).second) futs.push_back(f);
  };
  auto var = [&](const std::string& x) {
    if (is_fresh_var(x) && seen.insert("V" + x).second) vars.push_back(x);
  };
  std::visit(overloaded{
                 [&](const Thread& t) {
                   fut(t.future);
                   for (const auto& [x, v] : t.env) {
                     var(x);
                     for (const auto& f : futures_in(v)) fut(f);
                   }
                   for (const auto& f : futures_in(*t.expr)) fut(f);
                 },
                 [](const Idle&) {},
                 [&](const CallMsg& c) {
                   fut(c.future);
                   for (const auto& v : c.args)
                     for (const auto& f : futures_in(v)) fut(f);
                 },
                 [&](const Fulfilled& f) {
                   fut(f.future);
                   for (const auto& g : futures_in(f.value)) fut(g);
                 },
             },
             atom);
}

bool contains_recursive_call(const Expr& e,
                             const std::set<std::pair<std::string, std::string>>& rec) {
  return std::visit(
      overloaded{
          [&](const Call& c) { return rec.count({c.actor, c.method}) > 0; },
          [&](const Choice& c) {
            return contains_recursive_call(*c.left, rec) || contains_recursive_call(*c.right, rec);
          },
          [&](const Let& l) {
            return contains_recursive_call(*l.bound, rec) || contains_recursive_call(*l.body, rec);
          },
          [](const auto&) { return false; },
      },
      e.node);
}

void collect_calls(const Expr& e, std::set<std::pair<std::string, std::string>>& out) {
  std::visit(overloaded{
                 [&](const Call& c) { out.insert({c.actor, c.method}); },
                 [&](const Choice& c) {
                   collect_calls(*c.left, out);
                   collect_calls(*c.right, out);
                 },
                 [&](const Let& l) {
                   collect_calls(*l.bound, out);
                   collect_calls(*l.body, out);
                 },
                 [](const auto&) {},
             },
             e.node);
}

std::optional<Measure> try_measure(const Program& program, const Configuration& config) {
  try {
    return config_measure(program, config);
  } catch (const TypeErrorException&) {
    return std::nullopt;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Configuration canonicalize(const Configuration& config) {
  // Grades print as plain numbers here; any monoid gives an injective key.
  static const auto shape_monoid_ptr = make_nat_leq();
  const GradeMonoid& shape_monoid = *shape_monoid_ptr;
  const Process& p = config.process;
  const std::size_t n = p.size();

  // Order key that ignores fresh names.
  NameMap blank = [](const std::string&) { return std::string("#"); };
  std::vector<std::string> shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 0;
    NameMap blank_var = [&k](const std::string&) { return "#" + std::to_string(k++); };
    shape[i] = print_atom(shape_monoid, map_atom(p[i], blank, blank_var));
  }

  // Least linear extension of the dependency order.
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (!independent(p[i], p[j])) preds[j].push_back(i);
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> order;
  while (order.size() < n) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < n; ++j) {
      if (placed[j]) continue;
      bool ready = std::all_of(preds[j].begin(), preds[j].end(),
                               [&](std::size_t i) { return placed[i]; });
      if (ready && (!best || shape[j] < shape[*best])) best = j;
    }
    placed[*best] = true;
    order.push_back(*best);
  }

  std::vector<std::string> futs;
  std::vector<std::string> vars;
  std::set<std::string> seen;
  for (std::size_t i : order) note_names(p[i], futs, vars, seen);
  std::map<std::string, std::string> fmap;
  std::map<std::string, std::string> vmap;
  for (std::size_t i = 0; i < futs.size(); ++i) fmap[futs[i]] = fresh_future_name(i);
  for (std::size_t i = 0; i < vars.size(); ++i) vmap[vars[i]] = fresh_var_name(futs.size() + i);
  NameMap fut = [&](const std::string& f) {
    auto it = fmap.find(f);
    return it == fmap.end() ? f : it->second;
  };
  NameMap var = [&](const std::string& x) {
    auto it = vmap.find(x);
    return it == vmap.end() ? x : it->second;
  };

  Configuration out;
  out.resources = ctx_normalize(config.resources);
  for (std::size_t i : order) out.process.push_back(map_atom(p[i], fut, var));
  out.fresh = futs.size() + vars.size();
  return out;
}

std::string canonical_key(const GradeMonoid& m, const Configuration& config) {
  return print_config(m, canonicalize(config));
}

Measure config_measure(const Program& program, const Configuration& config) {
  return type_config(program, config).measure;
}

// ---------------------------------------------------------------------------

SrReport check_subject_reduction(const Program& program, const Trace& trace) {
  const GradeMonoid& m = program.monoid();
  SrReport report;
  FutureHints hints = hints_for_messages(program, trace.initial.process);
  auto violation = [&](std::uint64_t step, std::string code, std::string detail) {
    report.violation = SrViolation{step, std::move(code), std::move(detail)};
    return report;
  };

  ProcTyping before;
  try {
    before = type_config(program, trace.initial, {}, hints);
  } catch (const TypeErrorException& e) {
    return violation(0, e.error().code, "initial configuration: " + e.error().detail);
  }
  const Configuration* prev = &trace.initial;

  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    std::uint64_t index = i + 1;
    if (s.label.kind == Label::Kind::kCall && program.method(s.label.actor, s.label.method))
      hints[s.label.future] = method_future_type(program, s.label.actor, s.label.method);

    ProcTyping after;
    try {
      after = type_config(program, s.config, {}, hints);
    } catch (const TypeErrorException& e) {
      return violation(index, e.error().code, e.error().detail);
    }

    if (!(after.consumed == before.consumed))
      return violation(index, "ConsumedContextChanged", "consumed futures differ across the step");
    for (const auto& [f, entry] : before.produced) {
      auto it = after.produced.find(f);
      if (it == after.produced.end()) {
        if (!entry.marked)
          return violation(index, "ProducedFutureLost", "future " + f + " disappeared");
        continue;
      }
      if (!(it->second.type == entry.type))
        return violation(index, "FutureTypeChanged",
                         "future " + f + " changed from " + print_type(m, entry.type) + " to " +
                             print_type(m, it->second.type));
      if (entry.marked && !it->second.marked)
        return violation(index, "MarkLost", "future " + f + " lost its mark");
    }
    for (const auto& [f, entry] : after.produced) {
      if (before.produced.count(f)) continue;
      if (futures_produced(prev->process).count(f) || futures_consumed(prev->process).count(f))
        return violation(index, "StaleFuture", "future " + f + " is not fresh");
      if (!entry.marked)
        return violation(index, "UnmarkedFreshFuture", "new future " + f + " is not consumed");
    }

    LabelTyping lt = type_label(program, s.actor, s.label, hints);
    ActorContext expected = prev->resources;
    if (s.label.kind == Label::Kind::kHold) {
      auto rest = ctx_minus(m, expected, lt.requires_ctx);
      if (!rest)
        return violation(index, "ResourceAccounting", "hold exceeds the actor environment");
      expected = *rest;
    } else if (s.label.kind == Label::Kind::kRls) {
      expected = ctx_plus(m, expected, lt.produces_ctx);
    }
    if (!ctx_equal(m, expected, s.config.resources))
      return violation(index, "ResourceAccounting",
                       "expected " + print_ctx(m, expected) + " after " +
                           print_label(m, s.label) + ", found " +
                           print_ctx(m, s.config.resources));

    report.steps_checked = index;
    before = std::move(after);
    prev = &s.config;
  }
  return report;
}

// ---------------------------------------------------------------------------

Chooser helpful_chooser(const Program& program) {
  return [&program](const Configuration&,
                    const std::vector<StepResult>& options) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    Measure best_n = kUnbounded;
    for (std::size_t i = 0; i < options.size(); ++i) {
      auto n = try_measure(program, options[i].next);
      if (n && (!best || *n < best_n)) {
        best = i;
        best_n = *n;
      }
    }
    return best ? best : std::optional<std::size_t>(0);
  };
}

HelpfulRun helpful_run(const Program& program, const Configuration& start,
                       std::uint64_t max_steps) {
  HelpfulRun out;
  out.trace.initial = start;
  Configuration current = start;
  auto n = try_measure(program, current);
  if (!n) {
    out.failure = "start configuration does not type";
    out.trace.status = RunStatus::kAborted;
    return out;
  }
  out.trace.initial_measure = *n;
  for (std::uint64_t step = 0;; ++step) {
    if (*n == 0) {
      if (!is_terminated(current)) out.failure = "measure 0 on a configuration that is not terminated";
      out.trace.status = is_terminated(current) ? RunStatus::kTerminated : RunStatus::kAborted;
      return out;
    }
    if (step == max_steps) {
      out.failure = "step bound reached";
      out.trace.status = RunStatus::kBoundExhausted;
      return out;
    }
    auto options = step_config(program, current);
    std::optional<std::size_t> best;
    Measure best_n = kUnbounded;
    for (std::size_t i = 0; i < options.size(); ++i) {
      auto m = try_measure(program, options[i].next);
      if (m && (!best || *m < best_n)) {
        best = i;
        best_n = *m;
      }
    }
    if (!best || best_n >= *n) {
      out.failure = "no successor with measure below " + format_measure(*n);
      out.trace.status = options.empty() ? RunStatus::kStuck : RunStatus::kAborted;
      if (options.empty()) out.trace.stuck = diagnose_stuck(program, current);
      return out;
    }
    const StepResult& s = options[*best];
    out.trace.steps.push_back(
        TraceStep{step + 1, s.rule, s.actor, s.expr_rule, s.label, s.next, best_n});
    current = s.next;
    n = best_n;
  }
}

// ---------------------------------------------------------------------------

std::string_view verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::kFairTerminating:
      return "FairTerminating";
    case VerdictKind::kWeaklyTerminatingWitness:
      return "WeaklyTerminatingWitness";
    case VerdictKind::kStuckFound:
      return "StuckFound";
    case VerdictKind::kBoundExhausted:
      return "BoundExhausted";
    case VerdictKind::kLivelock:
      return "Livelock";
  }
  return "?";
}

std::set<std::pair<std::string, std::string>> recursive_methods(const Program& program) {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::set<Key>> calls;
  for (const auto& a : program.actors)
    for (const auto& md : a.methods) collect_calls(*md.body, calls[{a.name, md.name}]);
  std::set<Key> out;
  for (const auto& [start, _] : calls) {
    std::set<Key> seen;
    std::vector<Key> work(calls[start].begin(), calls[start].end());
    while (!work.empty()) {
      Key k = work.back();
      work.pop_back();
      if (!seen.insert(k).second) continue;
      if (k == start) {
        out.insert(start);
        break;
      }
      for (const auto& next : calls[k]) work.push_back(next);
    }
  }
  return out;
}

namespace {

using Unfolds = std::map<std::string, std::uint64_t>;

struct Node {
  Configuration config;
  Unfolds unfolds;
  std::uint64_t depth = 0;
  std::optional<std::size_t> parent;
  /// Step from the parent.
  std::string rule;
  std::string actor;
  std::string expr_rule;
  Label label;
  std::optional<Measure> measure;
  bool terminated = false;
  std::vector<std::size_t> succ;
};

struct Candidate {
  Configuration config;
  Unfolds unfolds;
  std::string key;
  const StepResult* step = nullptr;
  std::optional<Measure> measure;
};

struct Expansion {
  std::vector<StepResult> steps;
  std::vector<Candidate> kept;
  bool stuck = false;
  bool truncated = false;
  std::uint64_t pruned = 0;
  /// Some successor, pruned or not, has a smaller measure.
  bool helpful = false;
};

std::string state_key(const GradeMonoid& m, const Configuration& canonical, const Unfolds& u) {
  std::string key = print_config(m, canonical);
  for (const auto& [a, k] : u) key += "|" + a + "=" + std::to_string(k);
  return key;
}

}  // namespace

ExploreResult explore(const Program& program, const Configuration& start,
                      const ExploreBounds& bounds) {
  const GradeMonoid& m = program.monoid();
  const auto rec = recursive_methods(program);
  ExploreResult result;

  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;
  auto add_node = [&](Node node, const std::string& key) {
    node.terminated = is_terminated(node.config);
    index.emplace(key, nodes.size());
    nodes.push_back(std::move(node));
    return nodes.size() - 1;
  };

  {
    Node root;
    root.config = canonicalize(start);
    if (bounds.check_measures) root.measure = try_measure(program, root.config);
    std::string key = state_key(m, root.config, root.unfolds);
    add_node(std::move(root), key);
  }

  auto expand = [&](const Node& node) {
    Expansion ex;
    ex.steps = step_config(program, node.config);
    ex.stuck = ex.steps.empty() && !node.terminated;
    for (const auto& s : ex.steps) {
      Unfolds u = node.unfolds;
      bool pruned = false;
      if (s.expr_rule == "e-ch-l" || s.expr_rule == "e-ch-r") {
        const auto& t = std::get<Thread>(node.config.process[s.position]);
        const auto& ch = std::get<Choice>(redex(*t.expr).node);
        const Expr& branch = s.expr_rule == "e-ch-l" ? *ch.left : *ch.right;
        if (contains_recursive_call(branch, rec)) pruned = ++u[s.actor] > bounds.unfold;
      }
      Candidate c;
      c.config = canonicalize(s.next);
      c.unfolds = std::move(u);
      c.step = &s;
      if (bounds.check_measures) {
        c.measure = try_measure(program, c.config);
        if (c.measure && node.measure && *c.measure < *node.measure) ex.helpful = true;
      }
      if (pruned) {
        ex.pruned++;
        continue;
      }
      c.key = state_key(m, c.config, c.unfolds);
      ex.kept.push_back(std::move(c));
    }
    ex.truncated = !ex.steps.empty() && ex.kept.empty();
    return ex;
  };

  std::vector<std::size_t> layer{0};
  std::optional<std::size_t> stuck_node;
  bool state_bound_hit = false;
  while (!layer.empty() && !stuck_node) {
    std::vector<std::size_t> work;
    for (std::size_t id : layer) {
      if (nodes[id].depth >= bounds.max_depth) {
        if (!nodes[id].terminated) result.frontier_states++;
      } else {
        work.push_back(id);
      }
    }
    std::vector<Expansion> expansions(work.size());
    unsigned jobs = std::max(1u, bounds.jobs);
    if (jobs == 1 || work.size() < 2) {
      for (std::size_t i = 0; i < work.size(); ++i) expansions[i] = expand(nodes[work[i]]);
    } else {
      std::vector<std::thread> pool;
      for (unsigned j = 0; j < jobs; ++j) {
        pool.emplace_back([&, j] {
          for (std::size_t i = j; i < work.size(); i += jobs) expansions[i] = expand(nodes[work[i]]);
        });
      }
      for (auto& t : pool) t.join();
    }

    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < work.size(); ++i) {
      std::size_t id = work[i];
      Expansion& ex = expansions[i];
      if (bounds.check_measures && nodes[id].measure && *nodes[id].measure > 0 && !ex.helpful)
        result.helpful_violations++;
      if (ex.truncated) result.truncated_states++;
      result.pruned_transitions += ex.pruned;
      if (ex.stuck) {
        stuck_node = id;
        break;
      }
      for (auto& c : ex.kept) {
        result.transitions++;
        auto it = index.find(c.key);
        std::size_t target;
        if (it != index.end()) {
          target = it->second;
        } else {
          if (nodes.size() >= bounds.max_states) {
            state_bound_hit = true;
            continue;
          }
          Node child;
          child.config = std::move(c.config);
          child.unfolds = std::move(c.unfolds);
          child.depth = nodes[id].depth + 1;
          child.parent = id;
          child.rule = c.step->rule;
          child.actor = c.step->actor;
          child.expr_rule = c.step->expr_rule;
          child.label = c.step->label;
          child.measure = c.measure;
          target = add_node(std::move(child), c.key);
          next.push_back(target);
        }
        nodes[id].succ.push_back(target);
      }
    }
    layer = std::move(next);
  }

  result.states = nodes.size();
  for (const auto& node : nodes) {
    result.max_depth = std::max(result.max_depth, node.depth);
    if (node.terminated) result.terminated_states++;
    if (!bounds.check_measures) continue;
    if (!node.measure) {
      result.untyped_states++;
      continue;
    }
    result.measure_histogram[*node.measure]++;
    if ((*node.measure == 0) != node.terminated) result.zero_violations++;
  }

  // Replays the path from the raw start so labels and names stay coherent.
  auto path_to = [&](std::size_t id) {
    std::vector<std::size_t> path;
    for (std::optional<std::size_t> cur = id; cur; cur = nodes[*cur].parent) path.push_back(*cur);
    std::reverse(path.begin(), path.end());
    Trace t;
    t.initial = start;
    t.initial_measure = nodes[path.front()].measure;
    Configuration current = start;
    for (std::size_t k = 1; k < path.size(); ++k) {
      const Node& n = nodes[path[k]];
      std::string want = print_config(m, n.config);
      std::optional<StepResult> hit;
      for (auto& s : step_config(program, current)) {
        if (s.rule == n.rule && s.actor == n.actor && s.expr_rule == n.expr_rule &&
            print_config(m, canonicalize(s.next)) == want) {
          hit = std::move(s);
          break;
        }
      }
      if (!hit) {
        hit = StepResult{n.rule, n.actor, n.expr_rule, n.label, 0, n.config};
      }
      t.steps.push_back(
          TraceStep{k, hit->rule, hit->actor, hit->expr_rule, hit->label, hit->next, n.measure});
      current = hit->next;
    }
    return t;
  };

  if (stuck_node) {
    result.verdict = VerdictKind::kStuckFound;
    result.stuck_state = nodes[*stuck_node].config;
    result.diagnosis = diagnose_stuck(program, nodes[*stuck_node].config);
    result.witness = path_to(*stuck_node);
    result.witness.status = RunStatus::kStuck;
    result.witness.stuck = result.diagnosis;
    return result;
  }

  std::optional<std::size_t> first_done;
  for (std::size_t i = 0; i < nodes.size() && !first_done; ++i)
    if (nodes[i].terminated) first_done = i;
  if (first_done) {
    result.witness = path_to(*first_done);
    result.witness.status = RunStatus::kTerminated;
  }

  bool bounded = result.frontier_states > 0 || result.truncated_states > 0 || state_bound_hit;
  if (bounded) {
    result.verdict =
        first_done ? VerdictKind::kWeaklyTerminatingWitness : VerdictKind::kBoundExhausted;
    return result;
  }

  // Backward reachability of terminated states.
  std::vector<std::vector<std::size_t>> pred(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j : nodes[i].succ) pred[j].push_back(i);
  std::vector<bool> reaches(nodes.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].terminated) {
      reaches[i] = true;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    std::size_t j = queue.front();
    queue.pop_front();
    for (std::size_t i : pred[j])
      if (!reaches[i]) {
        reaches[i] = true;
        queue.push_back(i);
      }
  }
  bool all = std::all_of(reaches.begin(), reaches.end(), [](bool b) { return b; });
  result.verdict = all ? VerdictKind::kFairTerminating : VerdictKind::kLivelock;
  return result;
}

}  // namespace gract
