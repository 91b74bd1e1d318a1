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

#ifndef GRACT_SEMANTICS_HPP_
#define GRACT_SEMANTICS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gract/ast.hpp"

namespace gract {

// ---------------------------------------------------------------------------
// Labels.

struct Label {
  enum class Kind { kTau, kHold, kRls, kCall, kFut };
  Kind kind = Kind::kTau;
  /// kHold, kRls.
  std::string resource;
  Grade grade;
  /// kCall (the new future), kFut (the future read).
  std::string future;
  /// kCall.
  std::string actor;
  std::string method;
  std::vector<Value> args;
  /// kFut.
  Value value;

  static Label tau() { return {}; }
  static Label hold(std::string resource, Grade g);
  static Label rls(std::string resource, Grade g);
  static Label call(std::string future, std::string actor, std::string method,
                    std::vector<Value> args);
  static Label fut(std::string future, Value v);

  /// Hold and future reads come from the environment.
  bool is_input() const { return kind == Kind::kHold || kind == Kind::kFut; }
  /// Releases and calls go to the environment.
  bool is_output() const { return kind == Kind::kRls || kind == Kind::kCall; }

  friend bool operator==(const Label&, const Label&) = default;
};

std::string print_label(const GradeMonoid& m, const Label& l);

// ---------------------------------------------------------------------------
// Value expressions.

enum class EvalFailure {
  kUnboundVariable,
  kInsufficientGrade,
  kUngradedResourceVar,
  kNotAResource,
};

struct EvalResult {
  LocalEnv env;
  Value value;
};

/// At most one result: consumption is deterministic. On failure `why`, when
/// given, receives the reason.
std::optional<EvalResult> eval_value_expr(const GradeMonoid& m, const LocalEnv& env,
                                          const ValueExpr& ve, EvalFailure* why = nullptr);

// ---------------------------------------------------------------------------
// Expressions.

/// Environment reads for input labels. A missing callback offers nothing.
struct ExprInputs {
  std::function<bool(const std::string& resource, Grade g)> can_hold;
  std::function<std::optional<Value>(const std::string& future)> fulfilled;
};

struct ExprStep {
  Label label;
  LocalEnv env;
  ExprPtr expr;
  /// Innermost expression rule: e-cl, e-awt, e-hld, e-rls, e-op, e-ch-l,
  /// e-ch-r or e-let.
  std::string rule;
  /// Fresh-name counter after the step.
  std::uint64_t fresh = 0;
};

/// Every labelled step of `e`. A top-level Return has none; it is consumed by
/// the configuration rule `return`.
std::vector<ExprStep> step_expr(const Program& program, const LocalEnv& env, const ExprPtr& e,
                                const ExprInputs& inputs, std::uint64_t fresh);

/// The future the next step of `e` reads, if that step is an await.
std::optional<std::string> awaited_future(const GradeMonoid& m, const LocalEnv& env,
                                          const Expr& e);

/// The redex of `e`: the innermost bound expression of nested lets.
const Expr& redex(const Expr& e);

/// Resource-rewriting semantics read off the operation signature. Empty on a
/// signature mismatch.
std::optional<Value> apply_primop(const GradeMonoid& m, const OpSig& sig,
                                  const std::vector<Value>& args);

// ---------------------------------------------------------------------------
// Configurations.

struct StepResult {
  /// spawn, call, silent, hold, rls, return or get.
  std::string rule;
  std::string actor;
  /// Expression rule behind call, silent, hold, rls and get; empty otherwise.
  std::string expr_rule;
  Label label;
  /// Index of the acting atom in the source process.
  std::size_t position = 0;
  Configuration next;
};

/// All successors. Precongruence is applied implicitly: an idle actor may run
/// any suspended thread, an awaiting thread may yield to another thread or to
/// a spawn, and get looks through any atoms that can be swapped aside.
std::vector<StepResult> step_config(const Program& program, const Configuration& config);

/// Single applications of swap, act and yld.
std::vector<Process> precongruence_moves(const GradeMonoid& m, const Process& p);

/// Only idle actors and fulfilled futures remain.
bool is_terminated(const Configuration& config);

/// True when the fulfilled future at `from` can be brought next to the thread
/// at `to` by swaps.
bool can_bring_adjacent(const Process& p, std::size_t from, std::size_t to);

struct StuckDiagnosis {
  /// StuckAtHold, AwaitingUnfulfilled, OrphanMessage or StuckExpression.
  std::string code;
  std::string actor;
  std::string resource;
  Grade grade;
  std::string future;
  std::string detail;
};

/// Why each atom of a configuration without successors cannot move, most
/// telling first.
std::vector<StuckDiagnosis> diagnose_stuck(const Program& program, const Configuration& config);

std::string format_diagnosis(const GradeMonoid& m, const StuckDiagnosis& d);

// ---------------------------------------------------------------------------
// Runs.

struct TraceStep {
  std::uint64_t index = 0;
  std::string rule;
  std::string actor;
  std::string expr_rule;
  Label label;
  Configuration config;
  std::optional<std::uint64_t> measure;
};

enum class RunStatus { kTerminated, kStuck, kBoundExhausted, kAborted };

std::string_view run_status_name(RunStatus s);

struct Trace {
  Configuration initial;
  std::optional<std::uint64_t> initial_measure;
  std::vector<TraceStep> steps;
  RunStatus status = RunStatus::kTerminated;
  std::vector<StuckDiagnosis> stuck;
  std::string message;
};

/// Picks one of `options` or returns empty to abort the run.
using Chooser = std::function<std::optional<std::size_t>(const Configuration& current,
                                                         const std::vector<StepResult>& options)>;

Trace run(const Program& program, Configuration start, const Chooser& choose,
          std::uint64_t max_steps);

/// Uniform choice driven by a seeded 64-bit Mersenne Twister.
Chooser random_chooser(std::uint64_t seed);
/// The leftmost acting atom, first option on ties.
Chooser fifo_chooser();

/// One directive per line: `<rule> <actor> [<expr-rule>]`; `#` starts a
/// comment. Each step takes the first option matching the next directive.
struct ScriptDirective {
  std::string rule;
  std::string actor;
  std::string expr_rule;
  int line = 0;
};
std::vector<ScriptDirective> parse_script(std::string_view text);
/// Aborts with `error` set when a directive matches nothing or runs out.
Chooser script_chooser(std::vector<ScriptDirective> script, std::string* error);

}  // namespace gract

#endif  // GRACT_SEMANTICS_HPP_
