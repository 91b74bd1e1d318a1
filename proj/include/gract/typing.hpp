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

// Algorithmic graded type checker. Every judgment is computed with one
// canonical derivation: usages are inferred instead of split, required
// contexts are minimal, let cancels as much as it can and choice takes the
// cheaper branch.

#ifndef GRACT_TYPING_HPP_
#define GRACT_TYPING_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gract/ast.hpp"
#include "gract/semantics.hpp"

namespace gract {

// ---------------------------------------------------------------------------
// Measures.

/// Saturating natural; kUnbounded is absorbing under addition.
using Measure = std::uint64_t;
inline constexpr Measure kUnbounded = std::numeric_limits<Measure>::max();

Measure measure_add(Measure a, Measure b);
std::string format_measure(Measure n);

// ---------------------------------------------------------------------------
// Errors.

struct TypeError {
  std::string code;
  SourceLoc loc;
  std::string detail;
  /// Method being checked, when there is one.
  std::string actor;
  std::string method;
};

class TypeErrorException : public std::runtime_error {
 public:
  explicit TypeErrorException(TypeError e);
  const TypeError& error() const { return error_; }

 private:
  TypeError error_;
};

std::string format_type_error(const TypeError& e);

// ---------------------------------------------------------------------------
// Contexts.

/// Gamma: declared types of the variables in scope.
using TypingContext = std::map<std::string, Type>;

struct FutureEntry {
  Type type;
  bool marked = false;
  friend bool operator==(const FutureEntry&, const FutureEntry&) = default;
};
/// Sigma. Marked entries are produced and already consumed.
using FutureContext = std::map<std::string, FutureEntry>;

/// Variables consumed by one derivation; resource grades are summed.
using VarUsage = std::map<std::string, Type>;

/// Usage of an expression. Each alternative is the usage of one way through
/// its choices; every alternative must fit the binder that closes it.
struct Usage {
  std::vector<VarUsage> alternatives{VarUsage{}};
  std::set<std::string> futures;
};

/// Gamma1 + Gamma2; futures may occur on one side only.
VarUsage usage_sum(const GradeMonoid& m, const VarUsage& a, const VarUsage& b);

/// No futures, and every resource grade is discardable.
bool is_discardable(const GradeMonoid& m, const Type& t);

// ---------------------------------------------------------------------------
// Judgments.

struct ValueTyping {
  Type type;
  VarUsage vars;
  std::set<std::string> futures;
};

/// Resource literals type at their own grade; callers may weaken them.
ValueTyping type_value_expr(const GradeMonoid& m, const TypingContext& gamma,
                            const FutureContext& sigma, const ValueExpr& ve);

struct ExprTyping {
  Type type;
  ActorContext requires_ctx;
  ActorContext produces_ctx;
  Measure measure = 0;
  Usage usage;
};

/// Measure assumed for a call to `actor.method`.
using CalleeMeasure = std::function<Measure(const std::string& actor, const std::string& method)>;

/// Declared measures from the method table.
CalleeMeasure declared_measures(const Program& program);

/// Types `e` run by `actor`. Usage is reported, not checked against gamma.
ExprTyping type_expr(const Program& program, const std::string& actor, const TypingContext& gamma,
                     const FutureContext& sigma, const Expr& e);
ExprTyping type_expr(const Program& program, const std::string& actor, const TypingContext& gamma,
                     const FutureContext& sigma, const Expr& e, const CalleeMeasure& callee);

/// Checks that every alternative of `usage` fits `gamma` with a discardable
/// remainder.
void check_usage_fits(const GradeMonoid& m, const TypingContext& gamma, const Usage& usage,
                      SourceLoc loc);

struct EnvTyping {
  TypingContext gamma;
  std::set<std::string> futures;
};

EnvTyping type_local_env(const GradeMonoid& m, const LocalEnv& env, const FutureContext& sigma);

/// Expected future types, keyed by future name. Keeps future types stable
/// across steps that change the producer's own typing.
using FutureHints = std::map<std::string, Type>;

/// The future type a call to `actor.method` promises.
Type method_future_type(const Program& program, const std::string& actor,
                        const std::string& method);

/// Hints for every call message in `p`.
FutureHints hints_for_messages(const Program& program, const Process& p);

struct ProcTyping {
  ActorContext requires_ctx;
  /// Futures consumed from outside the process.
  FutureContext consumed;
  Measure measure = 0;
  FutureContext produced;
};

ProcTyping type_process(const Program& program, const Process& p, const FutureContext& ambient,
                        const FutureHints& hints = {});

/// Types the process and checks `requires + residual <= resources`.
/// `loc` is reported on insufficient resources.
ProcTyping type_config(const Program& program, const Configuration& config,
                       const ActorContext& residual = {}, const FutureHints& hints = {},
                       SourceLoc loc = {});

struct LabelTyping {
  ActorContext requires_ctx;
  FutureContext consumed;
  FutureContext produced;
  ActorContext produces_ctx;
};

LabelTyping type_label(const Program& program, const std::string& actor, const Label& l,
                       const FutureHints& hints = {});

// ---------------------------------------------------------------------------
// Programs.

struct MethodReport {
  std::string actor;
  std::string method;
  /// Absent when the body does not type.
  std::optional<ExprTyping> computed;
  bool ok = false;
};

struct ProgramReport {
  std::vector<MethodReport> methods;
  /// Typing of the initial configuration, when it types.
  std::optional<ProcTyping> config;
  std::vector<TypeError> errors;
  bool ok() const { return errors.empty(); }
};

/// Checks every method body against its declaration. Recursive measures are
/// first solved by iteration down from kUnbounded.
std::vector<TypeError> check_method_table(const Program& program,
                                          std::vector<MethodReport>* reports = nullptr);

/// Method table, start declarations and the initial configuration.
ProgramReport check_program(const Program& program);

}  // namespace gract

#endif  // GRACT_TYPING_HPP_
