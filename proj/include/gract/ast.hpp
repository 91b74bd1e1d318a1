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

#ifndef GRACT_AST_HPP_
#define GRACT_AST_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gract/grades.hpp"

namespace gract {

struct SourceLoc {
  int line = 0;
  int col = 0;
  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

// ---------------------------------------------------------------------------
// Values and value expressions.

struct UnitValue {
  friend bool operator==(const UnitValue&, const UnitValue&) = default;
};
struct ResourceValue {
  std::string name;
  Grade grade;
  friend bool operator==(const ResourceValue&, const ResourceValue&) = default;
};
struct FutureValue {
  std::string name;
  friend bool operator==(const FutureValue&, const FutureValue&) = default;
};
using Value = std::variant<UnitValue, ResourceValue, FutureValue>;

inline Value unit_value() { return UnitValue{}; }
inline Value resource_value(std::string name, Grade g) { return ResourceValue{std::move(name), g}; }
inline Value future_value(std::string name) { return FutureValue{std::move(name)}; }

struct VarRef {
  std::string name;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};
struct GradedVar {
  std::string name;
  Grade grade;
  friend bool operator==(const GradedVar&, const GradedVar&) = default;
};
using ValueExpr = std::variant<VarRef, GradedVar, Value>;

// ---------------------------------------------------------------------------
// Expressions. Nodes are immutable and shared.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Call {
  std::string actor;
  std::string method;
  std::vector<ValueExpr> args;
};
struct Await {
  ValueExpr target;
};
struct Hold {
  Grade grade;
  std::string resource;
};
struct Release {
  Grade grade;
  ValueExpr target;
};
struct PrimOp {
  std::string op;
  std::vector<ValueExpr> args;
};
struct Choice {
  ExprPtr left;
  ExprPtr right;
};
struct Return {
  ValueExpr value;
};
/// Binds `var` in `body` only.
struct Let {
  std::string var;
  ExprPtr bound;
  ExprPtr body;
};

struct Expr {
  std::variant<Call, Await, Hold, Release, PrimOp, Choice, Return, Let> node;
  SourceLoc loc;
};

ExprPtr make_call(std::string actor, std::string method, std::vector<ValueExpr> args,
                  SourceLoc loc = {});
ExprPtr make_await(ValueExpr target, SourceLoc loc = {});
ExprPtr make_hold(Grade g, std::string resource, SourceLoc loc = {});
ExprPtr make_release(Grade g, ValueExpr target, SourceLoc loc = {});
ExprPtr make_primop(std::string op, std::vector<ValueExpr> args, SourceLoc loc = {});
ExprPtr make_choice(ExprPtr left, ExprPtr right, SourceLoc loc = {});
ExprPtr make_return(ValueExpr value, SourceLoc loc = {});
ExprPtr make_let(std::string var, ExprPtr bound, ExprPtr body, SourceLoc loc = {});

/// Structural equality; source locations are ignored.
bool expr_equal(const Expr& a, const Expr& b);

/// Binders introduced by `e1 ; e2` desugaring start with this character.
inline constexpr char kSeqBinderPrefix = '$';
/// Fresh names produced at run time contain this character.
inline constexpr char kFreshMarker = '#';

/// Replaces free occurrences of variable `from` with `to`.
ExprPtr rename_var(const ExprPtr& e, const std::string& from, const std::string& to);
bool occurs_free(const Expr& e, const std::string& var);
std::set<std::string> free_vars(const Expr& e);

// ---------------------------------------------------------------------------
// Types. Future payload contexts are kept normalized so that == is semantic.

struct Type {
  enum class Kind { kUnit, kRes, kFut };
  Kind kind = Kind::kUnit;
  std::string resource;
  Grade grade;
  std::shared_ptr<const Type> payload;
  ActorContext ctx;

  static Type unit();
  static Type res(std::string resource, Grade g);
  static Type fut(Type payload, const ActorContext& ctx);

  bool is_unit() const { return kind == Kind::kUnit; }
  bool is_res() const { return kind == Kind::kRes; }
  bool is_fut() const { return kind == Kind::kFut; }

  friend bool operator==(const Type& a, const Type& b);
};

// ---------------------------------------------------------------------------
// Runtime syntax.

/// Ordered variable bindings; names are unique.
using LocalEnv = std::vector<std::pair<std::string, Value>>;

const Value* env_lookup(const LocalEnv& env, const std::string& var);

struct Thread {
  LocalEnv env;
  ExprPtr expr;
  std::string future;
  std::string actor;
  bool active = true;
};
struct Idle {
  std::string actor;
};
struct CallMsg {
  std::string future;
  std::string actor;
  std::string method;
  std::vector<Value> args;
};
struct Fulfilled {
  std::string future;
  Value value;
};
using Atom = std::variant<Thread, Idle, CallMsg, Fulfilled>;
/// Flat parallel composition; order is significant. Empty means done.
using Process = std::vector<Atom>;

struct Configuration {
  ActorContext resources;
  Process process;
  /// Next unused index for fresh future and variable names.
  std::uint64_t fresh = 0;
};

bool atom_equal(const Atom& a, const Atom& b);
bool config_equal(const Configuration& a, const Configuration& b);

std::set<std::string> futures_in(const Value& v);
std::set<std::string> futures_in(const ValueExpr& ve);
std::set<std::string> futures_in(const Expr& e);

std::set<std::string> futures_produced(const Atom& atom);
std::set<std::string> futures_consumed(const Atom& atom);
/// Union over the sequence.
std::set<std::string> futures_produced(const Process& p);
/// Left fold of fr(P1 || P2) = fr(P1) + (fr(P2) - fp(P1)).
std::set<std::string> futures_consumed(const Process& p);
/// True when the two atoms may be swapped.
bool independent(const Atom& a, const Atom& b);

/// Empty when well formed; otherwise one message per violation.
std::vector<std::string> well_formed(const Configuration& config);

std::string fresh_future_name(std::uint64_t index);
std::string fresh_var_name(std::uint64_t index);
/// N for a fresh name `<prefix>#N`, or empty for any other name.
std::optional<std::uint64_t> fresh_index(const std::string& name);

// ---------------------------------------------------------------------------
// Programs.

struct Param {
  std::string name;
  Type type;
};

struct OpSig {
  std::string name;
  std::vector<Param> params;
  Type result;
  SourceLoc loc;
};

struct MethodDecl {
  std::string name;
  std::vector<Param> params;
  Type result;
  ActorContext requires_ctx;
  ActorContext produces_ctx;
  std::uint64_t measure = 0;
  ExprPtr body;
  SourceLoc loc;
};

struct ActorDecl {
  std::string name;
  std::vector<MethodDecl> methods;
  SourceLoc loc;
};

struct StartDecl {
  std::string actor;
  std::string method;
  std::vector<Value> args;
  SourceLoc loc;
};

struct Program {
  std::shared_ptr<const GradeMonoid> grades;
  std::vector<OpSig> ops;
  std::vector<ActorDecl> actors;
  ActorContext init;
  SourceLoc init_loc;
  std::vector<StartDecl> starts;

  const GradeMonoid& monoid() const { return *grades; }
  const ActorDecl* actor(const std::string& name) const;
  const MethodDecl* method(const std::string& actor, const std::string& method) const;
  const OpSig* op(const std::string& name) const;
};

/// Start messages left of one Idle per declared actor; futures `f#0`, ...
Configuration initial_configuration(const Program& program);

}  // namespace gract

#endif  // GRACT_AST_HPP_
