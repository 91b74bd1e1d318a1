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

#include "gract/printer.hpp"

#include <sstream>

namespace gract {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join_args(const GradeMonoid& m, const std::vector<ValueExpr>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += print_value_expr(m, args[i]);
  }
  return out;
}

bool is_seq(const Let& let) {
  return !let.var.empty() && let.var[0] == kSeqBinderPrefix && !occurs_free(*let.body, let.var);
}

// `newline` separates sequence items; empty for single-line output.
void emit(const GradeMonoid& m, const Expr& e, const std::string& newline, std::ostream& out);

void emit_seq_head(const GradeMonoid& m, const Expr& e, std::ostream& out) {
  // The left of `;` and the bound of a let are printed on one line; a nested
  // let there needs parentheses to keep its body from swallowing the rest.
  if (std::holds_alternative<Let>(e.node)) {
    out << '(';
    emit(m, e, "", out);
    out << ')';
  } else {
    emit(m, e, "", out);
  }
}

void emit(const GradeMonoid& m, const Expr& e, const std::string& newline, std::ostream& out) {
  const std::string sep = newline.empty() ? " " : newline;
  std::visit(overloaded{
                 [&](const Call& x) {
                   out << x.actor << '!' << x.method << '(' << join_args(m, x.args) << ')';
                 },
                 [&](const Await& x) { out << print_value_expr(m, x.target) << '?'; },
                 [&](const Hold& x) { out << "hold " << m.format(x.grade) << ' ' << x.resource; },
                 [&](const Release& x) {
                   out << "release " << m.format(x.grade) << ' ' << print_value_expr(m, x.target);
                 },
                 [&](const PrimOp& x) { out << x.op << '(' << join_args(m, x.args) << ')'; },
                 [&](const Choice& x) {
                   out << '(';
                   emit(m, *x.left, "", out);
                   out << " (+) ";
                   emit(m, *x.right, "", out);
                   out << ')';
                 },
                 [&](const Return& x) { out << "return " << print_value_expr(m, x.value); },
                 [&](const Let& x) {
                   if (is_seq(x)) {
                     emit_seq_head(m, *x.bound, out);
                     out << ';' << sep;
                   } else {
                     out << "let " << x.var << " = ";
                     emit(m, *x.bound, "", out);
                     out << " in" << sep;
                   }
                   emit(m, *x.body, newline, out);
                 },
             },
             e.node);
}

}  // namespace

std::string print_value(const GradeMonoid& m, const Value& v) {
  return std::visit(overloaded{
                        [](const UnitValue&) { return std::string("unit"); },
                        [&](const ResourceValue& r) { return r.name + "^" + m.format(r.grade); },
                        [](const FutureValue& f) { return f.name; },
                    },
                    v);
}

std::string print_value_expr(const GradeMonoid& m, const ValueExpr& ve) {
  return std::visit(overloaded{
                        [](const VarRef& x) { return x.name; },
                        [&](const GradedVar& x) { return x.name + "^" + m.format(x.grade); },
                        [&](const Value& v) { return print_value(m, v); },
                    },
                    ve);
}

std::string print_type(const GradeMonoid& m, const Type& t) {
  switch (t.kind) {
    case Type::Kind::kUnit:
      return "Unit";
    case Type::Kind::kRes:
      return t.resource + "^" + m.format(t.grade);
    case Type::Kind::kFut:
      return "Fut(" + print_type(m, *t.payload) + ", " + print_ctx(m, t.ctx) + ")";
  }
  return "?";
}

std::string print_ctx(const GradeMonoid& m, const ActorContext& ctx) {
  return format_ctx(m, ctx);
}

std::string print_expr(const GradeMonoid& m, const Expr& e) {
  std::ostringstream out;
  emit(m, e, "", out);
  return out.str();
}

std::string print_expr_block(const GradeMonoid& m, const Expr& e, int indent) {
  std::ostringstream out;
  emit(m, e, "\n" + std::string(static_cast<std::size_t>(indent), ' '), out);
  return out.str();
}

std::string print_env(const GradeMonoid& m, const LocalEnv& env) {
  std::string out = "{";
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (i) out += ", ";
    out += env[i].first + " -> " + print_value(m, env[i].second);
  }
  return out + "}";
}

std::string print_atom(const GradeMonoid& m, const Atom& atom) {
  return std::visit(
      overloaded{
          [&](const Thread& t) {
            return std::string(t.active ? "active" : "suspended") + "(" + t.actor + ", " +
                   t.future + ")" + print_env(m, t.env) + " " + print_expr(m, *t.expr);
          },
          [](const Idle& i) { return "idle(" + i.actor + ")"; },
          [&](const CallMsg& c) {
            std::string args;
            for (std::size_t i = 0; i < c.args.size(); ++i) {
              if (i) args += ", ";
              args += print_value(m, c.args[i]);
            }
            return c.future + " <- " + c.actor + "!" + c.method + "(" + args + ")";
          },
          [&](const Fulfilled& f) { return f.future + " <- " + print_value(m, f.value); },
      },
      atom);
}

std::string print_config(const GradeMonoid& m, const Configuration& config) {
  std::string out = print_ctx(m, config.resources) + " |- ";
  if (config.process.empty()) return out + "0";
  for (std::size_t i = 0; i < config.process.size(); ++i) {
    if (i) out += " || ";
    out += print_atom(m, config.process[i]);
  }
  return out;
}

namespace {

std::string print_params(const GradeMonoid& m, const std::vector<Param>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].name + ": " + print_type(m, params[i].type);
  }
  return out + ")";
}

}  // namespace

std::string print_program(const Program& program) {
  const GradeMonoid& m = program.monoid();
  std::ostringstream out;
  out << "grade " << m.name();
  if (const auto* lev = dynamic_cast<const LevelLattice*>(&m)) {
    out << " {";
    auto edges = lev->covering_relations();
    for (std::size_t i = 0; i < edges.size(); ++i)
      out << (i ? ", " : " ") << edges[i].first << " <= " << edges[i].second;
    // Levels with no edge besides the bottom still need to be declared.
    for (const auto& name : lev->levels()) {
      if (name == "0") continue;
      bool mentioned = false;
      for (const auto& [lo, hi] : edges) mentioned = mentioned || lo == name || hi == name;
      if (!mentioned) out << (edges.empty() ? " " : ", ") << name;
    }
    out << " }";
  }
  out << "\n";
  if (!program.ops.empty()) out << "\n";
  for (const auto& op : program.ops)
    out << op.name << print_params(m, op.params) << ": " << print_type(m, op.result) << "\n";
  for (const auto& actor : program.actors) {
    out << "\n" << actor.name << " {\n";
    for (const auto& method : actor.methods) {
      out << "  " << method.name << print_params(m, method.params) << ": "
          << print_type(m, method.result) << "\n";
      out << "    requires " << print_ctx(m, method.requires_ctx) << "\n";
      out << "    produces " << print_ctx(m, method.produces_ctx) << "\n";
      out << "    measure " << method.measure << " {\n";
      out << "    " << print_expr_block(m, *method.body, 4) << "\n";
      out << "  }\n";
    }
    out << "}\n";
  }
  out << "\ninit " << print_ctx(m, program.init);
  for (const auto& s : program.starts) {
    out << ";\nstart " << s.actor << "!" << s.method << "(";
    for (std::size_t i = 0; i < s.args.size(); ++i)
      out << (i ? ", " : "") << print_value(m, s.args[i]);
    out << ")";
  }
  out << "\n";
  return out.str();
}

}  // namespace gract
