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

#ifndef GRACT_PRINTER_HPP_
#define GRACT_PRINTER_HPP_

#include <string>

#include "gract/ast.hpp"

namespace gract {

// Everything printed in surface syntax parses back to the same tree, up to
// the names of `;` binders.

std::string print_value(const GradeMonoid& m, const Value& v);
std::string print_value_expr(const GradeMonoid& m, const ValueExpr& ve);
std::string print_type(const GradeMonoid& m, const Type& t);
/// `{}` when empty, otherwise `{A: {r^g}, B: {s^h}}`.
std::string print_ctx(const GradeMonoid& m, const ActorContext& ctx);
/// Single line.
std::string print_expr(const GradeMonoid& m, const Expr& e);
/// One sequence item per line, continuation lines indented by `indent`.
std::string print_expr_block(const GradeMonoid& m, const Expr& e, int indent);
std::string print_env(const GradeMonoid& m, const LocalEnv& env);
std::string print_atom(const GradeMonoid& m, const Atom& atom);
std::string print_config(const GradeMonoid& m, const Configuration& config);
std::string print_program(const Program& program);

}  // namespace gract

#endif  // GRACT_PRINTER_HPP_
