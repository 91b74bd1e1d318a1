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

#ifndef GRACT_PARSER_HPP_
#define GRACT_PARSER_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gract/ast.hpp"

namespace gract {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, std::vector<std::string> expected, std::string found,
             std::string message);

  SourceLoc loc() const { return loc_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceLoc loc_;
  std::vector<std::string> expected_;
  std::string found_;
};

/// Parses a whole `.gract` program. `e1 ; e2` becomes a Let on a fresh `$N`
/// binder, `ve?` becomes Await, `(e1 (+) e2 (+) e3)` nests to the right.
/// Throws ParseError.
Program parse_program(std::string_view text);

/// Parses a single expression against an existing program header, with
/// `scope` naming the variables already bound. Used by tests and tools.
ExprPtr parse_expr(std::string_view text, const Program& program,
                   const std::vector<std::string>& scope = {});

/// A run-time value: `unit`, `Name^grade` or a future name such as `f#3`.
Value parse_value(std::string_view text, const GradeMonoid& m);

}  // namespace gract

#endif  // GRACT_PARSER_HPP_
