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

// JSON forms of traces, reports and verdicts. Grades, values, types and
// expressions are carried as their printed text.

#ifndef GRACT_SERIALIZE_HPP_
#define GRACT_SERIALIZE_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "gract/ast.hpp"
#include "gract/explorer.hpp"
#include "gract/semantics.hpp"
#include "gract/typing.hpp"
#include "json.hpp"

namespace gract {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchema = "gract/1";

class SerializeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json ctx_to_json(const GradeMonoid& m, const ActorContext& ctx);
ActorContext ctx_from_json(const GradeMonoid& m, const Json& j);

Json label_to_json(const GradeMonoid& m, const Label& l);
Label label_from_json(const GradeMonoid& m, const Json& j);

Json atom_to_json(const GradeMonoid& m, const Atom& atom);
Atom atom_from_json(const Program& program, const Json& j);

Json config_to_json(const GradeMonoid& m, const Configuration& config);
Configuration config_from_json(const Program& program, const Json& j);

/// One line for the initial configuration (step 0), then one per step.
std::string trace_to_jsonl(const GradeMonoid& m, const Trace& trace);
/// Inverse of trace_to_jsonl. Throws SerializeError naming the bad line.
Trace trace_from_jsonl(const Program& program, std::string_view text);

Json type_error_to_json(const TypeError& e);
Json diagnosis_to_json(const GradeMonoid& m, const StuckDiagnosis& d);
Json program_report_to_json(const Program& program, const ProgramReport& report);
Json sr_report_to_json(const SrReport& report);
Json explore_to_json(const GradeMonoid& m, const ExploreResult& result, const ExploreBounds& bounds);

}  // namespace gract

#endif  // GRACT_SERIALIZE_HPP_
