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

// Dynamic checks of the metatheory on concrete programs: subject reduction
// along traces, measure-guided runs and bounded state-space exploration.

#ifndef GRACT_EXPLORER_HPP_
#define GRACT_EXPLORER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gract/ast.hpp"
#include "gract/semantics.hpp"
#include "gract/typing.hpp"

namespace gract {

// ---------------------------------------------------------------------------
// Canonical forms.

/// Lexicographically least reordering reachable by swaps of independent
/// atoms, with futures and fresh variables renamed by first occurrence.
Configuration canonicalize(const Configuration& config);

/// Hashable text of the canonical form; equal for swap-equivalent states.
std::string canonical_key(const GradeMonoid& m, const Configuration& config);

/// Measure read off the configuration typing.
Measure config_measure(const Program& program, const Configuration& config);

// ---------------------------------------------------------------------------
// Subject reduction.

struct SrViolation {
  /// Index of the offending step; 0 is the initial configuration.
  std::uint64_t step = 0;
  std::string code;
  std::string detail;
};

struct SrReport {
  std::uint64_t steps_checked = 0;
  std::optional<SrViolation> violation;
  bool ok() const { return !violation.has_value(); }
};

/// Re-types every configuration of `trace` and compares consecutive future
/// contexts and actor environments.
SrReport check_subject_reduction(const Program& program, const Trace& trace);

// ---------------------------------------------------------------------------
// Measure-guided runs.

struct HelpfulRun {
  Trace trace;
  /// Empty on success; otherwise why no decreasing step was found.
  std::string failure;
  bool ok() const { return failure.empty(); }
};

/// Always takes a successor of least measure, which must be strictly smaller.
HelpfulRun helpful_run(const Program& program, const Configuration& start,
                       std::uint64_t max_steps = 100000);

/// Chooser form of helpful_run for use with run().
Chooser helpful_chooser(const Program& program);

// ---------------------------------------------------------------------------
// Exploration.

struct ExploreBounds {
  std::uint64_t max_depth = 500;
  std::uint64_t max_states = 1000000;
  /// Branch selections per actor that lead towards a recursive call.
  std::uint64_t unfold = 2;
  unsigned jobs = 1;
  /// Measure and helpful-direction checks; off for ill-typed inputs.
  bool check_measures = true;
};

enum class VerdictKind {
  kFairTerminating,
  kWeaklyTerminatingWitness,
  kStuckFound,
  kBoundExhausted,
  kLivelock,
};

std::string_view verdict_name(VerdictKind v);

struct ExploreResult {
  VerdictKind verdict = VerdictKind::kBoundExhausted;
  std::uint64_t states = 0;
  std::uint64_t transitions = 0;
  std::uint64_t max_depth = 0;
  std::uint64_t terminated_states = 0;
  /// Successors dropped by the unfold limit.
  std::uint64_t pruned_transitions = 0;
  /// States whose every successor was pruned by the unfold limit.
  std::uint64_t truncated_states = 0;
  /// States left unexpanded by the depth or state bound.
  std::uint64_t frontier_states = 0;
  std::map<Measure, std::uint64_t> measure_histogram;
  /// States with measure > 0 and no successor of smaller measure.
  std::uint64_t helpful_violations = 0;
  /// States where measure zero and termination disagree.
  std::uint64_t zero_violations = 0;
  /// States whose configuration does not type.
  std::uint64_t untyped_states = 0;
  std::optional<Configuration> stuck_state;
  std::vector<StuckDiagnosis> diagnosis;
  /// Path from the start to the stuck state or to a terminated state.
  Trace witness;
};

/// Breadth-first over canonical states within `bounds`.
ExploreResult explore(const Program& program, const Configuration& start,
                      const ExploreBounds& bounds);

/// Methods that can reach themselves through calls.
std::set<std::pair<std::string, std::string>> recursive_methods(const Program& program);

}  // namespace gract

#endif  // GRACT_EXPLORER_HPP_
