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

// The `gract` command line: check, run, explore, sr and print.

#ifndef GRACT_CLI_HPP_
#define GRACT_CLI_HPP_

#include <iosfwd>

namespace gract {

/// Process exit codes. Stable for scripting.
enum ExitCode : int {
  kExitOk = 0,
  kExitTypeError = 1,
  kExitParseError = 2,
  kExitIoError = 3,
  kExitStuck = 4,
  kExitSrViolation = 5,
  kExitNotFairTerminating = 6,
};

/// Runs one invocation. `in` feeds the interactive stepper.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace gract

#endif  // GRACT_CLI_HPP_
