// Copyright 2026 The tbcontrol Authors
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

#ifndef TBCONTROL_CLI_HPP_
#define TBCONTROL_CLI_HPP_

#include <ostream>
#include <span>
#include <string>

namespace tbcontrol {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNotConverged = 3;

/// Entry point of the `tbcontrol` tool. `args` excludes the program name.
///
///   solve    one scenario -> trajectory_<label>.csv + summary.csv
///   compare  uncontrolled and strategies 1-3 -> summary.csv + trajectories
///   r0       print the basic reproduction number
///   sweep    vary one model parameter, write sweep.csv
///
/// Returns kExitValidation for bad flags or scenarios, kExitNotConverged
/// when --strict is set and a solve did not converge.
int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace tbcontrol

#endif  // TBCONTROL_CLI_HPP_
