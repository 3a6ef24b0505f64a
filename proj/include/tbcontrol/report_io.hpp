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

#ifndef TBCONTROL_REPORT_IO_HPP_
#define TBCONTROL_REPORT_IO_HPP_

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "tbcontrol/model.hpp"
#include "tbcontrol/solver.hpp"

namespace tbcontrol {

inline constexpr std::string_view kTrajectoryHeader =
    "t,S,L1,I,L2,R,u1,u2,lam1,lam2,lam3,lam4,lam5,"
    "frac_S,frac_L1,frac_I,frac_L2,frac_R";

inline constexpr std::string_view kSummaryHeader =
    "strategy,terminal_IL2,objective,iterations,converged";

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

/// One row per grid node. Requires adjoints in the trajectory.
void write_trajectory_csv(const SolveReport& report, const ModelParams& p,
                          std::ostream& out);
void write_trajectory_csv(const SolveReport& report, const ModelParams& p,
                          const std::filesystem::path& path);

/// One row per outcome. Failed rows leave the numeric columns empty and
/// put `failed` in the converged column.
void write_summary(std::span<const StrategyOutcome> rows, std::ostream& out);
void write_summary(std::span<const StrategyOutcome> rows,
                   const std::filesystem::path& path);

}  // namespace tbcontrol

#endif  // TBCONTROL_REPORT_IO_HPP_
