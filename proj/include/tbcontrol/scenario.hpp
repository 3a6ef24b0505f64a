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

#ifndef TBCONTROL_SCENARIO_HPP_
#define TBCONTROL_SCENARIO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tbcontrol/model.hpp"
#include "tbcontrol/solver.hpp"

namespace tbcontrol {

/// A complete run description: parameters, initial state, strategy and
/// solver settings.
///
/// Scenario documents are flat UTF-8 `key = value` text; `#` starts a
/// comment. Recognised keys:
///
///   beta mu delta phi omega omega_r sigma sigma_r tau0 tau1 tau2
///   n_total horizon eps1 eps2 w1 w2      model parameters
///   case                                 1 or 2, preset initial fractions
///   s0 l1_0 i0 l2_0 r0                   explicit initial state (all five)
///   strategy                             0 (none), 1 (u1), 2 (u2), 3 (both)
///   n_steps tol relaxation max_iters     solver settings
///
/// Missing keys take the member defaults of ModelParams / SolverOptions,
/// Case 1 and Strategy 3. Explicit initial values take precedence over
/// `case`. Real values may be written as decimals or as `a/b`.
struct Scenario {
  ModelParams params;
  StateVec initial;
  std::string case_label = "1";  ///< "1", "2" or "custom"
  StrategyMask strategy;
  SolverOptions solver;

  bool operator==(const Scenario&) const = default;
};

/// Key/value pairs applied on top of a document, in order.
using ScenarioOverrides = std::vector<std::pair<std::string, std::string>>;

/// Initial state of preset case 1 or 2 scaled to n_total.
StateVec case_initial_state(int case_number, double n_total);

/// Defaults with Case 1 initials and Strategy 3.
Scenario default_scenario();

/// Parses and validates a scenario document. Throws ScenarioError carrying
/// the key and 1-based line (0 for overrides and cross-field rules).
Scenario parse_scenario(std::string_view text,
                        const ScenarioOverrides& overrides = {});

/// Reads `path` and parses it. A missing file is a ScenarioError.
Scenario load_scenario(const std::filesystem::path& path,
                       const ScenarioOverrides& overrides = {});

/// Document that parse_scenario() maps back to `scenario` exactly.
std::string format_scenario(const Scenario& scenario);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Names accepted by a parameter sweep (the ModelParams keys).
const std::vector<std::string>& model_param_keys();

}  // namespace tbcontrol

#endif  // TBCONTROL_SCENARIO_HPP_
