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

#ifndef TBCONTROL_SOLVER_HPP_
#define TBCONTROL_SOLVER_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbcontrol/integrator.hpp"
#include "tbcontrol/model.hpp"

namespace tbcontrol {

struct SolverOptions {
  double relaxation = 0.5;   ///< weight kept on the previous control iterate
  double tol = 1e-13;        ///< mixed absolute/relative convergence tolerance
  std::size_t max_iters = 500;
  TimeGrid grid;

  void validate() const;

  bool operator==(const SolverOptions&) const = default;
};

struct SolveDiagnostics {
  double min_state_component = 0.0;  ///< most negative compartment seen (individuals)
  double max_conservation_drift = 0.0;  ///< max_k |sum x_k - N| / N
};

struct SolveReport {
  Trajectory trajectory;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double terminal_infected_plus_latent = 0.0;
  SolveDiagnostics diagnostics;
};

/// Forward-backward sweep. Starting from zero controls, repeats
///   forward sweep -> backward sweep from lambda(T) = 0 ->
///   characterize -> relax
/// until has_converged() or max_iters. The reported trajectory holds the
/// last control iterate with the states and costates swept from it.
/// Non-convergence is reported through `converged`, not thrown.
SolveReport solve(const StateVec& x0, const ModelParams& p,
                  const StrategyMask& mask, const SolverOptions& opts);

/// relaxation * prev + (1 - relaxation) * characterized, node by node.
std::vector<ControlPair> update_controls(std::span<const ControlPair> prev,
                                         std::span<const ControlPair> characterized,
                                         double relaxation);

/// True iff every control and state channel satisfies
/// max_k |new_k - prev_k| <= tol * max(1, max_k |new_k|). Inclusive.
bool has_converged(std::span<const ControlPair> prev_controls,
                   std::span<const ControlPair> new_controls,
                   std::span<const StateVec> prev_states,
                   std::span<const StateVec> new_states, double tol);

/// One row of a strategy comparison. Exactly one of report / error is set.
struct StrategyOutcome {
  StrategyMask mask;
  std::optional<SolveReport> report;
  std::string error;

  std::string label() const { return mask.label(); }
  bool ok() const { return report.has_value(); }
};

enum class Execution { kSerial, kParallel };

/// Uncontrolled, Strategy 1, Strategy 2, Strategy 3 on identical grids.
/// A failing row carries its error message; the other rows still run.
std::array<StrategyOutcome, 4> compare_strategies(
    const StateVec& x0, const ModelParams& p, const SolverOptions& opts,
    Execution execution = Execution::kParallel);

}  // namespace tbcontrol

#endif  // TBCONTROL_SOLVER_HPP_
