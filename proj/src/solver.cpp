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

#include "tbcontrol/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <future>
#include <string>

#include "tbcontrol/errors.hpp"

namespace tbcontrol {

namespace {

// Largest absolute change and largest absolute new value of one channel.
struct ChannelDelta {
  double change = 0.0;
  double scale = 0.0;

  void add(double prev, double next) {
    change = std::max(change, std::abs(next - prev));
    scale = std::max(scale, std::abs(next));
  }
  bool within(double tol) const { return change <= tol * std::max(1.0, scale); }
};

SolveDiagnostics diagnose(std::span<const StateVec> states, double n_total) {
  SolveDiagnostics d;
  d.min_state_component = states.front()[0];
  for (const StateVec& x : states) {
    for (double v : x.values()) {
      d.min_state_component = std::min(d.min_state_component, v);
    }
    d.max_conservation_drift =
        std::max(d.max_conservation_drift, std::abs(x.sum() - n_total) / n_total);
  }
  return d;
}

SolveReport finish(Trajectory traj, std::size_t iterations, bool converged,
                   const ModelParams& p) {
  SolveReport report;
  report.objective = quadrature_cost(traj, p);
  const StateVec& last = traj.states.back();
  report.terminal_infected_plus_latent = last.i() + last.l2();
  report.diagnostics = diagnose(traj.states, p.n_total);
  report.iterations = iterations;
  report.converged = converged;
  report.trajectory = std::move(traj);
  return report;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(relaxation >= 0.0 && relaxation < 1.0)) {
    throw DomainError("SolverOptions.relaxation must be in [0, 1)");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw DomainError("SolverOptions.tol must be > 0");
  }
  if (max_iters < 1) throw DomainError("SolverOptions.max_iters must be >= 1");
  grid.validate();
}

std::vector<ControlPair> update_controls(std::span<const ControlPair> prev,
                                         std::span<const ControlPair> characterized,
                                         double relaxation) {
  if (prev.size() != characterized.size()) {
    throw DomainError("update_controls: series lengths differ (" +
                      std::to_string(prev.size()) + " vs " +
                      std::to_string(characterized.size()) + ")");
  }
  if (!(relaxation >= 0.0 && relaxation < 1.0)) {
    throw DomainError("update_controls: relaxation must be in [0, 1)");
  }
  std::vector<ControlPair> out(prev.size());
  for (std::size_t k = 0; k < prev.size(); ++k) {
    out[k] = relaxation * prev[k] + (1.0 - relaxation) * characterized[k];
    // Rounding can nudge a convex combination of in-range values past 1.
    out[k].u1 = std::clamp(out[k].u1, 0.0, 1.0);
    out[k].u2 = std::clamp(out[k].u2, 0.0, 1.0);
  }
  return out;
}

bool has_converged(std::span<const ControlPair> prev_controls,
                   std::span<const ControlPair> new_controls,
                   std::span<const StateVec> prev_states,
                   std::span<const StateVec> new_states, double tol) {
  if (prev_controls.size() != new_controls.size() ||
      prev_states.size() != new_states.size()) {
    throw DomainError("has_converged: series lengths differ");
  }
  ChannelDelta u1, u2;
  for (std::size_t k = 0; k < new_controls.size(); ++k) {
    u1.add(prev_controls[k].u1, new_controls[k].u1);
    u2.add(prev_controls[k].u2, new_controls[k].u2);
  }
  if (!u1.within(tol) || !u2.within(tol)) return false;

  std::array<ChannelDelta, StateVec::kSize> xs;
  for (std::size_t k = 0; k < new_states.size(); ++k) {
    for (std::size_t c = 0; c < StateVec::kSize; ++c) {
      xs[c].add(prev_states[k][c], new_states[k][c]);
    }
  }
  return std::all_of(xs.begin(), xs.end(),
                     [tol](const ChannelDelta& d) { return d.within(tol); });
}

SolveReport solve(const StateVec& x0, const ModelParams& p,
                  const StrategyMask& mask, const SolverOptions& opts) {
  p.validate();
  opts.validate();
  if (opts.grid.t0 != 0.0 || std::abs(opts.grid.t_final - p.horizon) >
                                 1e-12 * std::max(1.0, p.horizon)) {
    throw DomainError("solve: grid must span [0, horizon]");
  }
  if (!x0.all_finite()) throw DomainError("solve: non-finite initial state");
  for (double v : x0.values()) {
    if (v < 0.0) throw DomainError("solve: initial state has a negative component");
  }
  if (std::abs(x0.sum() - p.n_total) > 1e-9 * p.n_total) {
    throw DomainError("solve: initial state must sum to n_total");
  }

  const TimeGrid& grid = opts.grid;
  const AdjointVec lam_terminal{};

  Trajectory traj{grid, {}, std::vector<AdjointVec>{},
                  std::vector<ControlPair>(grid.node_count())};

  if (!mask.any()) {
    traj.states = rk4_forward(x0, traj.controls, p, grid);
    traj.adjoints = rk4_backward(lam_terminal, traj.states, traj.controls, p, grid);
    return finish(std::move(traj), 1, true, p);
  }

  std::vector<StateVec> prev_states;
  for (std::size_t iter = 1;; ++iter) {
    traj.states = rk4_forward(x0, traj.controls, p, grid);
    traj.adjoints = rk4_backward(lam_terminal, traj.states, traj.controls, p, grid);

    std::vector<ControlPair> characterized(grid.node_count());
    for (std::size_t k = 0; k < characterized.size(); ++k) {
      characterized[k] =
          characterize_controls(traj.states[k], (*traj.adjoints)[k], p, mask);
    }
    std::vector<ControlPair> next =
        update_controls(traj.controls, characterized, opts.relaxation);

    const bool converged =
        !prev_states.empty() &&
        has_converged(traj.controls, next, prev_states, traj.states, opts.tol);
    if (converged || iter == opts.max_iters) {
      return finish(std::move(traj), iter, converged, p);
    }

    prev_states = std::move(traj.states);
    traj.controls = std::move(next);
  }
}

std::array<StrategyOutcome, 4> compare_strategies(const StateVec& x0,
                                                  const ModelParams& p,
                                                  const SolverOptions& opts,
                                                  Execution execution) {
  std::array<StrategyOutcome, 4> rows;
  for (int n = 0; n < 4; ++n) rows[n].mask = StrategyMask::from_number(n);

  const auto run = [&](StrategyOutcome& row) {
    try {
      row.report = solve(x0, p, row.mask, opts);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  if (execution == Execution::kSerial) {
    for (auto& row : rows) run(row);
  } else {
    std::array<std::future<void>, 4> jobs;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      jobs[k] = std::async(std::launch::async, run, std::ref(rows[k]));
    }
    for (auto& job : jobs) job.get();
  }
  return rows;
}

}  // namespace tbcontrol
