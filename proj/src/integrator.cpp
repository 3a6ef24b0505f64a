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

#include "tbcontrol/integrator.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace tbcontrol {

namespace {

void check_length(std::size_t got, const TimeGrid& grid, const char* what) {
  if (got != grid.node_count()) {
    throw DomainError(std::string(what) + ": expected " +
                      std::to_string(grid.node_count()) + " nodes, got " +
                      std::to_string(got));
  }
}

[[noreturn]] void blowup(const char* sweep, std::size_t node,
                         const TimeGrid& grid) {
  std::ostringstream msg;
  msg << sweep << ": non-finite value at node " << node << " (t = "
      << grid.node_time(node) << ")";
  throw IntegrationBlowup(node, grid.node_time(node), msg.str());
}

}  // namespace

void TimeGrid::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t_final) || !(t_final > t0)) {
    throw DomainError("TimeGrid: t_final must be finite and > t0");
  }
  if (n_steps < 2) throw DomainError("TimeGrid: n_steps must be >= 2");
}

std::vector<StateVec> rk4_forward(const StateVec& x0,
                                  std::span<const ControlPair> controls,
                                  const ModelParams& p, const TimeGrid& grid) {
  grid.validate();
  check_length(controls.size(), grid, "rk4_forward controls");
  if (!x0.all_finite()) blowup("rk4_forward", 0, grid);

  const auto rhs = [&](double t, const StateVec& x) {
    return state_rhs(x, sample_piecewise_linear(controls, grid, t), p);
  };

  std::vector<StateVec> out(grid.node_count());
  out[0] = x0;
  const double h = grid.step();
  for (std::size_t k = 0; k < grid.n_steps; ++k) {
    try {
      out[k + 1] = rk4_step(rhs, grid.node_time(k), out[k], h);
    } catch (const DomainError&) {
      blowup("rk4_forward", k + 1, grid);
    }
    if (!out[k + 1].all_finite()) blowup("rk4_forward", k + 1, grid);
  }
  return out;
}

std::vector<AdjointVec> rk4_backward(const AdjointVec& lam_terminal,
                                     std::span<const StateVec> states,
                                     std::span<const ControlPair> controls,
                                     const ModelParams& p,
                                     const TimeGrid& grid) {
  grid.validate();
  check_length(states.size(), grid, "rk4_backward states");
  check_length(controls.size(), grid, "rk4_backward controls");
  if (!lam_terminal.all_finite()) blowup("rk4_backward", grid.n_steps, grid);

  const auto rhs = [&](double t, const AdjointVec& lam) {
    return adjoint_rhs(lam, sample_piecewise_linear(states, grid, t),
                       sample_piecewise_linear(controls, grid, t), p);
  };

  std::vector<AdjointVec> out(grid.node_count());
  out[grid.n_steps] = lam_terminal;
  const double h = grid.step();
  for (std::size_t k = grid.n_steps; k > 0; --k) {
    try {
      out[k - 1] = rk4_step(rhs, grid.node_time(k), out[k], -h);
    } catch (const DomainError&) {
      blowup("rk4_backward", k - 1, grid);
    }
    if (!out[k - 1].all_finite()) blowup("rk4_backward", k - 1, grid);
  }
  return out;
}

double quadrature_cost(const Trajectory& traj, const ModelParams& p) {
  const TimeGrid& grid = traj.grid;
  grid.validate();
  check_length(traj.states.size(), grid, "quadrature_cost states");
  check_length(traj.controls.size(), grid, "quadrature_cost controls");

  const std::size_t n = grid.n_steps;
  double interior = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    interior += running_cost(traj.states[k], traj.controls[k], p);
  }
  const double ends = running_cost(traj.states[0], traj.controls[0], p) +
                      running_cost(traj.states[n], traj.controls[n], p);
  return grid.step() * (interior + 0.5 * ends);
}

}  // namespace tbcontrol
