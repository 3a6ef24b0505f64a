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

#ifndef TBCONTROL_INTEGRATOR_HPP_
#define TBCONTROL_INTEGRATOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbcontrol/errors.hpp"
#include "tbcontrol/model.hpp"

namespace tbcontrol {

/// Uniform grid on [t0, t_final] with n_steps intervals.
struct TimeGrid {
  double t0 = 0.0;
  double t_final = 5.0;
  std::size_t n_steps = 5000;

  void validate() const;

  double step() const { return (t_final - t0) / static_cast<double>(n_steps); }
  std::size_t node_count() const { return n_steps + 1; }
  double node_time(std::size_t k) const {
    return k == n_steps ? t_final : t0 + static_cast<double>(k) * step();
  }

  bool operator==(const TimeGrid&) const = default;
};

/// Node-wise solution on a grid. `adjoints` is absent for pure forward runs.
struct Trajectory {
  TimeGrid grid;
  std::vector<StateVec> states;
  std::optional<std::vector<AdjointVec>> adjoints;
  std::vector<ControlPair> controls;
};

/// One classical RK4 step of y' = f(t, y). A negative h steps backward.
template <class V, class F>
V rk4_step(F&& f, double t, const V& y, double h) {
  const V k1 = f(t, y);
  const V k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
  const V k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
  const V k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Linear interpolation of a node series at time t, exact at nodes. Times
/// within 1e-9 steps of a node snap to it. Throws DomainError when t is
/// outside the grid or the length is wrong.
template <class V>
V sample_piecewise_linear(std::span<const V> values, const TimeGrid& grid,
                          double t) {
  if (values.size() != grid.node_count()) {
    throw DomainError("sample_piecewise_linear: series has " +
                      std::to_string(values.size()) + " nodes, grid has " +
                      std::to_string(grid.node_count()));
  }
  const double slack = 1e-9 * grid.step();
  if (!(t >= grid.t0 - slack && t <= grid.t_final + slack)) {
    throw DomainError("sample_piecewise_linear: t = " + std::to_string(t) +
                      " outside [" + std::to_string(grid.t0) + ", " +
                      std::to_string(grid.t_final) + "]");
  }
  const double pos = std::clamp((t - grid.t0) / grid.step(), 0.0,
                                static_cast<double>(grid.n_steps));
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) <= 1e-9) {
    return values[static_cast<std::size_t>(nearest)];
  }
  std::size_t k = static_cast<std::size_t>(std::floor(pos));
  if (k >= grid.n_steps) k = grid.n_steps - 1;
  const double w = pos - static_cast<double>(k);
  return values[k] + w * (values[k + 1] - values[k]);
}

/// Forward RK4 sweep of the state system; node 0 equals x0. Controls at
/// substage times are linearly interpolated. Throws IntegrationBlowup on a
/// non-finite state.
std::vector<StateVec> rk4_forward(const StateVec& x0,
                                  std::span<const ControlPair> controls,
                                  const ModelParams& p, const TimeGrid& grid);

/// Backward RK4 sweep of the costate system from lam_terminal at t_final,
/// reusing the stored forward states.
std::vector<AdjointVec> rk4_backward(const AdjointVec& lam_terminal,
                                     std::span<const StateVec> states,
                                     std::span<const ControlPair> controls,
                                     const ModelParams& p,
                                     const TimeGrid& grid);

/// Composite trapezoid of running_cost over the trajectory nodes.
double quadrature_cost(const Trajectory& traj, const ModelParams& p);

}  // namespace tbcontrol

#endif  // TBCONTROL_INTEGRATOR_HPP_
