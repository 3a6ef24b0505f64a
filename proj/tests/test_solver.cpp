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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tbcontrol/errors.hpp"
#include "tbcontrol/scenario.hpp"
#include "tbcontrol/solver.hpp"

using namespace tbcontrol;

namespace {

SolverOptions default_options(const ModelParams& p, std::size_t n_steps = 5000) {
  SolverOptions o;
  o.grid = TimeGrid{0.0, p.horizon, n_steps};
  return o;
}

// Length of the initial stretch where u1 sits at its upper bound.
double saturated_prefix(const SolveReport& r) {
  const auto& u = r.trajectory.controls;
  std::size_t k = 0;
  while (k < u.size() && u[k].u1 >= 1.0 - 1e-9) ++k;
  return k == 0 ? 0.0 : r.trajectory.grid.node_time(k - 1);
}

}  // namespace

TEST_CASE("update_controls") {
  const std::vector<ControlPair> zeros(4), ones(4, ControlPair{1, 1});
  const std::vector<ControlPair> mixed{{0.1, 0.9}, {0.5, 0.5}, {1, 0}, {0.3, 0.2}};
  SUBCASE("relaxation 0 returns the characterized series") {
    CHECK(update_controls(zeros, mixed, 0.0) == mixed);
  }
  SUBCASE("equal inputs are a fixed point") {
    const auto out = update_controls(mixed, mixed, 0.37);
    for (std::size_t k = 0; k < out.size(); ++k) {
      CHECK(out[k].u1 == doctest::Approx(mixed[k].u1).epsilon(1e-15));
      CHECK(out[k].u2 == doctest::Approx(mixed[k].u2).epsilon(1e-15));
    }
  }
  SUBCASE("midpoint") {
    for (const ControlPair& u : update_controls(zeros, ones, 0.5)) {
      CHECK(u == ControlPair{0.5, 0.5});
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(update_controls(zeros, std::vector<ControlPair>(3), 0.5), DomainError);
    CHECK_THROWS_AS(update_controls(zeros, ones, 1.0), DomainError);
  }
}

TEST_CASE("has_converged") {
  const std::vector<ControlPair> u{{0.2, 0.4}, {0.6, 0.0}};
  const std::vector<StateVec> x{StateVec{10, 20, 30, 40, 50}, StateVec{1, 2, 3, 4, 5}};
  const double tol = 1e-3;

  CHECK(has_converged(u, u, x, x, tol));
  CHECK(has_converged(u, u, x, x, 1e-300));

  SUBCASE("control node off by twice the threshold") {
    auto moved = u;
    moved[1].u1 += 2.0 * tol;
    CHECK_FALSE(has_converged(u, moved, x, x, tol));
  }
  SUBCASE("state node off by twice the scaled threshold") {
    auto moved = x;
    moved[0][4] += 2.0 * tol * 50.0;
    CHECK_FALSE(has_converged(u, u, x, moved, tol));
  }
  SUBCASE("change exactly at the threshold passes") {
    // Power-of-two values keep the arithmetic exact.
    const std::vector<ControlPair> a{{0.5, 0.0}};
    const std::vector<ControlPair> b{{0.5 + 0.125, 0.0}};
    const std::vector<StateVec> s{StateVec{64, 0, 0, 0, 0}};
    const std::vector<StateVec> s2{StateVec{64 + 8, 0, 0, 0, 0}};
    CHECK(has_converged(a, b, s, s, 0.125));
    CHECK(has_converged(a, a, s, s2, 8.0 / 72.0));
    CHECK_FALSE(has_converged(a, b, s, s, 0.125 * (1.0 - 1e-15)));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(has_converged(u, std::vector<ControlPair>(1), x, x, tol), DomainError);
  }
}

TEST_CASE("solve: uncontrolled run is a single forward sweep") {
  const ModelParams p;
  const SolveReport r =
      solve(oracle::case1_state(), p, StrategyMask::uncontrolled(), default_options(p));
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  for (const ControlPair& u : r.trajectory.controls) CHECK(u == ControlPair{});
  for (std::size_t c = 0; c < 5; ++c) {
    CHECK(r.trajectory.states.back()[c] ==
          doctest::Approx(oracle::kUncontrolledCase1AtT5[c]).epsilon(1e-6));
  }
  CHECK(r.objective == doctest::Approx(38941.78365992028).epsilon(1e-6));
  CHECK(r.terminal_infected_plus_latent ==
        doctest::Approx(oracle::kUncontrolledCase1AtT5[2] + oracle::kUncontrolledCase1AtT5[3])
            .epsilon(1e-6));
  REQUIRE(r.trajectory.adjoints);
  CHECK(r.trajectory.adjoints->back() == AdjointVec{});
}

TEST_CASE("solve: Strategy 3 fixed point") {
  const ModelParams p;
  const SolverOptions opts = default_options(p);
  const SolveReport r = solve(oracle::case1_state(), p, StrategyMask{}, opts);
  REQUIRE(r.converged);
  CHECK(r.iterations <= opts.max_iters);
  const auto& traj = r.trajectory;
  REQUIRE(traj.adjoints);

  SUBCASE("transversality and finiteness") {
    CHECK(traj.adjoints->back() == AdjointVec{});
    for (const AdjointVec& lam : *traj.adjoints) REQUIRE(lam.all_finite());
  }
  SUBCASE("objective is the quadrature of the reported trajectory") {
    CHECK(r.objective == quadrature_cost(traj, p));
  }
  SUBCASE("controls match the characterization at every node") {
    for (std::size_t k = 0; k < traj.controls.size(); ++k) {
      const ControlPair c = characterize_controls(traj.states[k], (*traj.adjoints)[k], p, {});
      REQUIRE(std::abs(c.u1 - traj.controls[k].u1) <= 1e-9);
      REQUIRE(std::abs(c.u2 - traj.controls[k].u2) <= 1e-9);
    }
  }
  SUBCASE("one more sweep leaves the controls in place") {
    const auto again = rk4_forward(traj.states.front(), traj.controls, p, traj.grid);
    const auto lam = rk4_backward(AdjointVec{}, again, traj.controls, p, traj.grid);
    std::vector<ControlPair> chars(again.size());
    for (std::size_t k = 0; k < chars.size(); ++k) {
      chars[k] = characterize_controls(again[k], lam[k], p, {});
    }
    const auto next = update_controls(traj.controls, chars, opts.relaxation);
    for (std::size_t k = 0; k < next.size(); ++k) {
      REQUIRE(std::abs(next[k].u1 - traj.controls[k].u1) <= opts.tol);
      REQUIRE(std::abs(next[k].u2 - traj.controls[k].u2) <= opts.tol);
    }
  }
  SUBCASE("diagnostics") {
    CHECK(r.diagnostics.max_conservation_drift <= 1e-6);
    CHECK(r.diagnostics.min_state_component >= 0.0);
  }
  SUBCASE("controls beat doing nothing") {
    const SolveReport none =
        solve(oracle::case1_state(), p, StrategyMask::uncontrolled(), opts);
    CHECK(r.objective < none.objective);
  }
}

TEST_CASE("solve: max_iters cap reports non-convergence") {
  const ModelParams p;
  SolverOptions opts = default_options(p, 500);
  opts.max_iters = 3;
  const SolveReport r = solve(oracle::case1_state(), p, StrategyMask{}, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  for (const ControlPair& u : r.trajectory.controls) REQUIRE(u.in_bounds());
}

TEST_CASE("solve: input validation") {
  const ModelParams p;
  const SolverOptions opts = default_options(p, 100);
  StateVec short_pop = oracle::case1_state();
  short_pop[0] -= 3000.0;
  CHECK_THROWS_AS(solve(short_pop, p, {}, opts), DomainError);

  SolverOptions bad = opts;
  bad.relaxation = 1.0;
  CHECK_THROWS_AS(solve(oracle::case1_state(), p, {}, bad), DomainError);

  bad = opts;
  bad.grid.t_final = 4.0;
  CHECK_THROWS_AS(solve(oracle::case1_state(), p, {}, bad), DomainError);
}

TEST_CASE("compare_strategies: rows, ordering and determinism") {
  const ModelParams p;
  const SolverOptions opts = default_options(p, 2000);
  const auto parallel = compare_strategies(oracle::case1_state(), p, opts, Execution::kParallel);
  const auto serial = compare_strategies(oracle::case1_state(), p, opts, Execution::kSerial);

  for (int n = 0; n < 4; ++n) {
    REQUIRE(parallel[n].ok());
    CHECK(parallel[n].mask.number() == n);
    CHECK(parallel[n].report->objective == serial[n].report->objective);
    CHECK(parallel[n].report->iterations == serial[n].report->iterations);
  }
  const double j0 = parallel[0].report->objective, j1 = parallel[1].report->objective,
               j2 = parallel[2].report->objective, j3 = parallel[3].report->objective;
  CHECK(j3 < j2);
  CHECK(j2 < j1);
  CHECK(j1 < j0);
  CHECK(j3 <= std::min(j1, j2));
}

TEST_CASE("compare_strategies: a failing row does not stop the others") {
  const ModelParams p;
  SolverOptions opts = default_options(p, 200);
  StateVec x0 = oracle::case1_state();
  x0[4] = -x0[4];  // negative R: every solve rejects it
  const auto rows = compare_strategies(x0, p, opts);
  for (const auto& row : rows) {
    CHECK_FALSE(row.ok());
    CHECK_FALSE(row.error.empty());
  }
}

TEST_CASE("compare_strategies: no transmission leaves S untouched by controls") {
  ModelParams p;
  p.beta = 0.0;
  const auto rows = compare_strategies(oracle::case1_state(), p, default_options(p, 1000));
  const auto& s_ref = rows[0].report->trajectory.states;
  for (int n = 1; n < 4; ++n) {
    REQUIRE(rows[n].ok());
    const auto& states = rows[n].report->trajectory.states;
    for (std::size_t k = 0; k < states.size(); ++k) {
      REQUIRE(states[k].s() == s_ref[k].s());
      REQUIRE(states[k].l1() == s_ref[k].l1());
    }
  }
  // u2 alone moves L2 into R.
  const auto& s2 = rows[2].report->trajectory.states;
  CHECK(s2.back().l2() < s_ref.back().l2());
  CHECK(s2.back().r() > s_ref.back().r());
}

TEST_CASE("weight sensitivity: a cheaper u1 stays saturated longer") {
  ModelParams costly;
  ModelParams cheap;
  cheap.w1 = 50.0;
  const SolveReport a = solve(oracle::case1_state(), costly, {}, default_options(costly));
  const SolveReport b = solve(oracle::case1_state(), cheap, {}, default_options(cheap));
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(saturated_prefix(a) > 0.0);
  CHECK(saturated_prefix(a) < saturated_prefix(b));
}

TEST_CASE("beta sensitivity: lower transmission, fewer terminal cases") {
  double previous = 0.0;
  for (double beta : {25.0, 50.0, 75.0, 100.0}) {
    ModelParams p;
    p.beta = beta;
    const SolveReport r = solve(oracle::case1_state(), p, {}, default_options(p, 2000));
    REQUIRE(r.converged);
    CHECK(r.terminal_infected_plus_latent > previous);
    previous = r.terminal_infected_plus_latent;
  }
}

TEST_CASE("objective dominance holds for Case 2 as well") {
  const ModelParams p;
  const auto rows =
      compare_strategies(case_initial_state(2, p.n_total), p, default_options(p, 2000));
  for (const auto& row : rows) REQUIRE(row.ok());
  const double j3 = rows[3].report->objective;
  CHECK(j3 <= std::min(rows[1].report->objective, rows[2].report->objective));
  CHECK(std::min(rows[1].report->objective, rows[2].report->objective) <=
        rows[0].report->objective);
}
