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

#include "tbcontrol/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tbcontrol/errors.hpp"

namespace tbcontrol {

namespace {

void require_finite(const StateVec& x, const char* what) {
  if (!x.all_finite()) throw DomainError(std::string(what) + ": non-finite state");
}

void require_finite(const AdjointVec& lam, const char* what) {
  if (!lam.all_finite()) throw DomainError(std::string(what) + ": non-finite costate");
}

void require_finite(const ControlPair& u, const char* what) {
  if (!std::isfinite(u.u1) || !std::isfinite(u.u2)) {
    throw DomainError(std::string(what) + ": non-finite control");
  }
}

}  // namespace

std::optional<ModelParams::Violation> ModelParams::check() const {
  const auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  const auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  const auto open_unit = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };

  struct Rule {
    const char* field;
    bool ok;
    const char* rule;
  };
  const Rule rules[] = {
      {"beta", nonneg(beta), ">= 0"},
      {"mu", nonneg(mu), ">= 0"},
      {"delta", nonneg(delta), ">= 0"},
      {"phi", unit(phi), "in [0, 1]"},
      {"omega", nonneg(omega), ">= 0"},
      {"omega_r", nonneg(omega_r), ">= 0"},
      {"sigma", unit(sigma), "in [0, 1]"},
      {"sigma_r", unit(sigma_r), "in [0, 1]"},
      {"tau0", nonneg(tau0), ">= 0"},
      {"tau1", nonneg(tau1), ">= 0"},
      {"tau2", nonneg(tau2), ">= 0"},
      {"n_total", positive(n_total), "> 0"},
      {"eps1", open_unit(eps1), "in (0, 1)"},
      {"eps2", open_unit(eps2), "in (0, 1)"},
      {"w1", positive(w1), "> 0"},
      {"w2", positive(w2), "> 0"},
      {"horizon", positive(horizon), "> 0"},
  };
  for (const Rule& r : rules) {
    if (!r.ok) return Violation{r.field, r.rule};
  }
  return std::nullopt;
}

void ModelParams::validate() const {
  if (const auto v = check()) {
    throw DomainError("ModelParams." + v->field + " must be " + v->rule);
  }
}

StrategyMask StrategyMask::from_number(int number) {
  switch (number) {
    case 0: return {false, false};
    case 1: return {true, false};
    case 2: return {false, true};
    case 3: return {true, true};
    default:
      throw DomainError("strategy must be 0, 1, 2 or 3, got " + std::to_string(number));
  }
}

int StrategyMask::number() const {
  return (enable_u1 ? 1 : 0) + (enable_u2 ? 2 : 0);
}

std::string StrategyMask::label() const {
  const int n = number();
  return n == 0 ? std::string("uncontrolled") : "strategy" + std::to_string(n);
}

StateVec state_rhs(const StateVec& x, const ControlPair& u,
                   const ModelParams& p) {
  require_finite(x, "state_rhs");
  require_finite(u, "state_rhs");

  const double force = p.beta / p.n_total * x.i();  // infection pressure
  const double treat_i = p.tau0 + p.eps1 * u.u1;
  const double treat_l2 = p.tau2 + p.eps2 * u.u2;

  return {
      p.mu * p.n_total - force * x.s() - p.mu * x.s(),
      force * (x.s() + p.sigma * x.l2() + p.sigma_r * x.r()) -
          (p.delta + p.tau1 + p.mu) * x.l1(),
      p.phi * p.delta * x.l1() + p.omega * x.l2() + p.omega_r * x.r() -
          (treat_i + p.mu) * x.i(),
      (1.0 - p.phi) * p.delta * x.l1() - p.sigma * force * x.l2() -
          (p.omega + treat_l2 + p.mu) * x.l2(),
      treat_i * x.i() + p.tau1 * x.l1() + treat_l2 * x.l2() -
          p.sigma_r * force * x.r() - (p.omega_r + p.mu) * x.r(),
  };
}

AdjointVec adjoint_rhs(const AdjointVec& lam, const StateVec& x,
                       const ControlPair& u, const ModelParams& p) {
  require_finite(lam, "adjoint_rhs");
  require_finite(x, "adjoint_rhs");
  require_finite(u, "adjoint_rhs");

  const double b = p.beta / p.n_total;
  const double force = b * x.i();
  const double treat_i = p.tau0 + p.eps1 * u.u1;
  const double treat_l2 = p.tau2 + p.eps2 * u.u2;

  return {
      lam.lam1() * (force + p.mu) - lam.lam2() * force,
      lam.lam2() * (p.delta + p.tau1 + p.mu) - lam.lam3() * p.phi * p.delta -
          lam.lam4() * (1.0 - p.phi) * p.delta - lam.lam5() * p.tau1,
      -1.0 + lam.lam1() * b * x.s() -
          lam.lam2() * b * (x.s() + p.sigma * x.l2() + p.sigma_r * x.r()) +
          lam.lam3() * (treat_i + p.mu) + lam.lam4() * p.sigma * b * x.l2() -
          lam.lam5() * (treat_i - p.sigma_r * b * x.r()),
      -1.0 - lam.lam2() * p.sigma * force - lam.lam3() * p.omega +
          lam.lam4() * (p.sigma * force + p.omega + treat_l2 + p.mu) -
          lam.lam5() * treat_l2,
      -lam.lam2() * p.sigma_r * force - lam.lam3() * p.omega_r +
          lam.lam5() * (p.sigma_r * force + p.omega_r + p.mu),
  };
}

double running_cost(const StateVec& x, const ControlPair& u,
                    const ModelParams& p) {
  return x.i() + x.l2() + 0.5 * p.w1 * u.u1 * u.u1 + 0.5 * p.w2 * u.u2 * u.u2;
}

double hamiltonian(const StateVec& x, const AdjointVec& lam,
                   const ControlPair& u, const ModelParams& p) {
  const StateVec f = state_rhs(x, u, p);
  double h = running_cost(x, u, p);
  for (std::size_t k = 0; k < StateVec::kSize; ++k) h += lam[k] * f[k];
  return h;
}

ControlPair characterize_controls(const StateVec& x, const AdjointVec& lam,
                                  const ModelParams& p,
                                  const StrategyMask& mask) {
  ControlPair u;
  if (mask.enable_u1) {
    const double raw = p.eps1 * x.i() * (lam.lam3() - lam.lam5()) / p.w1;
    u.u1 = std::min(std::max(0.0, raw), 1.0);
  }
  if (mask.enable_u2) {
    const double raw = p.eps2 * x.l2() * (lam.lam4() - lam.lam5()) / p.w2;
    u.u2 = std::min(std::max(0.0, raw), 1.0);
  }
  return u;
}

double basic_reproduction_number(const ModelParams& p) {
  if (!(p.mu > 0.0)) {
    throw DomainError("basic_reproduction_number: mu must be > 0");
  }
  const double num = p.delta * (p.omega + p.phi * p.mu) * (p.omega_r + p.mu);
  const double den = p.mu * (p.omega_r + p.tau0 + p.mu) * (p.delta + p.mu) *
                     (p.omega + p.mu);
  return p.beta * num / den;
}

}  // namespace tbcontrol
