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

#ifndef TBCONTROL_MODEL_HPP_
#define TBCONTROL_MODEL_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

namespace tbcontrol {

/// Rate constants, efficacies and weights of the controlled TB model.
/// Member defaults are the Angola calibration (N = 30000, T = 5 yr).
/// Rates are per year.
struct ModelParams {
  double beta = 100.0;        ///< transmission coefficient
  double mu = 1.0 / 52.0;     ///< birth and death rate
  double delta = 12.0;        ///< exit rate from early latency L1
  double phi = 0.05;          ///< fraction of L1 exits progressing to I
  double omega = 0.0002;      ///< endogenous reactivation of L2
  double omega_r = 0.00002;   ///< endogenous reactivation of R
  double sigma = 0.25;        ///< reinfection reduction factor for L2
  double sigma_r = 0.25;      ///< reinfection reduction factor for R
  double tau0 = 2.0;          ///< treatment recovery rate of I
  double tau1 = 2.0;          ///< treatment recovery rate of L1
  double tau2 = 1.0;          ///< treatment recovery rate of L2
  double n_total = 30000.0;   ///< total population
  double eps1 = 0.5;          ///< efficacy of u1
  double eps2 = 0.5;          ///< efficacy of u2
  double w1 = 500.0;          ///< cost weight of u1
  double w2 = 50.0;           ///< cost weight of u2
  double horizon = 5.0;       ///< final time T in years

  struct Violation {
    std::string field;
    std::string rule;
  };

  /// First field breaking its admissible range, if any.
  std::optional<Violation> check() const;
  /// Throws DomainError naming the first offending field.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Fixed-size vector of the five compartments, shared by states and
/// costates. Derived supplies named accessors; arithmetic stays in Derived.
template <class Derived>
class Vec5 {
 public:
  static constexpr std::size_t kSize = 5;

  constexpr Vec5() = default;
  constexpr Vec5(double a, double b, double c, double d, double e)
      : v_{a, b, c, d, e} {}
  constexpr explicit Vec5(const std::array<double, kSize>& v) : v_(v) {}

  constexpr double& operator[](std::size_t k) { return v_[k]; }
  constexpr double operator[](std::size_t k) const { return v_[k]; }
  constexpr const std::array<double, kSize>& values() const { return v_; }

  constexpr double sum() const {
    return v_[0] + v_[1] + v_[2] + v_[3] + v_[4];
  }
  bool all_finite() const {
    for (double x : v_) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

  friend constexpr Derived operator+(const Derived& a, const Derived& b) {
    Derived out;
    for (std::size_t k = 0; k < kSize; ++k) out[k] = a[k] + b[k];
    return out;
  }
  friend constexpr Derived operator-(const Derived& a, const Derived& b) {
    Derived out;
    for (std::size_t k = 0; k < kSize; ++k) out[k] = a[k] - b[k];
    return out;
  }
  friend constexpr Derived operator*(double s, const Derived& a) {
    Derived out;
    for (std::size_t k = 0; k < kSize; ++k) out[k] = s * a[k];
    return out;
  }

  constexpr bool operator==(const Vec5&) const = default;

 private:
  std::array<double, kSize> v_{};
};

/// Compartment occupancies (S, L1, I, L2, R) in individuals. Also used as
/// the type of the state derivative.
class StateVec : public Vec5<StateVec> {
 public:
  using Vec5::Vec5;

  constexpr double s() const { return (*this)[0]; }
  constexpr double l1() const { return (*this)[1]; }
  constexpr double i() const { return (*this)[2]; }
  constexpr double l2() const { return (*this)[3]; }
  constexpr double r() const { return (*this)[4]; }
};

/// Costates (lambda1..lambda5), marginal cost per individual.
class AdjointVec : public Vec5<AdjointVec> {
 public:
  using Vec5::Vec5;

  constexpr double lam1() const { return (*this)[0]; }
  constexpr double lam2() const { return (*this)[1]; }
  constexpr double lam3() const { return (*this)[2]; }
  constexpr double lam4() const { return (*this)[3]; }
  constexpr double lam5() const { return (*this)[4]; }
};

/// u1: effort keeping active cases on treatment. u2: fraction of L2
/// treated. Admissible values lie in [0, 1].
struct ControlPair {
  double u1 = 0.0;
  double u2 = 0.0;

  bool in_bounds() const { return u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0; }

  friend constexpr ControlPair operator+(ControlPair a, ControlPair b) {
    return {a.u1 + b.u1, a.u2 + b.u2};
  }
  friend constexpr ControlPair operator-(ControlPair a, ControlPair b) {
    return {a.u1 - b.u1, a.u2 - b.u2};
  }
  friend constexpr ControlPair operator*(double s, ControlPair a) {
    return {s * a.u1, s * a.u2};
  }
  constexpr bool operator==(const ControlPair&) const = default;
};

/// Which controls are active. Strategy 1 = u1 only, 2 = u2 only, 3 = both,
/// 0 = uncontrolled.
struct StrategyMask {
  bool enable_u1 = true;
  bool enable_u2 = true;

  static constexpr StrategyMask uncontrolled() { return {false, false}; }
  /// Throws DomainError unless number is 0..3.
  static StrategyMask from_number(int number);

  constexpr bool any() const { return enable_u1 || enable_u2; }
  int number() const;
  /// "uncontrolled", "strategy1", "strategy2" or "strategy3".
  std::string label() const;

  constexpr bool operator==(const StrategyMask&) const = default;
};

/// Right-hand side of the controlled five-compartment system.
/// Components sum to mu*N - mu*(S + L1 + I + L2 + R).
StateVec state_rhs(const StateVec& x, const ControlPair& u,
                   const ModelParams& p);

/// Costate derivative, lambda_k' = -dH/dx_k, including the -1 sources of
/// the I and L2 equations.
AdjointVec adjoint_rhs(const AdjointVec& lam, const StateVec& x,
                       const ControlPair& u, const ModelParams& p);

/// H = I + L2 + W1/2 u1^2 + W2/2 u2^2 + sum_k lambda_k f_k(x, u).
double hamiltonian(const StateVec& x, const AdjointVec& lam,
                   const ControlPair& u, const ModelParams& p);

/// Pointwise minimizer of H over [0,1]^2; disabled controls are zero.
ControlPair characterize_controls(const StateVec& x, const AdjointVec& lam,
                                  const ModelParams& p,
                                  const StrategyMask& mask);

/// Integrand of the objective: I + L2 + W1/2 u1^2 + W2/2 u2^2.
double running_cost(const StateVec& x, const ControlPair& u,
                    const ModelParams& p);

/// R0 of the uncontrolled system. Throws DomainError when mu <= 0.
double basic_reproduction_number(const ModelParams& p);

}  // namespace tbcontrol

#endif  // TBCONTROL_MODEL_HPP_
