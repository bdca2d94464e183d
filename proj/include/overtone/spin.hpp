/* Copyright (c) 2026 The Overtone Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace overtone {

using cdouble = std::complex<double>;
// Basis order |+1>, |0>, |-1>.
using Operator3 = Eigen::Matrix3cd;
using State3 = Eigen::Vector3cd;

struct SpinOperators {
  Operator3 sx, sy, sz;
  std::array<Operator3, 5> t2;  // q = -2..2 at index q + 2

  const Operator3& t2q(int q) const { return t2.at(static_cast<std::size_t>(q + 2)); }
};

const SpinOperators& spin1_operators();

Operator3 commutator(const Operator3& a, const Operator3& b);
bool is_hermitian(const Operator3& h, double rel_tol = 1e-12);
bool is_unitary(const Operator3& u, double tol = 1e-10);

// Index of a Zeeman label in the fixed basis.
int basis_index(int label);

struct EigenSystem {
  Eigen::Vector3d values;  // ordered by label +1, 0, -1
  Operator3 vectors;       // column k carries label labels[k]
  std::array<int, 3> labels{1, 0, -1};

  double value(int label) const { return values(basis_index(label)); }
  State3 vector(int label) const { return vectors.col(basis_index(label)); }
};

EigenSystem eig_adiabatic(const Operator3& h);

// exp(-i h dt) for hermitian h.
Operator3 unitary_step(const Operator3& h, double dt);

struct DriveTerm {
  Operator3 op;
  double amplitude = 0.0;  // rad/s
  double omega = 0.0;      // rad/s
  double phase = 0.0;
};

// h(t) = h0 + sum_k amplitude_k cos(omega_k t + phase_k) op_k
class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(Operator3 h0, std::vector<DriveTerm> drives = {});

  Operator3 at(double t) const;
  Operator3 step_average(double t0, double t1) const;
  // Largest angular frequency present, converted to Hz.
  double max_frequency_hz() const;

  const Operator3& static_part() const { return h0_; }
  const std::vector<DriveTerm>& drives() const { return drives_; }

 private:
  Operator3 h0_;
  std::vector<DriveTerm> drives_;
};

std::vector<State3> propagate(const TimeDependentHamiltonian& h, const State3& psi0,
                              std::span<const double> t_grid, double dt_max);

// Product of step propagators over [t0, t0 + duration] with `steps` equal steps.
Operator3 interval_propagator(const TimeDependentHamiltonian& h, double t0,
                              double duration, std::size_t steps);

Operator3 matrix_power(const Operator3& u, std::size_t n);

struct TimeTrace {
  std::vector<double> times;
  std::vector<double> values;

  static TimeTrace uniform(double t0, double dt, std::vector<double> values);
  std::size_t size() const { return times.size(); }
  double dt() const;
  void validate() const;
};

}  // namespace overtone
