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

#include "overtone/spin.hpp"
#include "overtone/units.hpp"
#include "overtone/zfs.hpp"

namespace overtone {

struct FieldContext {
  double b0 = 0.0;        // tesla
  double b1 = 0.0;        // tesla
  double chi = kPi / 2;   // radians
  double omega_mw = 0.0;  // rad/s
  double gamma_e = kGammaElectron;

  double omega_e() const { return -gamma_e * b0; }
  double omega1() const { return -gamma_e * b1 / 2.0; }
  double delta_omega() const { return omega_e() - omega_mw / 2.0; }
  void validate() const;
};

// Second-order SW term. `full_commutator` carries [T, H1] in the second-order
// part; `half_commutator` uses the expansion value (1/2)[T, H1].
enum class SecondOrderForm { full_commutator, half_commutator };

// Multiplier of eps*omega_zfs*h in the overtone gap.
double shift_coefficient(SecondOrderForm form);

inline constexpr double kDefaultValidityGuard = 0.5;

struct PerturbationOptions {
  double validity_guard = kDefaultValidityGuard;
  SecondOrderForm form = SecondOrderForm::full_commutator;
};

// Throws a perturbation-regime error unless eps * max(|f|, |g|, 3|h'|) < guard.
void check_perturbative(double eps, const FghValues& v, double guard);
// Throws unless eps < guard.
void check_epsilon(double eps, double guard);

Operator3 drive_operator(double chi);

Operator3 static_hamiltonian(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o);
Operator3 sw_generator(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                       double guard = kDefaultValidityGuard);
Operator3 sw_static(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                    const PerturbationOptions& opt = {});
// The (3 sqrt2 / 4) f* g single-quantum couplings kept out of the effective model.
Operator3 sw_single_quantum_couplings(const FieldContext& ctx, const ZfsTensor& zfs,
                                      const Orientation& o, const PerturbationOptions& opt = {});

struct SwSpinOperators {
  Operator3 sx;
  Operator3 sz;
};

SwSpinOperators sw_spin_operators(const FieldContext& ctx, const ZfsTensor& zfs,
                                  const Orientation& o, double guard = kDefaultValidityGuard);

Operator3 rotating_frame_hamiltonian(const FieldContext& ctx, const ZfsTensor& zfs,
                                     const Orientation& o, const PerturbationOptions& opt = {});

}  // namespace overtone
