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

#include <optional>

#include "overtone/hamiltonian.hpp"
#include "overtone/spectrum.hpp"

namespace overtone {

double overtone_resonance(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                          const PerturbationOptions& opt = {});
double overtone_nutation(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                         double guard = kDefaultValidityGuard);

// Anisotropic shift omega' = omega - 2 omega_e for eta = 0 as a function of beta.
double overtone_shift_eta0(double beta, double eps_omega_zfs, SecondOrderForm form);

// Normalized lineshape density I(omega') for eta -> 0, omega' = omega - 2 omega_e (1/(rad/s)).
double lineshape_density(double omega_offset, double eps_omega_zfs,
                         SecondOrderForm form = SecondOrderForm::full_commutator);
double lineshape_cdf(double omega_offset, double eps_omega_zfs,
                     SecondOrderForm form = SecondOrderForm::full_commutator);

// Preimages x = -cos(beta) of a shift omega'; x2 exists only on the upper branch.
struct LineshapePreimages {
  double x1 = 0.0;
  std::optional<double> x2;
};
LineshapePreimages lineshape_preimages(double omega_offset, double eps_omega_zfs,
                                       SecondOrderForm form = SecondOrderForm::full_commutator);

// Bin-integrated lineshape on an absolute angular-frequency axis.
Spectrum lineshape_frequency(const FieldContext& ctx, const ZfsTensor& zfs, const UniformAxis& axis,
                             const PerturbationOptions& opt = {});

enum class FieldProfileMode { density, raw_substitution };

Spectrum field_profile(double omega_mw, const ZfsTensor& zfs, double gamma_e, const UniformAxis& axis,
                       FieldProfileMode mode = FieldProfileMode::density,
                       const PerturbationOptions& opt = {});

struct ShiftWidth {
  double b_s = 0.0;  // tesla
  double b_w = 0.0;  // tesla
};

ShiftWidth shift_width(double omega_mw, const ZfsTensor& zfs, double gamma_e,
                       SecondOrderForm form = SecondOrderForm::full_commutator);

// Fields at which the eta = 0 overtone line starts (h = 0) and ends (h = 3).
struct FieldSupport {
  double b_half = 0.0;
  double b_edge = 0.0;
};
FieldSupport field_support(double omega_mw, const ZfsTensor& zfs, double gamma_e,
                           SecondOrderForm form = SecondOrderForm::full_commutator);

enum class NutationGeometry { perpendicular, parallel };

const char* geometry_name(NutationGeometry g);

double nutation_density(NutationGeometry geometry, double omega_nut, double eps_omega1);
double nutation_cdf(NutationGeometry geometry, double omega_nut, double eps_omega1);
Spectrum nutation_distribution(NutationGeometry geometry, double eps_omega1, const UniformAxis& axis);

}  // namespace overtone
