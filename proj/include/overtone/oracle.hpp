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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "overtone/hamiltonian.hpp"
#include "overtone/spectrum.hpp"

namespace overtone {

struct TransitionMoments {
  double sq_plus = 0.0;   // |<+1'|O|0'>|^2
  double sq_minus = 0.0;  // |<0'|O|-1'>|^2
  double overtone = 0.0;  // |<+1'|O|-1'>|^2
};

struct TransitionSet {
  double sq_plus = 0.0;
  double sq_minus = 0.0;
  double overtone = 0.0;
  TransitionMoments moments;
  EigenSystem eigen;
};

// O = sin(chi) Sx + cos(chi) Sz with chi from the context.
TransitionSet exact_transitions(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o);

enum class Transition { sq_plus, sq_minus, overtone };

// Fields in [b_lo, b_hi] where the exact gap of `transition` equals omega_mw.
std::vector<double> resonance_fields(const ZfsTensor& zfs, const Orientation& o, double omega_mw,
                                     double gamma_e, Transition transition, double b_lo, double b_hi,
                                     std::size_t scan_points = 64);

enum class Frame { lab, rotating };
enum class RabiSignal { overtone, single_quantum };

struct RabiOptions {
  int initial_label = 1;
  // overtone: p(+1) - p(-1); single_quantum: p(+1) - p(0).
  RabiSignal signal = RabiSignal::overtone;
  std::size_t samples = 400;
  std::size_t steps_per_period = 50;
  SecondOrderForm form = SecondOrderForm::half_commutator;
  double validity_guard = kDefaultValidityGuard;
};

TimeTrace rabi_trace(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                     double drive_freq, double duration, Frame frame, const RabiOptions& opt = {});

struct FitResult {
  double amplitude = 0.0;
  double decay_rate = 0.0;  // 1/s
  double frequency = 0.0;   // rad/s
  double phase = 0.0;
  double offset = 0.0;
  double residual_norm = 0.0;
  double seed_frequency = 0.0;
  bool flagged = false;
  std::string note;
};

// y = amplitude exp(-decay_rate t) sin(frequency t + phase) + offset
FitResult fit_decaying_sinusoid(const TimeTrace& trace);

enum class PowderQuantity { resonance_formula, resonance_exact, nutation_formula, nutation_exact };
enum class PowderWeight { unit, moment2, moment2_polarization };

const char* quantity_name(PowderQuantity q);
const char* weight_name(PowderWeight w);

struct HistogramOptions {
  PowderQuantity quantity = PowderQuantity::resonance_formula;
  PowderWeight weight = PowderWeight::unit;
  SecondOrderForm form = SecondOrderForm::full_commutator;
  double validity_guard = kDefaultValidityGuard;
  // Per-orientation overtone polarization for moment2_polarization.
  std::span<const double> polarization;
};

// Per-orientation value of the chosen quantity.
std::vector<double> powder_quantity(const FieldContext& ctx, const ZfsTensor& zfs,
                                    const PowderGrid& grid, const HistogramOptions& opt);

Spectrum powder_histogram(const FieldContext& ctx, const ZfsTensor& zfs, const PowderGrid& grid,
                          const UniformAxis& axis, const HistogramOptions& opt = {});

double compare_spectra(const Spectrum& a, const Spectrum& b,
                       std::span<const AxisInterval> exclusions = {});

}  // namespace overtone
