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

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "overtone/hamiltonian.hpp"
#include "overtone/spectrum.hpp"

namespace overtone {

enum class PopulationBasis { zero_field, ms };

struct TripletPopulations {
  PopulationBasis basis = PopulationBasis::zero_field;
  // zero_field: (P_x, P_y, P_z); ms: (p0, p+1, p-1)
  std::array<double, 3> values{1.0 / 3, 1.0 / 3, 1.0 / 3};

  static TripletPopulations zero_field(double px, double py, double pz);
  static TripletPopulations ms(double p0, double p_plus, double p_minus);
  void validate() const;
  double p0() const { return values[0]; }
  double p_plus() const { return values[1]; }
  double p_minus() const { return values[2]; }
};

// 0.76 : 0.16 : 0.08 zero-field populations.
TripletPopulations pentacene_populations();
// p0 = 0.48 with 0.52 split equally over +-1 in the NV frame.
TripletPopulations nv_populations();

// Density matrix of the populations in the PAS (molecular) frame.
Operator3 pas_density(const TripletPopulations& pops);

TripletPopulations eigenstate_populations(const FieldContext& ctx, const ZfsTensor& zfs,
                                          const Orientation& o, const TripletPopulations& pops);

enum class PolarizationWeighting { none, triplet_fraction, overtone_moment };

struct PolarizationMap {
  std::vector<double> difference;  // p+1 - p-1
  std::vector<double> normalized;  // (p+1 - p-1) / (p+1 + p-1)
  double average = 0.0;
  double average_normalized = 0.0;
  PolarizationWeighting weighting = PolarizationWeighting::none;
};

PolarizationMap overtone_polarization_map(const FieldContext& ctx, const ZfsTensor& zfs,
                                          const PowderGrid& grid, const TripletPopulations& pops,
                                          PolarizationWeighting weighting = PolarizationWeighting::none);

struct EchoOptions {
  bool include_single_quantum = true;
  bool include_overtone = true;
};

// ctx supplies omega_mw, chi and gamma_e; b0 is swept along b_axis.
Spectrum echo_field_sweep(const FieldContext& ctx, const ZfsTensor& zfs, const PowderGrid& grid,
                          const TripletPopulations& pops, const UniformAxis& b_axis,
                          double excitation_bandwidth, const EchoOptions& opt = {});

struct IseConfig {
  double omega1 = 0.0;         // rad/s, microwave drive
  double t_mw = 0.0;           // s
  double b_sweep = 0.0;        // tesla, full sweep width
  double rep_rate = 0.0;       // Hz
  std::size_t rep_count = 1;
  double omega_0n = 0.0;       // rad/s
  double hyperfine_secular = kTwoPi * 1.0e6;
  double hyperfine_pseudosecular = kTwoPi * 0.3e6;
  double electron_polarization = 0.0;
  double detuning_offset = 0.0;   // rad/s, sweep centre relative to resonance
  double gamma_e = kGammaElectron;
  std::size_t max_steps = 4000000;

  void validate() const;
};

struct IseShot {
  double delta_nuclear_polarization = 0.0;
  double pseudo_nutation = 0.0;  // rad/s, Omega of the pseudo-spin model
  std::size_t steps = 0;
};

// Reduced model with an explicit pseudo-spin Rabi frequency Omega.
IseShot ise_shot_reduced(double omega, const IseConfig& cfg);
// Omega = 2 * overtone nutation of the orientation.
IseShot ise_shot(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                 const IseConfig& cfg);

// Polarization after each of cfg.rep_count shots: P_k+1 = (1 - leakage) P_k + transfer.
TimeTrace ise_buildup(double transfer_per_shot, const IseConfig& cfg, double leakage);

enum class BuildupModel { saturating, decaying };

struct BuildupFit {
  BuildupModel model = BuildupModel::saturating;
  double p_max = 0.0;     // saturating amplitude, or initial value for decaying
  double t_build = 0.0;   // s
  double t1 = 0.0;        // s
  double offset = 0.0;
  double p_max_err = 0.0;
  double time_err = 0.0;
  bool converged = false;
  bool identifiable = true;
  double residual_norm = 0.0;
  std::string diagnostics;
};

BuildupFit fit_buildup(const TimeTrace& trace, BuildupModel model);

double signal_ratio_estimate(double n_spins_ratio, double polarization_ratio, double epsilon_ratio);

}  // namespace overtone
