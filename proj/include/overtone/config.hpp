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
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "overtone/experiment.hpp"
#include "overtone/export.hpp"
#include "overtone/hamiltonian.hpp"
#include "overtone/zfs.hpp"

namespace overtone {

// Every physical input is in laboratory units; conversion happens in the accessors below.
struct RunConfig {
  std::string system = "pentacene";  // pentacene | nv | custom
  double d_mhz = 0.0;                // custom only
  double e_mhz = 0.0;
  double mw_ghz = 11.6;
  std::optional<double> b0_t;        // default: half field of mw_ghz
  std::optional<double> b1_mt;       // default: 0.14 (pentacene), 0.183 (nv, custom)
  double chi_deg = 90.0;
  double gamma_ghz_per_t = -28.02495;
  std::string form = "full-commutator";  // full-commutator | half-commutator
  double guard = kDefaultValidityGuard;

  std::string scheme = "random";     // random | gauss-legendre
  std::size_t orientations = 100000;
  std::size_t n_alpha = 1;
  std::uint64_t seed = 1;
  std::size_t bins = 240;
  std::optional<double> axis_lo;     // command units: MHz offset, mT or MHz
  std::optional<double> axis_hi;

  double alpha_deg = 0.0;
  double beta_deg = 45.0;
  double gamma_deg = 0.0;
  std::string frame = "lab";         // lab | rotating
  std::string signal = "overtone";   // overtone | single-quantum
  std::optional<double> duration_us;
  std::size_t samples = 400;
  std::optional<double> drive_mhz;   // default: exact transition frequency

  std::string mode = "density";      // field-profile: density | raw
  std::string geometry = "perpendicular";
  std::string quantity = "resonance-formula";
  std::string weight = "unit";
  std::optional<double> bandwidth_mhz;  // echo excitation bandwidth

  std::optional<double> px, py, pz;  // zero-field populations
  std::optional<double> p0;          // ms-basis p0, remainder split equally

  double t_mw_us = 3.0;
  double b_sweep_mt = 0.3;
  double rep_rate_hz = 500.0;
  std::size_t rep_count = 1000;
  double nuclear_mhz = 8.74;
  double hyperfine_a_mhz = 1.0;
  double hyperfine_b_mhz = 0.3;
  double electron_polarization = 0.5;
  double detuning_mhz = 0.0;
  double leakage = 0.0;

  std::string input;
  std::string model = "saturating";  // saturating | decaying
  std::string suite = "all";

  std::string output;                // empty: stdout
  std::string format = "csv";
  double smooth = 0.0;               // Gaussian sigma in display units (MHz, mT, us)

  ZfsTensor zfs() const;
  FieldContext field_context() const;
  PerturbationOptions perturbation() const;
  SecondOrderForm second_order() const;
  TripletPopulations populations() const;
  PowderGrid grid() const;
  Orientation orientation() const;
  IseConfig ise() const;
  ExportFormat export_format() const;
  void validate() const;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();

// Keys accept '-' or '_'. Unknown keys and unparsable values throw invalid_argument.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Grammar: one `key = value` per line; `#` starts a comment; blank lines ignored.
void apply_config_text(RunConfig& cfg, const std::string& text);

// Keys with a value, as `key = value` lines in config_keys() order.
std::string config_to_text(const RunConfig& cfg);
// Run parameters for output headers; the output path is left out.
Metadata config_metadata(const RunConfig& cfg);

}  // namespace overtone
