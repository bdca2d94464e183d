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

#include "overtone/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "overtone/errors.hpp"
#include "overtone/spectrum.hpp"
#include "overtone/units.hpp"

namespace overtone {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string canonical(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw Error(ErrorKind::invalid_argument, "config key '" + key + "': " + what + " (got '" + value + "')");
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, value, "expected a finite number");
  }
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    bad_value(key, value, "expected a nonnegative integer");
  }
  return out;
}

template <class T>
ConfigKey number_key(const char* name, const char* help, T RunConfig::*member) {
  return {name, help,
          [name, member](RunConfig& c, const std::string& v) {
            if constexpr (std::is_same_v<T, double>) {
              c.*member = to_double(name, v);
            } else {
              c.*member = static_cast<T>(to_unsigned(name, v));
            }
          },
          [member](const RunConfig& c) {
            if constexpr (std::is_same_v<T, double>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

ConfigKey optional_key(const char* name, const char* help, std::optional<double> RunConfig::*member) {
  return {name, help, [name, member](RunConfig& c, const std::string& v) { c.*member = to_double(name, v); },
          [member](const RunConfig& c) { return (c.*member) ? format_double(*(c.*member)) : std::string(); }};
}

ConfigKey choice_key(const char* name, const char* help, std::string RunConfig::*member,
                     std::initializer_list<const char*> allowed) {
  std::vector<const char*> copy(allowed);
  return {name, help,
          [name, member, copy](RunConfig& c, const std::string& v) {
            const std::string t = trim(v);
            if (std::find_if(copy.begin(), copy.end(), [&](const char* a) { return t == a; }) == copy.end()) {
              std::string list;
              for (const char* a : copy) list += std::string(list.empty() ? "" : "|") + a;
              throw Error(ErrorKind::invalid_argument,
                          std::string("config key '") + name + "': expected " + list + " (got '" + v + "')");
            }
            c.*member = t;
          },
          [member](const RunConfig& c) { return c.*member; }};
}

ConfigKey text_key(const char* name, const char* help, std::string RunConfig::*member) {
  return {name, help, [member](RunConfig& c, const std::string& v) { c.*member = trim(v); },
          [member](const RunConfig& c) { return c.*member; }};
}

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  k.push_back(choice_key("system", "spin system preset", &RunConfig::system, {"pentacene", "nv", "custom"}));
  k.push_back(number_key("d-mhz", "custom D / 2pi in MHz", &RunConfig::d_mhz));
  k.push_back(number_key("e-mhz", "custom E / 2pi in MHz", &RunConfig::e_mhz));
  k.push_back(number_key("mw-ghz", "microwave frequency in GHz", &RunConfig::mw_ghz));
  k.push_back(optional_key("b0", "static field in T (default: half field)", &RunConfig::b0_t));
  k.push_back(optional_key("b1-mt", "microwave field amplitude in mT", &RunConfig::b1_mt));
  k.push_back(number_key("chi", "angle between B1 and B0 in degrees", &RunConfig::chi_deg));
  k.push_back(number_key("gamma-ghz-per-t", "electron gyromagnetic ratio / 2pi in GHz/T", &RunConfig::gamma_ghz_per_t));
  k.push_back(choice_key("form", "second-order term", &RunConfig::form, {"full-commutator", "half-commutator"}));
  k.push_back(number_key("guard", "perturbative validity guard", &RunConfig::guard));
  k.push_back(choice_key("scheme", "powder grid scheme", &RunConfig::scheme, {"random", "gauss-legendre"}));
  k.push_back(number_key("orientations", "random orientations, or beta/gamma nodes for gauss-legendre",
                         &RunConfig::orientations));
  k.push_back(number_key("n-alpha", "alpha nodes for gauss-legendre", &RunConfig::n_alpha));
  k.push_back(number_key("seed", "random seed", &RunConfig::seed));
  k.push_back(number_key("bins", "histogram bins", &RunConfig::bins));
  k.push_back(optional_key("axis-lo", "axis start (MHz offset, mT or MHz)", &RunConfig::axis_lo));
  k.push_back(optional_key("axis-hi", "axis end (MHz offset, mT or MHz)", &RunConfig::axis_hi));
  k.push_back(number_key("alpha", "Euler alpha in degrees", &RunConfig::alpha_deg));
  k.push_back(number_key("beta", "Euler beta in degrees", &RunConfig::beta_deg));
  k.push_back(number_key("gamma", "Euler gamma in degrees", &RunConfig::gamma_deg));
  k.push_back(choice_key("frame", "rabi propagation frame", &RunConfig::frame, {"lab", "rotating"}));
  k.push_back(choice_key("signal", "rabi observable", &RunConfig::signal, {"overtone", "single-quantum"}));
  k.push_back(optional_key("duration-us", "rabi trace length in us", &RunConfig::duration_us));
  k.push_back(number_key("samples", "rabi trace samples", &RunConfig::samples));
  k.push_back(optional_key("drive-mhz", "drive frequency in MHz (default: resonance of the chosen frame)", &RunConfig::drive_mhz));
  k.push_back(choice_key("mode", "field-profile mode", &RunConfig::mode, {"density", "raw"}));
  k.push_back(choice_key("geometry", "nutation geometry", &RunConfig::geometry, {"perpendicular", "parallel"}));
  k.push_back(choice_key("quantity", "powder histogram quantity", &RunConfig::quantity,
                         {"resonance-formula", "resonance-exact", "nutation-formula", "nutation-exact", "echo"}));
  k.push_back(choice_key("weight", "powder histogram weight", &RunConfig::weight,
                         {"unit", "moment2", "moment2-polarization"}));
  k.push_back(optional_key("bandwidth-mhz", "echo excitation bandwidth in MHz", &RunConfig::bandwidth_mhz));
  k.push_back(optional_key("px", "zero-field population Px", &RunConfig::px));
  k.push_back(optional_key("py", "zero-field population Py", &RunConfig::py));
  k.push_back(optional_key("pz", "zero-field population Pz", &RunConfig::pz));
  k.push_back(optional_key("p0", "ms = 0 population, rest split over +-1", &RunConfig::p0));
  k.push_back(number_key("t-mw-us", "ISE pulse width in us", &RunConfig::t_mw_us));
  k.push_back(number_key("b-sweep-mt", "ISE field-sweep width in mT", &RunConfig::b_sweep_mt));
  k.push_back(number_key("rep-rate-hz", "ISE repetition rate in Hz", &RunConfig::rep_rate_hz));
  k.push_back(number_key("rep-count", "ISE shots", &RunConfig::rep_count));
  k.push_back(number_key("nuclear-mhz", "nuclear Larmor frequency in MHz", &RunConfig::nuclear_mhz));
  k.push_back(number_key("hyperfine-a-mhz", "secular hyperfine in MHz", &RunConfig::hyperfine_a_mhz));
  k.push_back(number_key("hyperfine-b-mhz", "pseudo-secular hyperfine in MHz", &RunConfig::hyperfine_b_mhz));
  k.push_back(number_key("electron-polarization", "initial overtone pseudo-spin polarization",
                         &RunConfig::electron_polarization));
  k.push_back(number_key("detuning-mhz", "ISE sweep centre offset in MHz", &RunConfig::detuning_mhz));
  k.push_back(number_key("leakage", "fractional nuclear polarization loss per shot", &RunConfig::leakage));
  k.push_back(text_key("input", "input CSV trace for fit", &RunConfig::input));
  k.push_back(choice_key("model", "buildup model", &RunConfig::model, {"saturating", "decaying"}));
  k.push_back(choice_key("suite", "validation suite", &RunConfig::suite,
                         {"all", "lineshape", "resonance", "nutation", "systems", "ise", "fit"}));
  k.push_back(text_key("output", "output path (default: stdout)", &RunConfig::output));
  k.push_back(choice_key("format", "output format", &RunConfig::format, {"csv", "json", "svg"}));
  k.push_back(number_key("smooth", "Gaussian smoothing sigma in display units", &RunConfig::smooth));
  return k;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string name = canonical(trim(key));
  for (const auto& k : config_keys()) {
    if (k.name == name) {
      k.set(cfg, value);
      return;
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown config key '" + trim(key) + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::invalid_argument, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.kind(), "config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string config_to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : config_keys()) {
    const std::string v = k.get(cfg);
    if (!v.empty()) out += k.name + " = " + v + "\n";
  }
  return out;
}

Metadata config_metadata(const RunConfig& cfg) {
  Metadata m;
  for (const auto& k : config_keys()) {
    const std::string v = k.get(cfg);
    if (!v.empty() && k.name != "output") m["config." + k.name] = v;
  }
  return m;
}

ZfsTensor RunConfig::zfs() const {
  if (system == "pentacene") return pentacene_zfs();
  if (system == "nv") return nv_zfs();
  return ZfsTensor::from_de(mhz_to_rad(d_mhz), mhz_to_rad(e_mhz));
}

FieldContext RunConfig::field_context() const {
  FieldContext ctx;
  ctx.gamma_e = ghz_to_rad(gamma_ghz_per_t);
  ctx.omega_mw = ghz_to_rad(mw_ghz);
  ctx.b0 = b0_t ? *b0_t : ctx.omega_mw / (2.0 * std::abs(ctx.gamma_e));
  const double b1 = b1_mt ? *b1_mt : (system == "pentacene" ? 0.14 : 0.183);
  ctx.b1 = mt_to_tesla(b1);
  ctx.chi = deg_to_rad(chi_deg);
  return ctx;
}

SecondOrderForm RunConfig::second_order() const {
  return form == "full-commutator" ? SecondOrderForm::full_commutator : SecondOrderForm::half_commutator;
}

PerturbationOptions RunConfig::perturbation() const {
  return {guard, second_order()};
}

TripletPopulations RunConfig::populations() const {
  if (px || py || pz) {
    if (!(px && py && pz)) throw Error(ErrorKind::invalid_argument, "px, py and pz must be given together");
    return TripletPopulations::zero_field(*px, *py, *pz);
  }
  if (p0) return TripletPopulations::ms(*p0, 0.5 * (1.0 - *p0), 0.5 * (1.0 - *p0));
  return system == "pentacene" ? pentacene_populations() : nv_populations();
}

PowderGrid RunConfig::grid() const {
  return powder_grid(scheme == "random" ? PowderScheme::random : PowderScheme::gauss_legendre, orientations, seed,
                     n_alpha);
}

Orientation RunConfig::orientation() const {
  return Orientation::make(deg_to_rad(alpha_deg), deg_to_rad(beta_deg), deg_to_rad(gamma_deg));
}

IseConfig RunConfig::ise() const {
  IseConfig c;
  c.omega1 = field_context().omega1();
  c.t_mw = us_to_s(t_mw_us);
  c.b_sweep = mt_to_tesla(b_sweep_mt);
  c.rep_rate = rep_rate_hz;
  c.rep_count = rep_count;
  c.omega_0n = mhz_to_rad(nuclear_mhz);
  c.hyperfine_secular = mhz_to_rad(hyperfine_a_mhz);
  c.hyperfine_pseudosecular = mhz_to_rad(hyperfine_b_mhz);
  c.electron_polarization = electron_polarization;
  c.detuning_offset = mhz_to_rad(detuning_mhz);
  c.gamma_e = ghz_to_rad(gamma_ghz_per_t);
  return c;
}

ExportFormat RunConfig::export_format() const { return export_format_from_name(format); }

void RunConfig::validate() const {
  if (system == "custom" && d_mhz == 0.0) {
    throw Error(ErrorKind::invalid_argument, "system = custom needs a nonzero d-mhz");
  }
  if (!(mw_ghz > 0.0)) throw Error(ErrorKind::invalid_argument, "mw-ghz must be positive");
  if (gamma_ghz_per_t == 0.0) throw Error(ErrorKind::invalid_argument, "gamma-ghz-per-t must be nonzero");
  if (!(guard > 0.0)) throw Error(ErrorKind::invalid_argument, "guard must be positive");
  if (bins == 0) throw Error(ErrorKind::invalid_argument, "bins must be positive");
  if (orientations == 0) throw Error(ErrorKind::invalid_argument, "orientations must be positive");
  if (samples < 2) throw Error(ErrorKind::invalid_argument, "samples must be at least 2");
  if (smooth < 0.0) throw Error(ErrorKind::invalid_argument, "smooth must be nonnegative");
  if (axis_lo && axis_hi && !(*axis_hi > *axis_lo)) {
    throw Error(ErrorKind::invalid_argument, "axis-hi must exceed axis-lo");
  }
  if (leakage < 0.0 || leakage > 1.0) throw Error(ErrorKind::invalid_argument, "leakage must lie in [0, 1]");
  zfs().validate();
  field_context().validate();
  ise().validate();
  populations().validate();
}

}  // namespace overtone
