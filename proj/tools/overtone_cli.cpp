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

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "overtone/analytics.hpp"
#include "overtone/config.hpp"
#include "overtone/errors.hpp"
#include "overtone/experiment.hpp"
#include "overtone/export.hpp"
#include "overtone/oracle.hpp"
#include "overtone/units.hpp"
#include "overtone/validation.hpp"

namespace {

using namespace overtone;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitValidation = 4;

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.output.empty()) {
    std::cout << content;
    std::cout.flush();
  } else {
    write_file(cfg.output, content);
  }
}

void add_config_metadata(Spectrum& s, const RunConfig& cfg) {
  for (const auto& [k, v] : config_metadata(cfg)) s.metadata[k] = v;
}

// Smoothing width in display units converted to axis units.
double axis_sigma(AxisKind kind, double sigma) {
  switch (kind) {
    case AxisKind::angular_frequency:
    case AxisKind::nutation_rate: return mhz_to_rad(sigma);
    case AxisKind::field: return mt_to_tesla(sigma);
    case AxisKind::time: return us_to_s(sigma);
  }
  return sigma;
}

void write_spectrum(const RunConfig& cfg, Spectrum s, const std::string& title) {
  add_config_metadata(s, cfg);
  if (cfg.smooth > 0.0) s = gaussian_smooth(s, axis_sigma(s.kind, cfg.smooth));
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
  switch (cfg.export_format()) {
    case ExportFormat::csv: emit(cfg, spectrum_to_csv(s)); break;
    case ExportFormat::json: emit(cfg, spectrum_to_json(s)); break;
    case ExportFormat::svg: emit(cfg, spectrum_to_svg(s, title)); break;
  }
}

UniformAxis mhz_axis(const RunConfig& cfg, double origin, double lo_default, double hi_default) {
  const double lo = cfg.axis_lo ? mhz_to_rad(*cfg.axis_lo) : lo_default;
  const double hi = cfg.axis_hi ? mhz_to_rad(*cfg.axis_hi) : hi_default;
  return UniformAxis::from_range(origin + lo, origin + hi, cfg.bins);
}

int cmd_spectrum(const RunConfig& cfg) {
  const FieldContext ctx = cfg.field_context();
  const ZfsTensor zfs = cfg.zfs();
  const double span = 3.0 * shift_coefficient(cfg.second_order()) * epsilon(zfs, ctx.b0, ctx.gamma_e) *
                      zfs.omega_zfs();
  // Axis bounds are offsets from 2 omega_e in MHz.
  const UniformAxis axis = mhz_axis(cfg, 2.0 * ctx.omega_e(), -0.05 * span, 1.05 * span);
  write_spectrum(cfg, lineshape_frequency(ctx, zfs, axis, cfg.perturbation()), "overtone lineshape");
  return 0;
}

int cmd_field_profile(const RunConfig& cfg) {
  const FieldContext ctx = cfg.field_context();
  const ZfsTensor zfs = cfg.zfs();
  const FieldSupport sup = field_support(ctx.omega_mw, zfs, ctx.gamma_e, cfg.second_order());
  const double pad = 0.1 * std::abs(sup.b_half - sup.b_edge);
  const double lo = cfg.axis_lo ? mt_to_tesla(*cfg.axis_lo) : std::min(sup.b_half, sup.b_edge) - pad;
  const double hi = cfg.axis_hi ? mt_to_tesla(*cfg.axis_hi) : std::max(sup.b_half, sup.b_edge) + pad;
  const UniformAxis axis = UniformAxis::from_range(lo, hi, cfg.bins);
  const FieldProfileMode mode = cfg.mode == "raw" ? FieldProfileMode::raw_substitution : FieldProfileMode::density;
  Spectrum s = field_profile(ctx.omega_mw, zfs, ctx.gamma_e, axis, mode, cfg.perturbation());
  const ShiftWidth sw = shift_width(ctx.omega_mw, zfs, ctx.gamma_e, cfg.second_order());
  s.set("b_s_mt", tesla_to_mt(sw.b_s));
  s.set("b_w_mt", tesla_to_mt(sw.b_w));
  write_spectrum(cfg, std::move(s), "overtone field profile");
  return 0;
}

int cmd_nutation_dist(const RunConfig& cfg) {
  const FieldContext ctx = cfg.field_context();
  const double ew1 = epsilon(cfg.zfs(), ctx.b0, ctx.gamma_e) * ctx.omega1();
  check_epsilon(epsilon(cfg.zfs(), ctx.b0, ctx.gamma_e), cfg.guard);
  const UniformAxis axis = mhz_axis(cfg, 0.0, 0.0, 1.6 * ew1);
  const NutationGeometry g =
      cfg.geometry == "parallel" ? NutationGeometry::parallel : NutationGeometry::perpendicular;
  write_spectrum(cfg, nutation_distribution(g, ew1, axis), "overtone nutation distribution");
  return 0;
}

int cmd_rabi(const RunConfig& cfg) {
  const FieldContext ctx = cfg.field_context();
  const ZfsTensor zfs = cfg.zfs();
  const Orientation o = cfg.orientation();
  const TransitionSet ts = exact_transitions(ctx, zfs, o);
  const bool overtone = cfg.signal == "overtone";
  RabiOptions opt;
  opt.signal = overtone ? RabiSignal::overtone : RabiSignal::single_quantum;
  opt.samples = cfg.samples;
  opt.validity_guard = cfg.guard;
  const double moment = overtone ? ts.moments.overtone : ts.moments.sq_plus;
  const double rate = ctx.omega1() * std::sqrt(moment);
  const double predicted = overtone ? overtone_nutation(ctx, zfs, o, cfg.guard) : rate;
  const Frame frame = cfg.frame == "lab" ? Frame::lab : Frame::rotating;
  double drive = overtone ? ts.overtone : ts.sq_plus;
  if (frame == Frame::rotating) drive = overtone_resonance(ctx, zfs, o, {cfg.guard, opt.form});
  if (cfg.drive_mhz) drive = mhz_to_rad(*cfg.drive_mhz);
  if (!cfg.duration_us && !(rate > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "transition moment vanishes here; set duration-us");
  }
  const double duration = cfg.duration_us ? us_to_s(*cfg.duration_us) : 4.0 * kPi / rate;
  const TimeTrace trace = rabi_trace(ctx, zfs, o, drive, duration, frame, opt);

  Metadata meta = config_metadata(cfg);
  meta["drive_frequency_rad_s"] = format_double(drive);
  meta["predicted_nutation_mhz"] = format_double(rad_to_mhz(predicted));
  meta["moment_nutation_mhz"] = format_double(rad_to_mhz(rate));
  try {
    const FitResult fit = fit_decaying_sinusoid(trace);
    meta["fitted_signal_frequency_mhz"] = format_double(rad_to_mhz(fit.frequency));
    meta["fitted_nutation_mhz"] = format_double(rad_to_mhz(0.5 * fit.frequency));
    meta["fit_flagged"] = fit.flagged ? "true" : "false";
    if (!fit.note.empty()) meta["fit_note"] = fit.note;
    std::cerr << "fitted nutation " << rad_to_mhz(0.5 * fit.frequency) << " MHz, predicted "
              << rad_to_mhz(predicted) << " MHz\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::no_oscillation) throw;
    meta["fit_note"] = e.what();
    std::cerr << "no oscillation to fit\n";
  }
  switch (cfg.export_format()) {
    case ExportFormat::csv: emit(cfg, trace_to_csv(trace, meta)); break;
    case ExportFormat::json: emit(cfg, trace_to_json(trace, meta)); break;
    case ExportFormat::svg: emit(cfg, trace_to_svg(trace, overtone ? "overtone Rabi trace" : "SQ Rabi trace")); break;
  }
  return 0;
}

int cmd_powder(const RunConfig& cfg) {
  const FieldContext ctx = cfg.field_context();
  const ZfsTensor zfs = cfg.zfs();
  const PowderGrid grid = cfg.grid();
  if (cfg.quantity == "echo") {
    const FieldSupport sup = field_support(ctx.omega_mw, zfs, ctx.gamma_e, SecondOrderForm::half_commutator);
    const double lo = cfg.axis_lo ? mt_to_tesla(*cfg.axis_lo) : sup.b_half - 0.03;
    const double hi = cfg.axis_hi ? mt_to_tesla(*cfg.axis_hi) : sup.b_half + 0.03;
    const double bw = mhz_to_rad(cfg.bandwidth_mhz ? *cfg.bandwidth_mhz : 20.0);
    Spectrum s = echo_field_sweep(ctx, zfs, grid, cfg.populations(), UniformAxis::from_range(lo, hi, cfg.bins), bw);
    write_spectrum(cfg, std::move(s), "echo field sweep");
    return 0;
  }
  HistogramOptions opt;
  opt.form = cfg.second_order();
  opt.validity_guard = cfg.guard;
  static const std::map<std::string, PowderQuantity> quantities = {
      {"resonance-formula", PowderQuantity::resonance_formula},
      {"resonance-exact", PowderQuantity::resonance_exact},
      {"nutation-formula", PowderQuantity::nutation_formula},
      {"nutation-exact", PowderQuantity::nutation_exact}};
  static const std::map<std::string, PowderWeight> weights = {
      {"unit", PowderWeight::unit}, {"moment2", PowderWeight::moment2},
      {"moment2-polarization", PowderWeight::moment2_polarization}};
  opt.quantity = quantities.at(cfg.quantity);
  opt.weight = weights.at(cfg.weight);
  std::vector<double> pol;
  if (opt.weight == PowderWeight::moment2_polarization) {
    pol = overtone_polarization_map(ctx, zfs, grid, cfg.populations()).difference;
    opt.polarization = pol;
  }
  const double eps = epsilon(zfs, ctx.b0, ctx.gamma_e);
  UniformAxis axis;
  if (opt.quantity == PowderQuantity::nutation_formula || opt.quantity == PowderQuantity::nutation_exact) {
    axis = mhz_axis(cfg, 0.0, 0.0, 1.6 * eps * ctx.omega1());
  } else {
    const double span = 3.0 * shift_coefficient(SecondOrderForm::full_commutator) * eps * zfs.omega_zfs();
    axis = mhz_axis(cfg, 2.0 * ctx.omega_e(), -0.05 * span, 1.05 * span);
  }
  write_spectrum(cfg, powder_histogram(ctx, zfs, grid, axis, opt), "powder histogram");
  return 0;
}

int cmd_polarization(const RunConfig& cfg) {
  const PowderGrid grid = cfg.grid();
  const PolarizationMap map = overtone_polarization_map(cfg.field_context(), cfg.zfs(), grid, cfg.populations());
  std::cerr << "average p+1 - p-1 = " << map.average << ", pair-normalized = " << map.average_normalized << '\n';
  switch (cfg.export_format()) {
    case ExportFormat::csv: {
      std::ostringstream os;
      for (const auto& [k, v] : config_metadata(cfg)) os << "# " << k << " = " << v << '\n';
      os << "# average = " << format_double(map.average) << '\n';
      os << "# average_normalized = " << format_double(map.average_normalized) << '\n';
      os << "alpha,beta,gamma,weight,difference,normalized\n";
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Orientation& o = grid.orientations[i];
        os << format_double(o.alpha) << ',' << format_double(o.beta) << ',' << format_double(o.gamma) << ','
           << format_double(grid.weights[i]) << ',' << format_double(map.difference[i]) << ','
           << format_double(map.normalized[i]) << '\n';
      }
      emit(cfg, os.str());
      break;
    }
    case ExportFormat::json: {
      nlohmann::ordered_json j;
      j["average"] = map.average;
      j["average_normalized"] = map.average_normalized;
      j["difference"] = map.difference;
      j["normalized"] = map.normalized;
      j["metadata"] = config_metadata(cfg);
      emit(cfg, j.dump(2) + "\n");
      break;
    }
    case ExportFormat::svg: {
      // Orientation average of p+1 - p-1 binned in cos(beta).
      const std::size_t bins = std::min<std::size_t>(cfg.bins, 100);
      std::vector<double> sum(bins, 0.0), w(bins, 0.0);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c = std::cos(grid.orientations[i].beta);
        const auto k = std::min(bins - 1, static_cast<std::size_t>((c + 1.0) * 0.5 * static_cast<double>(bins)));
        sum[k] += grid.weights[i] * map.difference[i];
        w[k] += grid.weights[i];
      }
      std::vector<double> x(bins), y(bins);
      for (std::size_t k = 0; k < bins; ++k) {
        x[k] = -1.0 + (static_cast<double>(k) + 0.5) * 2.0 / static_cast<double>(bins);
        y[k] = w[k] > 0.0 ? sum[k] / w[k] : 0.0;
      }
      const std::string svg = plot_svg(x, y, "cos(beta)", "p+1 - p-1", "overtone polarization");
      emit(cfg, svg);
      break;
    }
  }
  return 0;
}

int cmd_ise(const RunConfig& cfg) {
  const IseConfig ic = cfg.ise();
  const IseShot shot = ise_shot(cfg.field_context(), cfg.zfs(), cfg.orientation(), ic);
  const TimeTrace build = ise_buildup(shot.delta_nuclear_polarization, ic, cfg.leakage);
  Metadata meta = config_metadata(cfg);
  meta["transfer_per_shot"] = format_double(shot.delta_nuclear_polarization);
  meta["pseudo_nutation_mhz"] = format_double(rad_to_mhz(shot.pseudo_nutation));
  meta["steps"] = std::to_string(shot.steps);
  std::cerr << "transfer per shot " << shot.delta_nuclear_polarization << '\n';
  switch (cfg.export_format()) {
    case ExportFormat::csv: emit(cfg, trace_to_csv(build, meta)); break;
    case ExportFormat::json: emit(cfg, trace_to_json(build, meta)); break;
    case ExportFormat::svg: emit(cfg, trace_to_svg(build, "ISE buildup")); break;
  }
  return 0;
}

int cmd_fit(const RunConfig& cfg) {
  if (cfg.input.empty()) throw Error(ErrorKind::invalid_argument, "fit needs --input");
  const TimeTrace trace = trace_from_csv(read_file(cfg.input));
  const BuildupFit f =
      fit_buildup(trace, cfg.model == "saturating" ? BuildupModel::saturating : BuildupModel::decaying);
  Metadata meta = config_metadata(cfg);
  if (cfg.export_format() == ExportFormat::json) {
    emit(cfg, buildup_to_json(f, meta));
    return 0;
  }
  if (cfg.export_format() == ExportFormat::svg) throw Error(ErrorKind::invalid_argument, "fit writes csv or json");
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << '\n';
  os << "# diagnostics = " << f.diagnostics << '\n';
  os << "parameter,value,error\n";
  os << "p_max," << format_double(f.p_max) << ',' << format_double(f.p_max_err) << '\n';
  os << (f.model == BuildupModel::saturating ? "t_build," : "t1,")
     << format_double(f.model == BuildupModel::saturating ? f.t_build : f.t1) << ',' << format_double(f.time_err)
     << '\n';
  emit(cfg, os.str());
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  std::vector<CriterionResult> results;
  for (int id : suite_criteria(cfg.suite)) {
    results.push_back(run_criterion(id));
    const auto& r = results.back();
    std::cerr << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail << '\n';
  }
  emit(cfg, results_to_json(cfg.suite, results));
  for (const auto& r : results) {
    if (!r.passed) return kExitValidation;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"overtone: overtone transitions of spin-1 systems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  app.add_option("--config", config_file, "key = value configuration file");

  std::map<std::string, std::string> flags;
  for (const auto& k : config_keys()) {
    app.add_option("--" + k.name, flags[k.name], k.help);
  }

  using Handler = int (*)(const RunConfig&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"spectrum", "closed-form overtone lineshape", cmd_spectrum},
      {"field-profile", "overtone field-swept profile", cmd_field_profile},
      {"nutation-dist", "closed-form nutation distribution", cmd_nutation_dist},
      {"rabi", "single-orientation Rabi trace and fit", cmd_rabi},
      {"powder", "Monte-Carlo powder histogram or echo sweep", cmd_powder},
      {"polarization", "orientation-resolved overtone polarization", cmd_polarization},
      {"ise", "ISE shot and buildup", cmd_ise},
      {"fit", "buildup curve fit", cmd_fit},
      {"validate", "run acceptance suites", cmd_validate},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) apply_config_text(cfg, read_file(config_file));
    for (const auto& k : config_keys()) {
      if (app.count("--" + k.name) > 0) set_config_value(cfg, k.name, flags[k.name]);
    }
    cfg.validate();
    for (const auto& [name, help, fn] : commands) {
      if (app.got_subcommand(name)) return fn(cfg);
    }
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << '\n';
    return is_numeric_validity(e.kind()) ? kExitNumeric : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
