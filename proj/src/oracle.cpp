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

#include "overtone/oracle.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "overtone/errors.hpp"
#include "overtone/fitting.hpp"
#include "overtone/kernels.hpp"
#include "overtone/numeric.hpp"

namespace overtone {

TransitionSet exact_transitions(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o) {
  TransitionSet t;
  t.eigen = eig_adiabatic(static_hamiltonian(ctx, zfs, o));
  const double ep = t.eigen.value(1);
  const double e0 = t.eigen.value(0);
  const double em = t.eigen.value(-1);
  t.sq_plus = ep - e0;
  t.sq_minus = e0 - em;
  t.overtone = t.sq_plus + t.sq_minus;
  const Operator3 op = drive_operator(ctx.chi);
  const State3 vp = t.eigen.vector(1);
  const State3 v0 = t.eigen.vector(0);
  const State3 vm = t.eigen.vector(-1);
  t.moments.sq_plus = std::norm(vp.dot(op * v0));
  t.moments.sq_minus = std::norm(v0.dot(op * vm));
  t.moments.overtone = std::norm(vp.dot(op * vm));
  return t;
}

namespace {

double transition_gap(const ZfsTensor& zfs, const Orientation& o, double gamma_e, Transition tr,
                      double b) {
  FieldContext ctx;
  ctx.b0 = b;
  ctx.gamma_e = gamma_e;
  const EigenSystem es = eig_adiabatic(static_hamiltonian(ctx, zfs, o));
  switch (tr) {
    case Transition::sq_plus: return es.value(1) - es.value(0);
    case Transition::sq_minus: return es.value(0) - es.value(-1);
    case Transition::overtone: return es.value(1) - es.value(-1);
  }
  return 0.0;
}

}  // namespace

std::vector<double> resonance_fields(const ZfsTensor& zfs, const Orientation& o, double omega_mw,
                                     double gamma_e, Transition transition, double b_lo, double b_hi,
                                     std::size_t scan_points) {
  if (!(b_hi > b_lo) || !(b_lo > 0.0) || scan_points < 2) {
    throw Error(ErrorKind::invalid_argument, "resonance_fields: need 0 < b_lo < b_hi");
  }
  auto residual = [&](double b) { return transition_gap(zfs, o, gamma_e, transition, b) - omega_mw; };
  std::vector<double> roots;
  double b_prev = b_lo;
  double r_prev = residual(b_lo);
  for (std::size_t k = 1; k < scan_points; ++k) {
    const double b = b_lo + (b_hi - b_lo) * static_cast<double>(k) / static_cast<double>(scan_points - 1);
    const double r = residual(b);
    if (r_prev == 0.0) {
      roots.push_back(b_prev);
    } else if ((r_prev < 0.0) != (r < 0.0) && r != 0.0) {
      double lo = b_prev, hi = b, flo = r_prev;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    b_prev = b;
    r_prev = r;
  }
  if (r_prev == 0.0) roots.push_back(b_prev);
  return roots;
}

TimeTrace rabi_trace(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                     double drive_freq, double duration, Frame frame, const RabiOptions& opt) {
  if (opt.samples < 2) throw Error(ErrorKind::invalid_argument, "rabi_trace: need at least 2 samples");
  if (!(duration > 0.0)) throw Error(ErrorKind::invalid_argument, "rabi_trace: duration must be positive");
  const int other = opt.signal == RabiSignal::overtone ? -1 : 0;
  std::vector<double> values;
  values.reserve(opt.samples);

  if (frame == Frame::rotating) {
    if (opt.signal != RabiSignal::overtone) {
      throw Error(ErrorKind::invalid_argument,
                  "rabi_trace: the rotating-frame model only carries the overtone pair");
    }
    FieldContext c = ctx;
    c.omega_mw = drive_freq;
    const Operator3 h = rotating_frame_hamiltonian(c, zfs, o, {opt.validity_guard, opt.form});
    const double dt = duration / static_cast<double>(opt.samples - 1);
    const Operator3 u = unitary_step(h, dt);
    State3 psi = State3::Zero();
    psi(basis_index(opt.initial_label)) = 1.0;
    for (std::size_t k = 0; k < opt.samples; ++k) {
      values.push_back(std::norm(psi(basis_index(1))) - std::norm(psi(basis_index(other))));
      psi = u * psi;
    }
    return TimeTrace::uniform(0.0, dt, std::move(values));
  }

  const Operator3 h0 = static_hamiltonian(ctx, zfs, o);
  const EigenSystem es = eig_adiabatic(h0);
  const State3 vp = es.vector(1);
  const State3 vo = es.vector(other);
  State3 psi = es.vector(opt.initial_label);
  const double amp = 2.0 * ctx.omega1();

  double sample_dt;
  Operator3 u_sample;
  if (amp == 0.0) {
    sample_dt = duration / static_cast<double>(opt.samples - 1);
    u_sample = unitary_step(h0, sample_dt);
  } else {
    if (!(drive_freq > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "rabi_trace: lab frame needs a positive drive frequency");
    }
    if (opt.steps_per_period == 0) {
      throw Error(ErrorKind::invalid_argument, "rabi_trace: steps_per_period must be positive");
    }
    const TimeDependentHamiltonian h(h0, {DriveTerm{drive_operator(ctx.chi), amp, drive_freq, 0.0}});
    const double period = kTwoPi / drive_freq;
    const double dt = period / static_cast<double>(opt.steps_per_period);
    const double fmax = h.max_frequency_hz();
    if (dt > 1.0 / (20.0 * fmax)) {
      std::ostringstream msg;
      msg << "rabi_trace: step " << dt << " s does not resolve f_max = " << fmax << " Hz";
      throw Error(ErrorKind::under_resolved, msg.str());
    }
    const double target = duration / static_cast<double>(opt.samples - 1);
    const auto m = static_cast<std::size_t>(std::max(1.0, std::round(target / period)));
    sample_dt = static_cast<double>(m) * period;
    u_sample = matrix_power(interval_propagator(h, 0.0, period, opt.steps_per_period), m);
  }
  for (std::size_t k = 0; k < opt.samples; ++k) {
    values.push_back(std::norm(vp.dot(psi)) - std::norm(vo.dot(psi)));
    psi = u_sample * psi;
  }
  return TimeTrace::uniform(0.0, sample_dt, std::move(values));
}

namespace {

double wrap_phase(double p) {
  p = std::remainder(p, kTwoPi);
  return p <= -kPi ? p + kTwoPi : p;
}

}  // namespace

FitResult fit_decaying_sinusoid(const TimeTrace& trace) {
  trace.validate();
  const std::size_t n = trace.size();
  if (n < 16) throw Error(ErrorKind::invalid_argument, "fit_decaying_sinusoid: need at least 16 samples");
  const double t0 = trace.times.front();
  const double dt = trace.dt();
  const double span = trace.times.back() - t0;

  // Linear detrend.
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trace.times[k] - t0;
    st += t;
    sy += trace.values[k];
    stt += t * t;
    sty += t * trace.values[k];
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * sty - st * sy) / (nn * stt - st * st);
  const double icpt = (sy - slope * st) / nn;
  std::size_t npad = 1;
  while (npad < 8 * n) npad <<= 1;
  std::vector<double> detrended(npad, 0.0);
  double var = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    detrended[k] = trace.values[k] - (icpt + slope * (trace.times[k] - t0));
    var += detrended[k] * detrended[k];
  }
  var /= nn;
  double ymax = 0.0;
  for (double v : trace.values) ymax = std::max(ymax, std::abs(v));

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, detrended);
  const std::size_t half = npad / 2;
  std::vector<double> power(half + 1);
  for (std::size_t k = 0; k <= half; ++k) power[k] = std::norm(spec[k]);
  std::size_t peak = 1;
  for (std::size_t k = 2; k <= half; ++k)
    if (power[k] > power[peak]) peak = k;
  std::vector<double> sorted(power.begin() + 1, power.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (!(power[peak] > 0.0) || !(power[peak] > 25.0 * median) || !(var > 1e-20 * ymax * ymax)) {
    throw Error(ErrorKind::no_oscillation, "fit_decaying_sinusoid: no spectral peak above the noise floor");
  }
  const double w_seed = kTwoPi * static_cast<double>(peak) / (static_cast<double>(npad) * dt);

  // Seed phase from the DFT at the peak, relative to t0.
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    acc += detrended[k] * std::polar(1.0, -w_seed * (trace.times[k] - t0));
  }
  const double phi_seed = std::arg(acc * std::complex<double>(0.0, 2.0));
  const double mean = sy / nn;
  const double yscale = std::sqrt(var) > 0 ? std::sqrt(2.0 * var) : 1.0;

  // Parameters in scaled units: tau = (t - t0)/span, y/yscale.
  std::vector<double> tau(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    tau[k] = (trace.times[k] - t0) / span;
    y[k] = trace.values[k] / yscale;
  }
  LeastSquaresProblem p;
  p.n_params = 5;
  p.n_residuals = n;
  p.residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& f) {
    f.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      f(static_cast<Eigen::Index>(k)) =
          x(0) * std::exp(-x(1) * tau[k]) * std::sin(x(2) * tau[k] + x(3)) + x(4) - y[k];
    }
  };
  p.jacobian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& j) {
    j.resize(static_cast<Eigen::Index>(n), 5);
    for (std::size_t k = 0; k < n; ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      const double e = std::exp(-x(1) * tau[k]);
      const double s = std::sin(x(2) * tau[k] + x(3));
      const double c = std::cos(x(2) * tau[k] + x(3));
      j(r, 0) = e * s;
      j(r, 1) = -tau[k] * x(0) * e * s;
      j(r, 2) = tau[k] * x(0) * e * c;
      j(r, 3) = x(0) * e * c;
      j(r, 4) = 1.0;
    }
  };
  Eigen::VectorXd x0(5);
  x0 << 1.0, 0.0, w_seed * span, phi_seed, mean / yscale;
  const LeastSquaresResult lsq = levenberg_marquardt(p, x0);

  FitResult r;
  double a = lsq.x(0) * yscale;
  double w = lsq.x(2) / span;
  double phi = lsq.x(3);
  if (w < 0.0) {
    w = -w;
    phi = kPi - phi;
  }
  if (a < 0.0) {
    a = -a;
    phi += kPi;
  }
  r.amplitude = a;
  r.decay_rate = lsq.x(1) / span;
  r.frequency = w;
  r.phase = wrap_phase(phi - w * t0);
  r.offset = lsq.x(4) * yscale;
  r.residual_norm = std::sqrt(lsq.rss) * yscale;
  r.seed_frequency = w_seed;
  const double bin = kTwoPi / (nn * dt);
  std::ostringstream note;
  if (!lsq.converged) {
    r.flagged = true;
    note << "least squares did not converge (status " << lsq.status << "); ";
  }
  if (std::abs(w - w_seed) > 0.5 * bin) {
    r.flagged = true;
    note << "fitted frequency moved more than half a spectral bin from the seed; ";
  }
  if (w * span / kTwoPi < 1.5) {
    r.flagged = true;
    note << "trace spans fewer than 1.5 periods; ";
  }
  r.note = note.str();
  return r;
}

const char* quantity_name(PowderQuantity q) {
  switch (q) {
    case PowderQuantity::resonance_formula: return "resonance_formula";
    case PowderQuantity::resonance_exact: return "resonance_exact";
    case PowderQuantity::nutation_formula: return "nutation_formula";
    case PowderQuantity::nutation_exact: return "nutation_exact";
  }
  return "unknown";
}

const char* weight_name(PowderWeight w) {
  switch (w) {
    case PowderWeight::unit: return "unit";
    case PowderWeight::moment2: return "moment2";
    case PowderWeight::moment2_polarization: return "moment2_polarization";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kChunks = 64;

bool needs_exact(const HistogramOptions& opt) {
  return opt.quantity == PowderQuantity::resonance_exact ||
         opt.quantity == PowderQuantity::nutation_exact || opt.weight != PowderWeight::unit;
}

// Fills per-orientation quantity and relative weight.
void evaluate_orientations(const FieldContext& ctx, const ZfsTensor& zfs, const PowderGrid& grid,
                           const HistogramOptions& opt, std::vector<double>& value,
                           std::vector<double>& weight) {
  const std::size_t n = grid.size();
  value.assign(n, 0.0);
  weight.assign(n, 1.0);
  const bool formula = opt.quantity == PowderQuantity::resonance_formula ||
                       opt.quantity == PowderQuantity::nutation_formula;
  if (formula) {
    const double eps = epsilon(zfs, ctx.b0, ctx.gamma_e);
    check_epsilon(eps, opt.validity_guard);
    const auto trig = kernels::OrientationTrig::from(grid.orientations);
    std::vector<double> h(n), nut(n);
    kernels::orientation_factors(kernels::active_isa(), trig, zfs.eta(), std::sin(ctx.chi),
                                 std::cos(ctx.chi), h, nut);
    const double we = ctx.omega_e();
    const double ewz = eps * zfs.omega_zfs();
    const double ew1 = eps * ctx.omega1();
    const double c = shift_coefficient(opt.form);
    for (std::size_t i = 0; i < n; ++i) {
      value[i] = opt.quantity == PowderQuantity::resonance_formula ? 2.0 * we + c * ewz * h[i]
                                                                  : ew1 * nut[i];
    }
  }
  if (!needs_exact(opt)) return;
  const double w1 = ctx.omega1();
  parallel_chunks(n, kChunks, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const TransitionSet t = exact_transitions(ctx, zfs, grid.orientations[i]);
      if (opt.quantity == PowderQuantity::resonance_exact) value[i] = t.overtone;
      if (opt.quantity == PowderQuantity::nutation_exact) value[i] = w1 * std::sqrt(t.moments.overtone);
      if (opt.weight != PowderWeight::unit) weight[i] = t.moments.overtone;
      if (opt.weight == PowderWeight::moment2_polarization) weight[i] *= opt.polarization[i];
    }
  });
}

}  // namespace

std::vector<double> powder_quantity(const FieldContext& ctx, const ZfsTensor& zfs,
                                    const PowderGrid& grid, const HistogramOptions& opt) {
  if (grid.size() == 0) throw Error(ErrorKind::empty_grid, "powder_quantity: empty grid");
  std::vector<double> value, weight;
  HistogramOptions o = opt;
  o.weight = PowderWeight::unit;
  evaluate_orientations(ctx, zfs, grid, o, value, weight);
  return value;
}

Spectrum powder_histogram(const FieldContext& ctx, const ZfsTensor& zfs, const PowderGrid& grid,
                          const UniformAxis& axis, const HistogramOptions& opt) {
  if (grid.size() == 0) throw Error(ErrorKind::empty_grid, "powder_histogram: empty grid");
  if (grid.weights.size() != grid.size()) {
    throw Error(ErrorKind::invalid_argument, "powder_histogram: grid weights missing");
  }
  if (axis.size < 10) throw Error(ErrorKind::invalid_argument, "powder_histogram: need at least 10 bins");
  if (opt.weight == PowderWeight::moment2_polarization && opt.polarization.size() != grid.size()) {
    throw Error(ErrorKind::invalid_argument, "powder_histogram: polarization length differs from grid");
  }
  const std::size_t n = grid.size();
  std::vector<double> value, weight;
  evaluate_orientations(ctx, zfs, grid, opt, value, weight);
  std::vector<std::int32_t> bin(n);
  kernels::bin_index(kernels::active_isa(), value, axis.start, 1.0 / axis.step,
                     static_cast<std::int32_t>(axis.size), bin);

  std::vector<std::vector<ExactSum>> partial(kChunks, std::vector<ExactSum>(axis.size));
  std::vector<ExactSum> total(kChunks);
  parallel_chunks(n, kChunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double m = weight[i] * grid.weights[i];
      total[c].add(m);
      if (bin[i] >= 0) partial[c][static_cast<std::size_t>(bin[i])].add(m);
    }
  });
  ExactSum all;
  for (const auto& t : total) all.merge(t);
  const double mass = all.value();

  Spectrum s;
  s.kind = (opt.quantity == PowderQuantity::nutation_formula ||
            opt.quantity == PowderQuantity::nutation_exact)
               ? AxisKind::nutation_rate
               : AxisKind::angular_frequency;
  s.axis = axis;
  s.intensity.assign(axis.size, 0.0);
  double inside = 0.0;
  for (std::size_t k = 0; k < axis.size; ++k) {
    ExactSum acc;
    for (std::size_t c = 0; c < kChunks; ++c) acc.merge(partial[c][k]);
    const double v = acc.value();
    inside += v;
    s.intensity[k] = mass != 0.0 ? std::abs(v / mass) / axis.step : 0.0;
  }
  s.normalized = mass != 0.0;
  s.set("model", "powder_histogram");
  s.set("quantity", quantity_name(opt.quantity));
  s.set("weight", weight_name(opt.weight));
  s.set("orientations", static_cast<double>(n));
  s.set("outside_fraction", mass != 0.0 ? 1.0 - inside / mass : 0.0);
  if (mass < 0.0) s.warnings.push_back("net weighted mass is negative; intensities show magnitudes");
  if (mass != 0.0 && std::abs(1.0 - inside / mass) > 1e-12) {
    s.warnings.push_back("part of the distribution lies outside the axis");
  }
  return s;
}

double compare_spectra(const Spectrum& a, const Spectrum& b, std::span<const AxisInterval> exclusions) {
  const double tol = 1e-12 * std::max(std::abs(a.axis.start), std::abs(a.axis.step) * a.axis.size);
  if (a.kind != b.kind || a.axis.size != b.axis.size || std::abs(a.axis.start - b.axis.start) > tol ||
      std::abs(a.axis.step - b.axis.step) > 1e-12 * std::abs(a.axis.step)) {
    throw Error(ErrorKind::axis_mismatch, "compare_spectra: spectra are on different axes");
  }
  if (a.intensity.size() != a.axis.size || b.intensity.size() != b.axis.size) {
    throw Error(ErrorKind::invalid_argument, "compare_spectra: intensity length differs from axis");
  }
  ExactSum ma, mb;
  for (std::size_t k = 0; k < a.axis.size; ++k) {
    ma.add(a.intensity[k]);
    mb.add(b.intensity[k]);
  }
  const double sa = ma.value();
  const double sb = mb.value();
  ExactSum d;
  for (std::size_t k = 0; k < a.axis.size; ++k) {
    const double lo = a.axis.lower_edge(k);
    const double hi = a.axis.upper_edge(k);
    bool skip = false;
    for (const auto& iv : exclusions) {
      if (hi > iv.lo && lo < iv.hi) skip = true;
    }
    if (skip) continue;
    const double pa = sa != 0.0 ? a.intensity[k] / sa : 0.0;
    const double pb = sb != 0.0 ? b.intensity[k] / sb : 0.0;
    d.add(std::abs(pa - pb));
  }
  return d.value();
}

}  // namespace overtone
