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

#include "overtone/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "overtone/analytics.hpp"
#include "overtone/errors.hpp"
#include "overtone/fitting.hpp"
#include "overtone/numeric.hpp"
#include "overtone/oracle.hpp"

namespace overtone {

TripletPopulations TripletPopulations::zero_field(double px, double py, double pz) {
  TripletPopulations p{PopulationBasis::zero_field, {px, py, pz}};
  p.validate();
  return p;
}

TripletPopulations TripletPopulations::ms(double p0, double p_plus, double p_minus) {
  TripletPopulations p{PopulationBasis::ms, {p0, p_plus, p_minus}};
  p.validate();
  return p;
}

void TripletPopulations::validate() const {
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw Error(ErrorKind::invalid_argument, "triplet populations must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, "triplet populations must sum to 1");
  }
}

TripletPopulations pentacene_populations() { return TripletPopulations::zero_field(0.76, 0.16, 0.08); }
TripletPopulations nv_populations() { return TripletPopulations::ms(0.48, 0.26, 0.26); }

Operator3 pas_density(const TripletPopulations& pops) {
  Operator3 rho = Operator3::Zero();
  if (pops.basis == PopulationBasis::ms) {
    rho(0, 0) = pops.p_plus();
    rho(1, 1) = pops.p0();
    rho(2, 2) = pops.p_minus();
    return rho;
  }
  const double r = 1.0 / std::sqrt(2.0);
  const cdouble i(0.0, 1.0);
  const State3 tx(-r, 0.0, r);
  const State3 ty(i * r, 0.0, i * r);
  const State3 tz(0.0, 1.0, 0.0);
  rho = pops.values[0] * tx * tx.adjoint() + pops.values[1] * ty * ty.adjoint() +
        pops.values[2] * tz * tz.adjoint();
  return rho;
}

namespace {

TripletPopulations project(const EigenSystem& es, const Operator3& rho_lab) {
  TripletPopulations out;
  out.basis = PopulationBasis::ms;
  out.values[0] = std::real(es.vector(0).dot(rho_lab * es.vector(0)));
  out.values[1] = std::real(es.vector(1).dot(rho_lab * es.vector(1)));
  out.values[2] = std::real(es.vector(-1).dot(rho_lab * es.vector(-1)));
  return out;
}

}  // namespace

TripletPopulations eigenstate_populations(const FieldContext& ctx, const ZfsTensor& zfs,
                                          const Orientation& o, const TripletPopulations& pops) {
  pops.validate();
  const Operator3 u = spin_rotation(o);
  const Operator3 rho = u * pas_density(pops) * u.adjoint();
  return project(eig_adiabatic(static_hamiltonian(ctx, zfs, o)), rho);
}

PolarizationMap overtone_polarization_map(const FieldContext& ctx, const ZfsTensor& zfs,
                                          const PowderGrid& grid, const TripletPopulations& pops,
                                          PolarizationWeighting weighting) {
  grid.validate();
  pops.validate();
  const std::size_t n = grid.size();
  PolarizationMap map;
  map.weighting = weighting;
  map.difference.assign(n, 0.0);
  map.normalized.assign(n, 0.0);
  std::vector<double> weight(n, 1.0);
  const Operator3 rho_pas = pas_density(pops);
  const Operator3 op = drive_operator(ctx.chi);
  parallel_chunks(n, 64, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Orientation& o = grid.orientations[i];
      const Operator3 u = spin_rotation(o);
      const EigenSystem es = eig_adiabatic(static_hamiltonian(ctx, zfs, o));
      const TripletPopulations p = project(es, u * rho_pas * u.adjoint());
      const double pair = p.p_plus() + p.p_minus();
      map.difference[i] = p.p_plus() - p.p_minus();
      map.normalized[i] = pair > 0.0 ? map.difference[i] / pair : 0.0;
      if (weighting == PolarizationWeighting::triplet_fraction) {
        weight[i] = pair;
      } else if (weighting == PolarizationWeighting::overtone_moment) {
        weight[i] = std::norm(es.vector(1).dot(op * es.vector(-1)));
      }
    }
  });
  ExactSum num, num_norm, den;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight[i] * grid.weights[i];
    num.add(w * map.difference[i]);
    num_norm.add(w * map.normalized[i]);
    den.add(w);
  }
  const double d = den.value();
  map.average = d != 0.0 ? num.value() / d : 0.0;
  map.average_normalized = d != 0.0 ? num_norm.value() / d : 0.0;
  return map;
}

namespace {

struct Gaps {
  std::array<double, 3> gap;         // sq_plus, sq_minus, overtone
  std::array<double, 3> slope;       // d gap / d B
  std::array<double, 3> moment;      // squared transition moments
  std::array<double, 3> population;  // lower minus upper population
};

Gaps gaps_at(const ZfsTensor& zfs, const Orientation& o, double b, const FieldContext& tmpl,
             const Operator3& rho_lab, const Operator3& op) {
  FieldContext c = tmpl;
  c.b0 = b;
  const EigenSystem es = eig_adiabatic(static_hamiltonian(c, zfs, o));
  const auto& sz = spin1_operators().sz;
  const double g = -c.gamma_e;
  std::array<State3, 3> v{es.vector(1), es.vector(0), es.vector(-1)};
  std::array<double, 3> dz, pop;
  for (int k = 0; k < 3; ++k) {
    dz[k] = g * std::real(v[k].dot(sz * v[k]));
    pop[k] = std::real(v[k].dot(rho_lab * v[k]));
  }
  Gaps out;
  out.gap = {es.values(0) - es.values(1), es.values(1) - es.values(2), es.values(0) - es.values(2)};
  out.slope = {dz[0] - dz[1], dz[1] - dz[2], dz[0] - dz[2]};
  out.moment = {std::norm(v[0].dot(op * v[1])), std::norm(v[1].dot(op * v[2])),
                std::norm(v[0].dot(op * v[2]))};
  out.population = {pop[1] - pop[0], pop[2] - pop[1], pop[2] - pop[0]};
  return out;
}

}  // namespace

Spectrum echo_field_sweep(const FieldContext& ctx, const ZfsTensor& zfs, const PowderGrid& grid,
                          const TripletPopulations& pops, const UniformAxis& b_axis,
                          double excitation_bandwidth, const EchoOptions& opt) {
  if (!(excitation_bandwidth > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "echo_field_sweep: bandwidth must be positive");
  }
  if (b_axis.size == 0 || !(b_axis.start > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "echo_field_sweep: field axis must be positive and nonempty");
  }
  grid.validate();
  pops.validate();
  const std::size_t n = grid.size();
  const std::size_t nb = b_axis.size;
  const Operator3 rho_pas = pas_density(pops);
  const Operator3 op = drive_operator(ctx.chi);
  const double lo = b_axis.start;
  const double hi = b_axis.end();
  const double pad = 0.05 * (hi - lo);
  const double scan_lo = std::max(lo - pad, 0.5 * lo);
  const double scan_hi = hi + pad;
  constexpr std::size_t kScan = 24;
  constexpr std::size_t kChunks = 64;
  std::array<bool, 3> use{opt.include_single_quantum, opt.include_single_quantum, opt.include_overtone};

  std::vector<std::vector<ExactSum>> partial(kChunks, std::vector<ExactSum>(nb));
  parallel_chunks(n, kChunks, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    auto& acc = partial[chunk];
    for (std::size_t i = b; i < e; ++i) {
      const Orientation& o = grid.orientations[i];
      const Operator3 u = spin_rotation(o);
      const Operator3 rho = u * rho_pas * u.adjoint();
      std::array<double, kScan> bs;
      std::vector<Gaps> scan(kScan);
      for (std::size_t k = 0; k < kScan; ++k) {
        bs[k] = scan_lo + (scan_hi - scan_lo) * static_cast<double>(k) / (kScan - 1);
        scan[k] = gaps_at(zfs, o, bs[k], ctx, rho, op);
      }
      for (int t = 0; t < 3; ++t) {
        if (!use[static_cast<std::size_t>(t)]) continue;
        for (std::size_t k = 1; k < kScan; ++k) {
          const double r0 = scan[k - 1].gap[t] - ctx.omega_mw;
          const double r1 = scan[k].gap[t] - ctx.omega_mw;
          if ((r0 < 0.0) == (r1 < 0.0)) continue;
          // Safeguarded Newton on the bracket using the Hellmann-Feynman slope.
          double a = bs[k - 1], c = bs[k], fa = r0;
          double x = a - r0 * (c - a) / (r1 - r0);
          Gaps gx = gaps_at(zfs, o, x, ctx, rho, op);
          for (int it = 0; it < 60; ++it) {
            const double fx = gx.gap[t] - ctx.omega_mw;
            if ((fx < 0.0) == (fa < 0.0)) {
              a = x;
              fa = fx;
            } else {
              c = x;
            }
            double next = x - fx / gx.slope[t];
            if (!(next > a && next < c)) next = 0.5 * (a + c);
            const bool done = std::abs(next - x) <= 1e-13 * x;
            x = next;
            gx = gaps_at(zfs, o, x, ctx, rho, op);
            if (done) break;
          }
          const double half = excitation_bandwidth / std::max(std::abs(gx.slope[t]), 1e-300);
          const double w = grid.weights[i] * gx.moment[t] * gx.population[t];
          const double wlo = x - half;
          const double whi = x + half;
          const long first = std::max<long>(0, static_cast<long>(std::floor((wlo - lo) / b_axis.step)));
          const long last = std::min<long>(static_cast<long>(nb) - 1,
                                           static_cast<long>(std::floor((whi - lo) / b_axis.step)));
          for (long q = first; q <= last; ++q) {
            const auto qi = static_cast<std::size_t>(q);
            const double overlap = std::min(whi, b_axis.upper_edge(qi)) - std::max(wlo, b_axis.lower_edge(qi));
            if (overlap > 0.0) acc[qi].add(w * overlap / b_axis.step);
          }
        }
      }
    }
  });

  Spectrum s;
  s.kind = AxisKind::field;
  s.axis = b_axis;
  s.intensity.assign(nb, 0.0);
  s.normalized = false;
  ExactSum signed_total;
  bool negative = false;
  for (std::size_t q = 0; q < nb; ++q) {
    ExactSum a;
    for (std::size_t c = 0; c < kChunks; ++c) a.merge(partial[c][q]);
    const double v = a.value();
    signed_total.add(v);
    if (v < 0.0) negative = true;
    s.intensity[q] = std::abs(v);
  }
  s.set("model", "echo_field_sweep");
  s.set("omega_mw_rad_s", ctx.omega_mw);
  s.set("bandwidth_rad_s", excitation_bandwidth);
  s.set("orientations", static_cast<double>(n));
  s.set("signed_integral", signed_total.value() * b_axis.step);
  s.set("sign_convention", "lower minus upper population; intensity holds magnitudes");
  if (negative) s.warnings.push_back("some bins are emissive; intensity holds their magnitude");
  return s;
}

void IseConfig::validate() const {
  if (!(t_mw > 0.0)) throw Error(ErrorKind::invalid_argument, "ISE: t_mw must be positive");
  if (!(b_sweep >= 0.0)) throw Error(ErrorKind::invalid_argument, "ISE: b_sweep must be nonnegative");
  if (!(std::abs(electron_polarization) <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "ISE: |electron polarization| must not exceed 1");
  }
  if (!std::isfinite(omega1) || !std::isfinite(omega_0n) || !std::isfinite(hyperfine_secular) ||
      !std::isfinite(hyperfine_pseudosecular) || !std::isfinite(detuning_offset)) {
    throw Error(ErrorKind::invalid_argument, "ISE: non-finite parameter");
  }
}

IseShot ise_shot_reduced(double omega, const IseConfig& cfg) {
  cfg.validate();
  using M4 = Eigen::Matrix4d;
  // Basis |e, n> with e in {+1, -1} overtone pair and n in {up, down}.
  const Eigen::Matrix2d sz = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();
  const Eigen::Matrix2d sx = (Eigen::Matrix2d() << 0, 1, 1, 0).finished();
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  auto kron = [](const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
    M4 out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };
  const M4 ez = kron(sz, id);
  const M4 ex = kron(sx, id);
  const M4 iz = kron(id, 0.5 * sz);
  const M4 fixed = 0.5 * omega * ex + cfg.omega_0n * iz + cfg.hyperfine_secular * kron(sz, 0.5 * sz) +
                   cfg.hyperfine_pseudosecular * kron(sz, 0.5 * sx);

  const double range = 2.0 * std::abs(cfg.gamma_e) * cfg.b_sweep;
  const double dmax = std::abs(cfg.detuning_offset) + 0.5 * range;
  const double fmax = (dmax + std::abs(omega) + std::abs(cfg.omega_0n) + std::abs(cfg.hyperfine_secular) +
                       std::abs(cfg.hyperfine_pseudosecular)) / kTwoPi;
  const double by_freq = std::ceil(20.0 * cfg.t_mw * fmax);
  const double by_sweep = std::ceil(std::sqrt(range * cfg.t_mw / 0.01));
  const double steps_d = std::max({by_freq, by_sweep, 1.0});
  if (steps_d > static_cast<double>(cfg.max_steps)) {
    std::ostringstream msg;
    msg << "ISE: sweep needs " << steps_d << " steps, above the limit of " << cfg.max_steps;
    throw Error(ErrorKind::under_resolved, msg.str());
  }
  const auto steps = static_cast<std::size_t>(steps_d);
  const double dt = cfg.t_mw / static_cast<double>(steps);

  Eigen::Matrix4cd rho = (0.25 * (M4::Identity() + cfg.electron_polarization * ez)).cast<cdouble>();
  const double before = 2.0 * std::real((rho * iz.cast<cdouble>()).trace());
  Eigen::SelfAdjointEigenSolver<M4> es;
  for (std::size_t k = 0; k < steps; ++k) {
    const double tm = (static_cast<double>(k) + 0.5) * dt;
    const double delta = cfg.detuning_offset + range * (tm / cfg.t_mw - 0.5);
    es.compute(fixed + 0.5 * delta * ez);
    Eigen::Vector4cd ph;
    for (int j = 0; j < 4; ++j) ph(j) = std::polar(1.0, -es.eigenvalues()(j) * dt);
    const Eigen::Matrix4cd v = es.eigenvectors().cast<cdouble>();
    const Eigen::Matrix4cd u = v * ph.asDiagonal() * v.adjoint();
    rho = u * rho * u.adjoint();
  }
  IseShot shot;
  shot.delta_nuclear_polarization = 2.0 * std::real((rho * iz.cast<cdouble>()).trace()) - before;
  shot.pseudo_nutation = omega;
  shot.steps = steps;
  return shot;
}

IseShot ise_shot(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                 const IseConfig& cfg) {
  FieldContext c = ctx;
  c.b1 = -2.0 * cfg.omega1 / c.gamma_e;
  const double omega = 2.0 * overtone_nutation(c, zfs, o);
  return ise_shot_reduced(omega, cfg);
}

TimeTrace ise_buildup(double transfer_per_shot, const IseConfig& cfg, double leakage) {
  if (!(cfg.rep_rate > 0.0)) throw Error(ErrorKind::invalid_argument, "ISE buildup: rep_rate must be positive");
  if (!(leakage >= 0.0 && leakage <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "ISE buildup: leakage must lie in [0, 1]");
  }
  std::vector<double> p(cfg.rep_count + 1, 0.0);
  for (std::size_t k = 0; k < cfg.rep_count; ++k) p[k + 1] = (1.0 - leakage) * p[k] + transfer_per_shot;
  return TimeTrace::uniform(0.0, 1.0 / cfg.rep_rate, std::move(p));
}

BuildupFit fit_buildup(const TimeTrace& trace, BuildupModel model) {
  trace.validate();
  const std::size_t n = trace.size();
  if (n < 4) throw Error(ErrorKind::invalid_argument, "fit_buildup: need at least 4 samples");
  const double t0 = 0.0;
  const double span = trace.times.back() - std::min(t0, trace.times.front());
  double ys = 0.0;
  for (double v : trace.values) ys = std::max(ys, std::abs(v));
  if (ys == 0.0) ys = 1.0;
  std::vector<double> tau(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    tau[k] = trace.times[k] / span;
    y[k] = trace.values[k] / ys;
  }
  const bool sat = model == BuildupModel::saturating;
  LeastSquaresProblem p;
  p.n_params = 2;
  p.n_residuals = n;
  p.residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& f) {
    f.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const double e = std::exp(-tau[k] / x(1));
      f(static_cast<Eigen::Index>(k)) = (sat ? x(0) * (1.0 - e) : x(0) * e) - y[k];
    }
  };
  p.jacobian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& j) {
    j.resize(static_cast<Eigen::Index>(n), 2);
    for (std::size_t k = 0; k < n; ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      const double e = std::exp(-tau[k] / x(1));
      const double de = e * tau[k] / (x(1) * x(1));
      j(r, 0) = sat ? 1.0 - e : e;
      j(r, 1) = sat ? -x(0) * de : x(0) * de;
    }
  };
  Eigen::VectorXd x0(2);
  if (sat) {
    x0 << y.back(), 0.3;
  } else {
    double tseed = 0.5;
    if (y.front() > 0 && y.back() > 0 && y.back() < y.front()) {
      tseed = (tau.back() - tau.front()) / std::log(y.front() / y.back());
    }
    x0 << y.front() * std::exp(tau.front() / tseed), tseed;
  }
  const LeastSquaresResult r = levenberg_marquardt(p, x0);

  BuildupFit fit;
  fit.model = model;
  fit.p_max = r.x(0) * ys;
  const double tc = r.x(1) * span;
  if (sat) {
    fit.t_build = tc;
  } else {
    fit.t1 = tc;
  }
  fit.converged = r.converged;
  fit.residual_norm = std::sqrt(r.rss) * ys;
  if (r.covariance_ok) {
    fit.p_max_err = std::sqrt(r.covariance(0, 0)) * ys;
    fit.time_err = std::sqrt(r.covariance(1, 1)) * span;
  } else {
    fit.p_max_err = fit.time_err = std::numeric_limits<double>::infinity();
  }
  std::ostringstream diag;
  diag << "status=" << r.status << " evaluations=" << r.evaluations
       << " residual_norm=" << format_double(fit.residual_norm);
  const double dt = trace.dt();
  if (!(tc > 0.5 * dt) || !(tc < 10.0 * span) || !r.covariance_ok || !(fit.time_err < tc)) {
    fit.identifiable = false;
    diag << "; time constant not identifiable from this trace";
  }
  if (!r.converged) diag << "; least squares did not converge";
  fit.diagnostics = diag.str();
  return fit;
}

double signal_ratio_estimate(double n_spins_ratio, double polarization_ratio, double epsilon_ratio) {
  if (!(n_spins_ratio > 0.0) || !(polarization_ratio > 0.0) || !(epsilon_ratio > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "signal_ratio_estimate: ratios must be positive");
  }
  return n_spins_ratio * polarization_ratio * epsilon_ratio;
}

}  // namespace overtone
