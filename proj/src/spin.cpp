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

#include "overtone/spin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "overtone/errors.hpp"
#include "overtone/units.hpp"

namespace overtone {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::hermiticity: return "hermiticity-violation";
    case ErrorKind::division_by_zero: return "division-by-zero";
    case ErrorKind::perturbation_regime: return "perturbation-regime";
    case ErrorKind::under_resolved: return "under-resolved";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::no_oscillation: return "no-oscillation";
    case ErrorKind::empty_grid: return "empty-grid";
    case ErrorKind::axis_mismatch: return "axis-mismatch";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

bool is_numeric_validity(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hermiticity:
    case ErrorKind::division_by_zero:
    case ErrorKind::perturbation_regime:
    case ErrorKind::under_resolved:
    case ErrorKind::degeneracy:
    case ErrorKind::no_oscillation:
    case ErrorKind::non_convergence:
      return true;
    default:
      return false;
  }
}

namespace {

SpinOperators build_spin1() {
  const double r = 1.0 / std::sqrt(2.0);
  const cdouble i(0.0, 1.0);
  SpinOperators s;
  s.sx << 0, r, 0,
          r, 0, r,
          0, r, 0;
  s.sy << 0, -i * r, 0,
          i * r, 0, -i * r,
          0, i * r, 0;
  s.sz << 1, 0, 0,
          0, 0, 0,
          0, 0, -1;
  const Operator3 id = Operator3::Identity();
  const Operator3 sp = s.sx + i * s.sy;
  const Operator3 sm = s.sx - i * s.sy;
  s.t2[2] = (3.0 * s.sz * s.sz - 2.0 * id) / std::sqrt(6.0);
  s.t2[3] = -(s.sz * sp + sp * s.sz) / 2.0;
  s.t2[1] = (s.sz * sm + sm * s.sz) / 2.0;
  s.t2[4] = sp * sp / 2.0;
  s.t2[0] = sm * sm / 2.0;
  return s;
}

}  // namespace

const SpinOperators& spin1_operators() {
  static const SpinOperators ops = build_spin1();
  return ops;
}

Operator3 commutator(const Operator3& a, const Operator3& b) { return a * b - b * a; }

bool is_hermitian(const Operator3& h, double rel_tol) {
  const double scale = std::max(h.norm(), 1.0);
  return (h - h.adjoint()).norm() <= rel_tol * scale;
}

bool is_unitary(const Operator3& u, double tol) {
  return (u * u.adjoint() - Operator3::Identity()).norm() <= tol;
}

int basis_index(int label) {
  switch (label) {
    case 1: return 0;
    case 0: return 1;
    case -1: return 2;
    default: throw Error(ErrorKind::invalid_argument, "spin-1 label must be +1, 0 or -1");
  }
}

EigenSystem eig_adiabatic(const Operator3& h) {
  if (!h.allFinite() || !is_hermitian(h)) {
    throw Error(ErrorKind::hermiticity, "eig_adiabatic: input is not hermitian");
  }
  const Operator3 hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator3> es(hs);
  const auto& ev = es.eigenvalues();
  const double scale = std::max({std::abs(ev(0)), std::abs(ev(2)), 1e-300});
  if (ev(1) - ev(0) <= 1e-14 * scale || ev(2) - ev(1) <= 1e-14 * scale) {
    throw Error(ErrorKind::degeneracy, "eig_adiabatic: degenerate eigenvalues leave the labels undefined");
  }
  const Operator3& v = es.eigenvectors();
  Eigen::Matrix3d overlap;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) overlap(i, k) = std::norm(v(i, k));

  // perm[i] = eigenvector column assigned to basis state i.
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> best = perm;
  double best_score = -1.0;
  double second_score = -1.0;
  do {
    double score = overlap(0, perm[0]) + overlap(1, perm[1]) + overlap(2, perm[2]);
    if (score > best_score) {
      second_score = best_score;
      best_score = score;
      best = perm;
    } else if (score > second_score) {
      second_score = score;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best_score - second_score < 1e-12) {
    throw Error(ErrorKind::degeneracy,
                "eig_adiabatic: two eigenvectors share the same maximal Zeeman overlap");
  }

  EigenSystem out;
  for (int i = 0; i < 3; ++i) {
    State3 col = v.col(best[i]);
    // Fix the gauge so the dominant Zeeman component is real and positive.
    const cdouble c = col(i);
    if (std::abs(c) > 0.0) col *= std::conj(c) / std::abs(c);
    out.vectors.col(i) = col;
    out.values(i) = es.eigenvalues()(best[i]);
  }
  return out;
}

Operator3 unitary_step(const Operator3& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Operator3> es(0.5 * (h + h.adjoint()));
  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * dt);
  const Operator3& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

TimeDependentHamiltonian::TimeDependentHamiltonian(Operator3 h0, std::vector<DriveTerm> drives)
    : h0_(std::move(h0)), drives_(std::move(drives)) {
  if (!is_hermitian(h0_)) {
    throw Error(ErrorKind::hermiticity, "time-dependent Hamiltonian: static part not hermitian");
  }
  for (const auto& d : drives_) {
    if (!is_hermitian(d.op)) {
      throw Error(ErrorKind::hermiticity, "time-dependent Hamiltonian: drive operator not hermitian");
    }
  }
}

Operator3 TimeDependentHamiltonian::at(double t) const {
  Operator3 h = h0_;
  for (const auto& d : drives_) h += d.amplitude * std::cos(d.omega * t + d.phase) * d.op;
  return h;
}

Operator3 TimeDependentHamiltonian::step_average(double t0, double t1) const {
  Operator3 h = h0_;
  const double dt = t1 - t0;
  for (const auto& d : drives_) {
    double avg;
    if (d.omega == 0.0 || dt == 0.0) {
      avg = std::cos(d.omega * t0 + d.phase);
    } else {
      avg = (std::sin(d.omega * t1 + d.phase) - std::sin(d.omega * t0 + d.phase)) /
            (d.omega * dt);
    }
    h += d.amplitude * avg * d.op;
  }
  return h;
}

double TimeDependentHamiltonian::max_frequency_hz() const {
  Eigen::SelfAdjointEigenSolver<Operator3> es(h0_, Eigen::EigenvaluesOnly);
  double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  double w = 0.0;
  for (const auto& d : drives_) {
    Eigen::SelfAdjointEigenSolver<Operator3> ed(d.op, Eigen::EigenvaluesOnly);
    const double rho = ed.eigenvalues().cwiseAbs().maxCoeff();
    spread += 2.0 * std::abs(d.amplitude) * rho;
    w = std::max(w, std::abs(d.omega));
  }
  return std::max(spread, w) / kTwoPi;
}

std::vector<State3> propagate(const TimeDependentHamiltonian& h, const State3& psi0,
                              std::span<const double> t_grid, double dt_max) {
  if (!(dt_max > 0.0)) throw Error(ErrorKind::invalid_argument, "propagate: dt_max must be positive");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::invalid_argument, "propagate: initial state is not normalized");
  }
  const double fmax = h.max_frequency_hz();
  if (fmax > 0.0 && dt_max > 1.0 / (20.0 * fmax)) {
    std::ostringstream msg;
    msg << "propagate: dt_max " << dt_max << " s exceeds 1/(20 f_max) = " << 1.0 / (20.0 * fmax)
        << " s";
    throw Error(ErrorKind::under_resolved, msg.str());
  }
  std::vector<State3> out;
  if (t_grid.empty()) return out;
  out.reserve(t_grid.size());
  State3 psi = psi0;
  out.push_back(psi);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double t0 = t_grid[k - 1];
    const double span = t_grid[k] - t0;
    if (!(span > 0.0)) throw Error(ErrorKind::invalid_argument, "propagate: time grid must increase");
    const auto n = static_cast<std::size_t>(std::ceil(span / dt_max - 1e-9));
    psi = interval_propagator(h, t0, span, std::max<std::size_t>(n, 1)) * psi;
    out.push_back(psi);
  }
  return out;
}

Operator3 interval_propagator(const TimeDependentHamiltonian& h, double t0, double duration,
                              std::size_t steps) {
  if (steps == 0) throw Error(ErrorKind::invalid_argument, "interval_propagator: zero steps");
  const double dt = duration / static_cast<double>(steps);
  Operator3 u = Operator3::Identity();
  for (std::size_t s = 0; s < steps; ++s) {
    const double a = t0 + dt * static_cast<double>(s);
    const double b = t0 + dt * static_cast<double>(s + 1);
    u = unitary_step(h.step_average(a, b), b - a) * u;
  }
  return u;
}

Operator3 matrix_power(const Operator3& u, std::size_t n) {
  Operator3 result = Operator3::Identity();
  Operator3 base = u;
  while (n > 0) {
    if (n & 1u) result = base * result;
    base = base * base;
    n >>= 1u;
  }
  return result;
}

TimeTrace TimeTrace::uniform(double t0, double dt, std::vector<double> values) {
  TimeTrace tr;
  tr.times.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) tr.times[k] = t0 + dt * static_cast<double>(k);
  tr.values = std::move(values);
  return tr;
}

double TimeTrace::dt() const {
  if (times.size() < 2) return 0.0;
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

void TimeTrace::validate() const {
  if (times.size() != values.size()) {
    throw Error(ErrorKind::invalid_argument, "time trace: times and values differ in length");
  }
  if (times.size() < 2) return;
  const double step = dt();
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_argument, "time trace: times not increasing");
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double d = times[k] - times[k - 1];
    if (!(d > 0.0)) throw Error(ErrorKind::invalid_argument, "time trace: times not increasing");
    if (std::abs(d - step) > 1e-9 * step + 1e-12 * std::abs(times[k])) {
      throw Error(ErrorKind::invalid_argument, "time trace: grid not uniform");
    }
  }
}

}  // namespace overtone
