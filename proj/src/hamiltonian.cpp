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

#include "overtone/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "overtone/errors.hpp"

namespace overtone {

void FieldContext::validate() const {
  if (!std::isfinite(b0) || !std::isfinite(b1) || !std::isfinite(omega_mw) ||
      !std::isfinite(gamma_e) || !std::isfinite(chi)) {
    throw Error(ErrorKind::invalid_argument, "field context: non-finite parameter");
  }
  if (!(omega_e() > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "field context: omega_e = -gamma_e B0 must be positive");
  }
  if (chi < 0.0 || chi > kPi / 2 + 1e-12) {
    throw Error(ErrorKind::invalid_argument, "field context: chi must lie in [0, pi/2]");
  }
}

double shift_coefficient(SecondOrderForm form) {
  return form == SecondOrderForm::full_commutator ? 2.0 : 1.0;
}

void check_perturbative(double eps, const FghValues& v, double guard) {
  const double m = eps * std::max({std::abs(v.f), std::abs(v.g), 3.0 * std::abs(v.h_prime)});
  if (!(m < guard)) {
    std::ostringstream msg;
    msg << "perturbative guard violated: eps*max(|f|,|g|,3|h'|) = " << m << " >= " << guard;
    throw Error(ErrorKind::perturbation_regime, msg.str());
  }
}

void check_epsilon(double eps, double guard) {
  if (!(std::abs(eps) < guard)) {
    std::ostringstream msg;
    msg << "perturbative guard violated: eps = " << eps << " >= " << guard;
    throw Error(ErrorKind::perturbation_regime, msg.str());
  }
}

Operator3 drive_operator(double chi) {
  const auto& s = spin1_operators();
  return std::sin(chi) * s.sx + std::cos(chi) * s.sz;
}

Operator3 static_hamiltonian(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o) {
  const FghValues v = fgh(o, zfs.eta());
  const double wz = zfs.omega_zfs();
  const double we = ctx.omega_e();
  const double r = 1.0 / std::sqrt(2.0);
  Operator3 h;
  h << we + wz * v.h_prime, -r * wz * v.f, wz * v.g,
       -r * wz * std::conj(v.f), -2.0 * wz * v.h_prime, r * wz * v.f,
       wz * std::conj(v.g), r * wz * std::conj(v.f), -we + wz * v.h_prime;
  return h;
}

namespace {

struct Prepared {
  FghValues v;
  double eps;
  double wz;
};

Prepared prepare(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                 double guard) {
  Prepared p{fgh(o, zfs.eta()), epsilon(zfs, ctx.b0, ctx.gamma_e), zfs.omega_zfs()};
  check_perturbative(p.eps, p.v, guard);
  return p;
}

double second_order_scale(SecondOrderForm form) {
  return form == SecondOrderForm::full_commutator ? 1.0 : 0.5;
}

}  // namespace

Operator3 sw_generator(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                       double guard) {
  const Prepared p = prepare(ctx, zfs, o, guard);
  const double e = p.eps;
  const double r = 1.0 / std::sqrt(2.0);
  const cdouble f = p.v.f;
  const cdouble g = p.v.g;
  const double up = 1.0 + 3.0 * e * p.v.h_prime;
  const double dn = 1.0 - 3.0 * e * p.v.h_prime;
  Operator3 t;
  t << 0.0, -r * f / up, 0.5 * g,
       r * std::conj(f) / up, 0.0, r * f / dn,
       -0.5 * std::conj(g), -r * std::conj(f) / dn, 0.0;
  return e * t;
}

Operator3 sw_single_quantum_couplings(const FieldContext& ctx, const ZfsTensor& zfs,
                                      const Orientation& o, const PerturbationOptions& opt) {
  const Prepared p = prepare(ctx, zfs, o, opt.validity_guard);
  const double k = second_order_scale(opt.form) * p.eps * p.wz * 3.0 * std::sqrt(2.0) / 4.0;
  const cdouble c = k * std::conj(p.v.f) * p.v.g;
  Operator3 m = Operator3::Zero();
  m(0, 1) = c;
  m(1, 0) = std::conj(c);
  m(1, 2) = c;
  m(2, 1) = std::conj(c);
  return m;
}

Operator3 sw_static(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                    const PerturbationOptions& opt) {
  const Prepared p = prepare(ctx, zfs, o, opt.validity_guard);
  const double we = ctx.omega_e();
  const double shift = second_order_scale(opt.form) * p.eps * p.wz * p.v.h;
  Operator3 m = Operator3::Zero();
  m(0, 0) = we + p.wz * p.v.h_prime + shift;
  m(1, 1) = -2.0 * p.wz * p.v.h_prime;
  m(2, 2) = -we + p.wz * p.v.h_prime - shift;
  return m + sw_single_quantum_couplings(ctx, zfs, o, opt);
}

SwSpinOperators sw_spin_operators(const FieldContext& ctx, const ZfsTensor& zfs,
                                  const Orientation& o, double guard) {
  const Prepared p = prepare(ctx, zfs, o, guard);
  const auto& s = spin1_operators();
  const cdouble f = p.v.f;
  const cdouble g = p.v.g;
  const double rf = f.real();
  const double r = std::sqrt(2.0) / 2.0;
  Operator3 dx;
  dx << -rf, r * g, -f,
        r * std::conj(g), 2.0 * rf, -r * g,
        -std::conj(f), -r * std::conj(g), -rf;
  Operator3 dz;
  dz << 0.0, r * f, -g,
        r * std::conj(f), 0.0, -r * f,
        -std::conj(g), -r * std::conj(f), 0.0;
  return SwSpinOperators{s.sx + p.eps * dx, s.sz + p.eps * dz};
}

Operator3 rotating_frame_hamiltonian(const FieldContext& ctx, const ZfsTensor& zfs,
                                     const Orientation& o, const PerturbationOptions& opt) {
  const Prepared p = prepare(ctx, zfs, o, opt.validity_guard);
  const double d11 = ctx.delta_omega() + second_order_scale(opt.form) * p.eps * p.wz * p.v.h;
  const cdouble corner =
      -p.eps * ctx.omega1() * (p.v.f * std::sin(ctx.chi) + p.v.g * std::cos(ctx.chi));
  Operator3 m = Operator3::Zero();
  m(0, 0) = d11;
  m(1, 1) = -3.0 * p.wz * p.v.h_prime;
  m(2, 2) = -d11;
  m(0, 2) = corner;
  m(2, 0) = std::conj(corner);
  return m + p.wz * p.v.h_prime * Operator3::Identity();
}

}  // namespace overtone
