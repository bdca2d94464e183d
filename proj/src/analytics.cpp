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

#include "overtone/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "overtone/errors.hpp"
#include "overtone/kernels.hpp"

namespace overtone {

double overtone_resonance(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                          const PerturbationOptions& opt) {
  const double eps = epsilon(zfs, ctx.b0, ctx.gamma_e);
  check_epsilon(eps, opt.validity_guard);
  const FghValues v = fgh(o, zfs.eta());
  return 2.0 * ctx.omega_e() + shift_coefficient(opt.form) * eps * zfs.omega_zfs() * v.h;
}

double overtone_nutation(const FieldContext& ctx, const ZfsTensor& zfs, const Orientation& o,
                         double guard) {
  const double eps = epsilon(zfs, ctx.b0, ctx.gamma_e);
  check_epsilon(eps, guard);
  const FghValues v = fgh(o, zfs.eta());
  return eps * ctx.omega1() * std::abs(v.f * std::sin(ctx.chi) + v.g * std::cos(ctx.chi));
}

double overtone_shift_eta0(double beta, double eps_omega_zfs, SecondOrderForm form) {
  const double s = std::sin(beta);
  const double c = std::cos(beta);
  return shift_coefficient(form) * eps_omega_zfs * 2.25 * s * s * (4.0 * c * c + s * s);
}

namespace {

// Full width of the eta = 0 line, 6 eps omega_zfs for the full-commutator form.
double line_span(double eps_omega_zfs, SecondOrderForm form) {
  return 3.0 * shift_coefficient(form) * eps_omega_zfs;
}

}  // namespace

double lineshape_density(double omega_offset, double eps_omega_zfs, SecondOrderForm form) {
  const double w = line_span(eps_omega_zfs, form);
  if (!(w > 0.0)) return 0.0;
  const double q = omega_offset / w;
  if (q < 0.0 || q >= 1.0) return 0.0;
  const double r = 1.0 - q;
  const double sr = std::sqrt(r);
  // Normalized prefactor sqrt(3)/36 per eps*omega_zfs on the full-commutator axis.
  const double pref = std::sqrt(3.0) / 6.0 / w;
  double bracket = 1.0 / std::sqrt(1.0 + 2.0 * sr);
  if (q > 0.75) bracket += 1.0 / std::sqrt(std::max(1.0 - 2.0 * sr, 0.0));
  return pref / sr * bracket;
}

double lineshape_cdf(double omega_offset, double eps_omega_zfs, SecondOrderForm form) {
  const double w = line_span(eps_omega_zfs, form);
  if (!(w > 0.0)) return omega_offset >= 0.0 ? 1.0 : 0.0;
  double q = omega_offset / w;
  double out = 0.0;
  kernels::scalar::powder_h_cdf(&q, &out, 1);
  return out;
}

LineshapePreimages lineshape_preimages(double omega_offset, double eps_omega_zfs,
                                       SecondOrderForm form) {
  const double w = line_span(eps_omega_zfs, form);
  const double q = omega_offset / w;
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "lineshape_preimages: shift outside the line support");
  }
  const double sr = std::sqrt(1.0 - q);
  LineshapePreimages p;
  p.x1 = -std::sqrt((1.0 + 2.0 * sr) / 3.0);
  if (q >= 0.75) p.x2 = -std::sqrt(std::max((1.0 - 2.0 * sr) / 3.0, 0.0));
  return p;
}

namespace {

void put_point_mass(Spectrum& s, double x) {
  const long k = s.axis.locate(x);
  if (k >= 0) s.intensity[static_cast<std::size_t>(k)] = 1.0 / s.axis.step;
}

}  // namespace

Spectrum lineshape_frequency(const FieldContext& ctx, const ZfsTensor& zfs, const UniformAxis& axis,
                             const PerturbationOptions& opt) {
  Spectrum s;
  s.kind = AxisKind::angular_frequency;
  s.axis = axis;
  s.intensity.assign(axis.size, 0.0);
  s.normalized = true;
  const double we = ctx.omega_e();
  const double eps = epsilon(zfs, ctx.b0, ctx.gamma_e);
  check_epsilon(eps, opt.validity_guard);
  const double ewz = eps * zfs.omega_zfs();
  s.set("model", "lineshape_frequency");
  s.set("second_order", opt.form == SecondOrderForm::full_commutator ? "full-commutator" : "half_commutator");
  s.set("omega_e_rad_s", we);
  s.set("eps_omega_zfs_rad_s", ewz);
  s.set("eta", zfs.eta());
  if (std::abs(zfs.eta()) > 0.02) {
    s.warnings.push_back("closed-form lineshape is the eta -> 0 limit; |eta| = " +
                         format_double(std::abs(zfs.eta())));
  }
  const double w = line_span(ewz, opt.form);
  if (!(w > 0.0)) {
    put_point_mass(s, 2.0 * we);
    return s;
  }
  std::vector<double> q(axis.size + 1);
  std::vector<double> cdf(axis.size + 1);
  for (std::size_t k = 0; k <= axis.size; ++k) q[k] = (axis.lower_edge(k) - 2.0 * we) / w;
  kernels::powder_h_cdf(kernels::active_isa(), q, cdf);
  for (std::size_t k = 0; k < axis.size; ++k) {
    s.intensity[k] = std::max(cdf[k + 1] - cdf[k], 0.0) / axis.step;
  }
  return s;
}

FieldSupport field_support(double omega_mw, const ZfsTensor& zfs, double gamma_e,
                           SecondOrderForm form) {
  const double g = std::abs(gamma_e);
  const double wz = zfs.omega_zfs();
  FieldSupport fs;
  fs.b_half = omega_mw / (2.0 * g);
  const double disc = omega_mw * omega_mw - 24.0 * shift_coefficient(form) * wz * wz;
  fs.b_edge = disc >= 0.0 ? (omega_mw + std::sqrt(disc)) / (4.0 * g) : omega_mw / (4.0 * g);
  return fs;
}

Spectrum field_profile(double omega_mw, const ZfsTensor& zfs, double gamma_e, const UniformAxis& axis,
                       FieldProfileMode mode, const PerturbationOptions& opt) {
  Spectrum s;
  s.kind = AxisKind::field;
  s.axis = axis;
  s.intensity.assign(axis.size, 0.0);
  s.set("model", "field_profile");
  s.set("mode", mode == FieldProfileMode::density ? "density" : "raw_substitution");
  s.set("second_order", opt.form == SecondOrderForm::full_commutator ? "full-commutator" : "half_commutator");
  s.set("omega_mw_rad_s", omega_mw);
  s.set("omega_zfs_rad_s", zfs.omega_zfs());
  s.set("eta", zfs.eta());
  if (std::abs(zfs.eta()) > 0.02) {
    s.warnings.push_back("closed-form lineshape is the eta -> 0 limit; |eta| = " +
                         format_double(std::abs(zfs.eta())));
  }
  const double g = std::abs(gamma_e);
  const double wz = zfs.omega_zfs();
  const double c = shift_coefficient(opt.form);
  const double b_turn = omega_mw / (4.0 * g);
  if (axis.size > 0 && axis.start > 0.0) {
    const double eps_lo = wz / (g * axis.start);
    if (!(eps_lo < opt.validity_guard)) {
      s.warnings.push_back("field grid leaves the perturbative regime: eps = " + format_double(eps_lo));
    }
  }
  if (mode == FieldProfileMode::raw_substitution) {
    s.normalized = false;
    for (std::size_t k = 0; k < axis.size; ++k) {
      const double b = axis.center(k);
      const double we = g * b;
      s.intensity[k] = lineshape_density(omega_mw - 2.0 * we, wz * wz / we, opt.form);
    }
    return s;
  }
  s.normalized = true;
  if (wz == 0.0) {
    put_point_mass(s, omega_mw / (2.0 * g));
    return s;
  }
  // q(B) = h/3 with omega_mw = 2 omega_e + c omega_zfs^2 h / omega_e, decreasing for B > b_turn.
  auto q_of = [&](double b) {
    if (b <= b_turn) return 2.0;
    const double we = g * b;
    return (omega_mw - 2.0 * we) * we / (3.0 * c * wz * wz);
  };
  std::vector<double> q(axis.size + 1);
  std::vector<double> cdf(axis.size + 1);
  for (std::size_t k = 0; k <= axis.size; ++k) q[k] = q_of(axis.lower_edge(k));
  kernels::powder_h_cdf(kernels::active_isa(), q, cdf);
  for (std::size_t k = 0; k < axis.size; ++k) {
    s.intensity[k] = std::max(cdf[k] - cdf[k + 1], 0.0) / axis.step;
  }
  return s;
}

ShiftWidth shift_width(double omega_mw, const ZfsTensor& zfs, double gamma_e, SecondOrderForm form) {
  const double g = std::abs(gamma_e);
  const double b_half = omega_mw / (2.0 * g);
  const double eps = epsilon(zfs, b_half, -g);
  const double scale = shift_coefficient(form) / 2.0;
  const double base = omega_mw / g * eps * eps * scale;
  return ShiftWidth{-base * 21.0 / 16.0, base * 3.0 / 8.0};
}

const char* geometry_name(NutationGeometry g) {
  return g == NutationGeometry::perpendicular ? "perpendicular" : "parallel";
}

double nutation_density(NutationGeometry geometry, double omega_nut, double eps_omega1) {
  if (!(eps_omega1 > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "nutation distribution needs eps*omega1 > 0");
  }
  const double x = omega_nut / (3.0 * eps_omega1);
  if (x < 0.0 || x >= 0.5) return 0.0;
  if (geometry == NutationGeometry::parallel) {
    return 1.0 / (3.0 * eps_omega1) / std::sqrt(1.0 - 2.0 * x);
  }
  const double root = std::sqrt(1.0 - 4.0 * x * x);
  return 1.0 / (3.0 * std::sqrt(2.0) * eps_omega1) / root *
         (std::sqrt(1.0 - root) + std::sqrt(1.0 + root));
}

double nutation_cdf(NutationGeometry geometry, double omega_nut, double eps_omega1) {
  if (!(eps_omega1 > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "nutation distribution needs eps*omega1 > 0");
  }
  double v = omega_nut / (1.5 * eps_omega1);
  double out = 0.0;
  if (geometry == NutationGeometry::parallel) {
    kernels::scalar::nutation_cdf_parallel(&v, &out, 1);
  } else {
    kernels::scalar::nutation_cdf_perpendicular(&v, &out, 1);
  }
  return out;
}

Spectrum nutation_distribution(NutationGeometry geometry, double eps_omega1, const UniformAxis& axis) {
  if (!(eps_omega1 > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "nutation distribution needs eps*omega1 > 0");
  }
  Spectrum s;
  s.kind = AxisKind::nutation_rate;
  s.axis = axis;
  s.intensity.assign(axis.size, 0.0);
  s.normalized = true;
  s.set("model", "nutation_distribution");
  s.set("geometry", geometry_name(geometry));
  s.set("eps_omega1_rad_s", eps_omega1);
  std::vector<double> v(axis.size + 1);
  std::vector<double> cdf(axis.size + 1);
  for (std::size_t k = 0; k <= axis.size; ++k) v[k] = axis.lower_edge(k) / (1.5 * eps_omega1);
  const auto isa = kernels::active_isa();
  if (geometry == NutationGeometry::parallel) {
    kernels::nutation_cdf_parallel(isa, v, cdf);
  } else {
    kernels::nutation_cdf_perpendicular(isa, v, cdf);
  }
  for (std::size_t k = 0; k < axis.size; ++k) {
    s.intensity[k] = std::max(cdf[k + 1] - cdf[k], 0.0) / axis.step;
  }
  return s;
}

}  // namespace overtone
