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

#include "overtone/zfs.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <random>
#include <sstream>

#include "overtone/errors.hpp"
#include "overtone/units.hpp"

namespace overtone {

ZfsTensor ZfsTensor::from_de(double d, double e) {
  ZfsTensor z{d, e};
  z.validate();
  return z;
}

void ZfsTensor::validate() const {
  if (!std::isfinite(d) || !std::isfinite(e)) {
    throw Error(ErrorKind::invalid_argument, "ZFS parameters must be finite");
  }
  if (d == 0.0 && e != 0.0) {
    throw Error(ErrorKind::invalid_argument, "E must vanish when D = 0");
  }
  if (std::abs(eta()) > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "|eta| = " << std::abs(eta()) << " exceeds 1; reorder the principal axes";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

ZfsTensor pentacene_zfs() { return ZfsTensor::from_de(mhz_to_rad(1395.57), mhz_to_rad(53.35)); }
ZfsTensor nv_zfs() { return ZfsTensor::from_de(mhz_to_rad(2870.0), 0.0); }

Orientation Orientation::make(double alpha, double beta, double gamma) {
  if (!(beta >= 0.0 && beta <= kPi)) {
    throw Error(ErrorKind::invalid_argument, "orientation: beta must lie in [0, pi]");
  }
  auto wrap = [](double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
  };
  return Orientation{wrap(alpha), beta, wrap(gamma)};
}

FghValues fgh(const Orientation& o, double eta) {
  const double s = std::sin(o.beta);
  const double c = std::cos(o.beta);
  const double c2a = std::cos(2.0 * o.alpha);
  const double s2a = std::sin(2.0 * o.alpha);
  const std::complex<double> i(0.0, 1.0);
  FghValues v;
  v.f = std::polar(1.0, o.gamma) * (3.0 * s * c - eta * (c2a * s * c + i * s2a * s));
  v.g = std::polar(1.0, 2.0 * o.gamma) * 0.5 *
        (3.0 * s * s + eta * (c2a * (1.0 + c * c) + 2.0 * i * s2a * c));
  v.h_prime = 0.5 * ((3.0 * c * c - 1.0) + eta * c2a * s * s);
  v.h = std::norm(v.f) + std::norm(v.g);
  return v;
}

double larmor_frequency(double b0, double gamma_e) { return -gamma_e * b0; }

double epsilon(const ZfsTensor& zfs, double b0, double gamma_e) {
  const double we = larmor_frequency(b0, gamma_e);
  if (we == 0.0) {
    throw Error(ErrorKind::division_by_zero, "epsilon: Larmor frequency omega_e is zero");
  }
  return zfs.omega_zfs() / we;
}

namespace {

Eigen::Matrix3d rot_z(double a) {
  Eigen::Matrix3d r;
  r << std::cos(a), -std::sin(a), 0,
       std::sin(a), std::cos(a), 0,
       0, 0, 1;
  return r;
}

Eigen::Matrix3d rot_y(double a) {
  Eigen::Matrix3d r;
  r << std::cos(a), 0, std::sin(a),
       0, 1, 0,
       -std::sin(a), 0, std::cos(a);
  return r;
}

Operator3 exp_i_sz(double theta) {
  Operator3 u = Operator3::Zero();
  u(0, 0) = std::polar(1.0, theta);
  u(1, 1) = 1.0;
  u(2, 2) = std::polar(1.0, -theta);
  return u;
}

Operator3 cartesian_to_spin(const Eigen::Matrix3d& d) {
  const auto& s = spin1_operators();
  const std::array<const Operator3*, 3> op{&s.sx, &s.sy, &s.sz};
  Operator3 h = Operator3::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) h += d(a, b) * (*op[a]) * (*op[b]);
  return h;
}

}  // namespace

Eigen::Matrix3d euler_rotation(const Orientation& o) {
  return rot_z(o.alpha) * rot_y(o.beta) * rot_z(o.gamma);
}

Eigen::Matrix3d zfs_cartesian_pas(const ZfsTensor& zfs) {
  const double w = zfs.omega_zfs();
  const double eta = zfs.eta();
  return Eigen::Vector3d(w * (-1.0 + eta), w * (-1.0 - eta), 2.0 * w).asDiagonal();
}

Operator3 zfs_pas_matrix(const ZfsTensor& zfs) {
  return cartesian_to_spin(zfs_cartesian_pas(zfs));
}

Operator3 zfs_lab_matrix(const ZfsTensor& zfs, const Orientation& o) {
  const Eigen::Matrix3d r = euler_rotation(o);
  return cartesian_to_spin(r.transpose() * zfs_cartesian_pas(zfs) * r);
}

Operator3 spin_rotation(const Orientation& o) {
  const double c = std::cos(o.beta);
  const double s = std::sin(o.beta);
  const double r = s / std::sqrt(2.0);
  // exp(i beta Sy) in the |+1>, |0>, |-1> basis.
  Operator3 dy;
  dy << (1 + c) / 2, r, (1 - c) / 2,
        -r, c, r,
        (1 - c) / 2, -r, (1 + c) / 2;
  return exp_i_sz(o.gamma) * dy * exp_i_sz(o.alpha);
}

std::array<std::complex<double>, 5> t2_projection(const Operator3& op) {
  const auto& s = spin1_operators();
  std::array<std::complex<double>, 5> c{};
  for (int q = -2; q <= 2; ++q) {
    const Operator3& t = s.t2q(q);
    c[static_cast<std::size_t>(q + 2)] = (t.adjoint() * op).trace() / (t.adjoint() * t).trace();
  }
  return c;
}

void PowderGrid::validate() const {
  if (orientations.empty()) throw Error(ErrorKind::empty_grid, "powder grid is empty");
  if (weights.size() != orientations.size()) {
    throw Error(ErrorKind::invalid_argument, "powder grid: weights and orientations differ in length");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::invalid_argument, "powder grid: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12 * std::max<double>(1.0, weights.size() * 1e-4)) {
    throw Error(ErrorKind::invalid_argument, "powder grid: weights do not sum to 1");
  }
}

PowderGrid powder_grid(PowderScheme scheme, std::size_t n, std::uint64_t seed,
                       std::size_t n_alpha) {
  if (n == 0) throw Error(ErrorKind::empty_grid, "powder_grid: n must be at least 1");
  PowderGrid grid;
  if (scheme == PowderScheme::random) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> cosb(-1.0, 1.0);
    grid.orientations.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double a = angle(rng);
      const double b = std::acos(cosb(rng));
      const double g = angle(rng);
      grid.orientations.push_back(Orientation{a, b, g});
    }
    grid.weights.assign(n, 1.0 / static_cast<double>(n));
    return grid;
  }
  if (n_alpha == 0) throw Error(ErrorKind::empty_grid, "powder_grid: n_alpha must be at least 1");
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  if (table == nullptr) throw Error(ErrorKind::invalid_argument, "powder_grid: GL table allocation failed");
  const std::size_t total = n * n * n_alpha;
  grid.orientations.reserve(total);
  grid.weights.reserve(total);
  const double inv = 1.0 / static_cast<double>(n * n_alpha);
  for (std::size_t ia = 0; ia < n_alpha; ++ia) {
    const double a = kTwoPi * static_cast<double>(ia) / static_cast<double>(n_alpha);
    for (std::size_t ib = 0; ib < n; ++ib) {
      double x = 0.0;
      double w = 0.0;
      gsl_integration_glfixed_point(-1.0, 1.0, ib, &x, &w, table);
      const double b = std::acos(x);
      for (std::size_t ig = 0; ig < n; ++ig) {
        const double g = kTwoPi * static_cast<double>(ig) / static_cast<double>(n);
        grid.orientations.push_back(Orientation{a, b, g});
        grid.weights.push_back(0.5 * w * inv);
      }
    }
  }
  gsl_integration_glfixed_table_free(table);
  return grid;
}

}  // namespace overtone
