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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "overtone/spin.hpp"

namespace overtone {

struct ZfsTensor {
  double d = 0.0;  // rad/s
  double e = 0.0;  // rad/s

  static ZfsTensor from_de(double d, double e);
  double omega_zfs() const { return d / 3.0; }
  double eta() const { return d == 0.0 ? 0.0 : 3.0 * e / d; }
  void validate() const;
};

ZfsTensor pentacene_zfs();
ZfsTensor nv_zfs();

struct Orientation {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  // Wraps alpha, gamma into [0, 2pi) and checks beta in [0, pi].
  static Orientation make(double alpha, double beta, double gamma);
};

struct FghValues {
  std::complex<double> f;
  std::complex<double> g;
  double h_prime = 0.0;
  double h = 0.0;
};

FghValues fgh(const Orientation& o, double eta);

// omega_e = -gamma_e B0.
double larmor_frequency(double b0, double gamma_e);
double epsilon(const ZfsTensor& zfs, double b0, double gamma_e);

// R = Rz(alpha) Ry(beta) Rz(gamma); the lab-frame Cartesian tensor is R^T D_pas R.
Eigen::Matrix3d euler_rotation(const Orientation& o);
Eigen::Matrix3d zfs_cartesian_pas(const ZfsTensor& zfs);
Operator3 zfs_pas_matrix(const ZfsTensor& zfs);
Operator3 zfs_lab_matrix(const ZfsTensor& zfs, const Orientation& o);
// Spin-space rotation with U H_pas U^dagger = H_lab.
Operator3 spin_rotation(const Orientation& o);

// Coefficients c_q (q = -2..2 at index q + 2) with op = sum_q c_q T_{2,q} + trace part.
std::array<std::complex<double>, 5> t2_projection(const Operator3& op);

enum class PowderScheme { random, gauss_legendre };

struct PowderGrid {
  std::vector<Orientation> orientations;
  std::vector<double> weights;

  std::size_t size() const { return orientations.size(); }
  void validate() const;
};

PowderGrid powder_grid(PowderScheme scheme, std::size_t n, std::uint64_t seed,
                       std::size_t n_alpha = 1);

}  // namespace overtone
