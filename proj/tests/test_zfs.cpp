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
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "overtone/errors.hpp"
#include "overtone/kernels.hpp"
#include "overtone/numeric.hpp"
#include "overtone/units.hpp"
#include "overtone/zfs.hpp"

using namespace overtone;

namespace {

Orientation random_orientation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Orientation::make(kTwoPi * u(rng), std::acos(1.0 - 2.0 * u(rng)), kTwoPi * u(rng));
}

}  // namespace

TEST_CASE("fgh at special orientations") {
  FghValues v = fgh(Orientation::make(0, 0, 0), 0.0);
  CHECK(std::abs(v.f) == 0.0);
  CHECK(std::abs(v.g) == 0.0);
  CHECK(v.h_prime == 1.0);
  CHECK(v.h == 0.0);

  v = fgh(Orientation::make(0, kPi / 2, 0), 0.0);
  CHECK(std::abs(v.f) < 1e-15);
  CHECK(v.g.real() == doctest::Approx(1.5));
  CHECK(v.h == doctest::Approx(9.0 / 4.0));

  v = fgh(Orientation::make(0, kPi / 4, 0), 0.0);
  CHECK(v.f.real() == doctest::Approx(1.5));
  CHECK(v.g.real() == doctest::Approx(0.75));
  CHECK(v.h == doctest::Approx(45.0 / 16.0));
}

TEST_CASE("fgh moduli are gamma independent at eta = 0") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const Orientation o = random_orientation(rng);
    const FghValues v = fgh(o, 0.0);
    const double s = std::sin(o.beta), c = std::cos(o.beta);
    CHECK(std::abs(std::abs(v.f) - 3.0 * s * std::abs(c)) < 1e-12);
    CHECK(std::abs(std::abs(v.g) - 1.5 * s * s) < 1e-12);
    const FghValues mirrored = fgh(Orientation::make(o.alpha, kPi - o.beta, o.gamma), 0.0);
    CHECK(std::abs(mirrored.h - v.h) < 1e-12);
  }
}

TEST_CASE("epsilon for the two presets") {
  CHECK(epsilon(pentacene_zfs(), 0.207, kGammaElectron) == doctest::Approx(0.080).epsilon(0.01));
  CHECK(epsilon(nv_zfs(), 0.207, kGammaElectron) == doctest::Approx(0.165).epsilon(0.01));
  CHECK(epsilon(ZfsTensor::from_de(0.0, 0.0), 0.207, kGammaElectron) == 0.0);
  CHECK_THROWS_AS(epsilon(nv_zfs(), 0.0, kGammaElectron), Error);
}

TEST_CASE("lab tensor at identity orientation is the PAS form") {
  const ZfsTensor z = pentacene_zfs();
  const auto& s = spin1_operators();
  const Operator3 pas = z.omega_zfs() * (3.0 * s.sz * s.sz - 2.0 * Operator3::Identity() +
                                         z.eta() * (s.sx * s.sx - s.sy * s.sy));
  CHECK((zfs_lab_matrix(z, Orientation::make(0, 0, 0)) - pas).norm() < 1e-12 * pas.norm());
  CHECK((zfs_pas_matrix(z) - pas).norm() < 1e-12 * pas.norm());
}

TEST_CASE("lab tensor is traceless and projects onto fgh") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ue(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const Orientation o = random_orientation(rng);
    const double eta = ue(rng);
    const ZfsTensor z = ZfsTensor::from_de(3.0, eta);
    const Operator3 lab = zfs_lab_matrix(z, o);
    CHECK(std::abs(lab.trace()) < 1e-12);
    // Matrix elements of the lab ZFS in terms of f, g, h' (omega_zfs = 1).
    const FghValues v = fgh(o, eta);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(lab(0, 0) - cdouble(v.h_prime)) < 1e-10);
    CHECK(std::abs(lab(1, 1) + 2.0 * v.h_prime) < 1e-10);
    CHECK(std::abs(lab(0, 1) + r * v.f) < 1e-10);
    CHECK(std::abs(lab(1, 2) - r * v.f) < 1e-10);
    CHECK(std::abs(lab(0, 2) - v.g) < 1e-10);
    const auto c = t2_projection(lab);
    const auto& s = spin1_operators();
    Operator3 rebuilt = Operator3::Zero();
    for (int q = -2; q <= 2; ++q) rebuilt += c[static_cast<std::size_t>(q + 2)] * s.t2q(q);
    CHECK((rebuilt - lab).norm() < 1e-10);
  }
}

TEST_CASE("spin rotation carries the PAS Hamiltonian to the lab frame") {
  std::mt19937_64 rng(3);
  const ZfsTensor z = ZfsTensor::from_de(3.0, 0.3);
  for (int k = 0; k < 100; ++k) {
    const Orientation o = random_orientation(rng);
    const Operator3 u = spin_rotation(o);
    CHECK(is_unitary(u));
    CHECK((u * zfs_pas_matrix(z) * u.adjoint() - zfs_lab_matrix(z, o)).norm() < 1e-12);
  }
}

TEST_CASE("powder grids") {
  const PowderGrid one = powder_grid(PowderScheme::gauss_legendre, 1, 0);
  REQUIRE(one.size() == 1);
  CHECK(one.orientations[0].beta == doctest::Approx(kPi / 2));
  CHECK(one.weights[0] == doctest::Approx(1.0));

  for (auto scheme : {PowderScheme::random, PowderScheme::gauss_legendre}) {
    const PowderGrid g = powder_grid(scheme, 40, 9, 3);
    ExactSum w;
    for (double x : g.weights) w.add(x);
    CHECK(w.value() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(powder_grid(PowderScheme::random, 0, 1), Error);
  const PowderGrid a = powder_grid(PowderScheme::random, 100, 42);
  const PowderGrid b = powder_grid(PowderScheme::random, 100, 42);
  CHECK(a.orientations[57].gamma == b.orientations[57].gamma);
}

TEST_CASE("Gauss-Legendre grid integrates h exactly") {
  const PowderGrid g = powder_grid(PowderScheme::gauss_legendre, 8, 0, 4);
  ExactSum acc;
  for (std::size_t i = 0; i < g.size(); ++i) acc.add(g.weights[i] * fgh(g.orientations[i], 0.0).h);
  CHECK(acc.value() == doctest::Approx(oracle::kMeanHEta0).epsilon(1e-13));
}

TEST_CASE("random powder mean of h") {
  const PowderGrid g = powder_grid(PowderScheme::random, 1000000, 2024);
  const auto trig = kernels::OrientationTrig::from(g.orientations);
  std::vector<double> h(g.size()), nut(g.size());
  kernels::orientation_factors(kernels::active_isa(), trig, 0.0, 1.0, 0.0, h, nut);
  ExactSum acc;
  for (std::size_t i = 0; i < g.size(); ++i) acc.add(g.weights[i] * h[i]);
  // Standard error of the mean is about 1e-3 here.
  CHECK(acc.value() == doctest::Approx(oracle::kMeanHEta0).epsilon(3e-3));
}
