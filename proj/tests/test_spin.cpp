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
#include "overtone/spin.hpp"
#include "overtone/units.hpp"

using namespace overtone;

namespace {

Operator3 random_hermitian(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Operator3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = cdouble(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("spin-1 matrix elements") {
  const auto& s = spin1_operators();
  CHECK(s.sz(0, 0).real() == 1.0);
  CHECK(s.sx(0, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s.sz(1, 1) == cdouble(0.0));
  CHECK(s.sz(2, 2).real() == -1.0);
}

TEST_CASE("angular momentum algebra") {
  const auto& s = spin1_operators();
  const cdouble i(0.0, 1.0);
  CHECK((commutator(s.sx, s.sy) - i * s.sz).norm() < 1e-15);
  CHECK((commutator(s.sy, s.sz) - i * s.sx).norm() < 1e-15);
  CHECK((commutator(s.sz, s.sx) - i * s.sy).norm() < 1e-15);
  const Operator3 s2 = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
  CHECK((s2 - 2.0 * Operator3::Identity()).norm() < 1e-15);
  for (int q = -2; q <= 2; ++q) CHECK(std::abs(s.t2q(q).trace()) < 1e-15);
  const Operator3 t20 = 3.0 * s.sz * s.sz - 2.0 * Operator3::Identity();
  const cdouble ratio = s.t2q(0)(0, 0) / t20(0, 0);
  CHECK((s.t2q(0) - ratio * t20).norm() < 1e-14);
}

TEST_CASE("hermiticity and unitarity checks") {
  const auto& s = spin1_operators();
  CHECK(is_hermitian(s.sx));
  CHECK_FALSE(is_hermitian(s.sx + cdouble(0.0, 1.0) * Operator3::Identity()));
  CHECK(is_unitary(unitary_step(s.sx, 0.3)));
  CHECK(basis_index(1) == 0);
  CHECK(basis_index(-1) == 2);
  CHECK_THROWS_AS(basis_index(2), Error);
}

TEST_CASE("eig_adiabatic on diagonal input keeps Zeeman labels") {
  Operator3 h = Operator3::Zero();
  h(0, 0) = -3.0;
  h(1, 1) = 5.0;
  h(2, 2) = 1.0;
  const EigenSystem es = eig_adiabatic(h);
  CHECK(es.value(1) == doctest::Approx(-3.0));
  CHECK(es.value(0) == doctest::Approx(5.0));
  CHECK(es.value(-1) == doctest::Approx(1.0));
  CHECK(std::abs(es.vector(1)(0)) == doctest::Approx(1.0));
}

TEST_CASE("eig_adiabatic matches Cardano eigenvalues and perturbative labels") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Operator3 h0 = Operator3::Zero();
    h0(0, 0) = 1.0;
    h0(1, 1) = -0.2;
    h0(2, 2) = -1.0;
    const Operator3 h = h0 + 0.08 * random_hermitian(rng, 0.3);
    const EigenSystem es = eig_adiabatic(h);
    const auto ref = oracle::cardano_eigenvalues(h);
    std::array<double, 3> got{es.values(0), es.values(1), es.values(2)};
    std::sort(got.begin(), got.end());
    for (int k = 0; k < 3; ++k) CHECK(got[k] == doctest::Approx(ref[k]).epsilon(1e-10));
    // Small perturbation: label l sits on the eigenvector with the largest |l> overlap.
    for (int label : {1, 0, -1}) {
      const State3 v = es.vector(label);
      int best = 0;
      v.cwiseAbs().maxCoeff(&best);
      CHECK(best == basis_index(label));
      CHECK((h * v - es.value(label) * v).norm() < 1e-12);
    }
  }
}

TEST_CASE("eig_adiabatic rejects exact degeneracy") {
  CHECK_THROWS_AS(eig_adiabatic(Operator3::Identity()), Error);
}

TEST_CASE("propagate: stationary state picks up a phase") {
  const double w = kTwoPi * 1e6;
  const TimeDependentHamiltonian h(w * spin1_operators().sz);
  State3 psi0 = State3::Zero();
  psi0(0) = 1.0;
  const std::vector<double> t{0.0, 1e-7, 3.3e-7};
  const auto out = propagate(h, psi0, t, 1e-9);
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(std::norm(out[k](0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::arg(out[k](0) * std::polar(1.0, w * t[k])) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("propagate: three-level Rabi matches closed form") {
  const double w1 = kTwoPi * 2e6;
  const TimeDependentHamiltonian h(w1 * spin1_operators().sx);
  State3 psi0 = State3::Zero();
  psi0(0) = 1.0;
  std::vector<double> t;
  for (int k = 0; k <= 50; ++k) t.push_back(k * 2e-8);
  const auto out = propagate(h, psi0, t, 1e-9);
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(std::norm(out[k](2)) == doctest::Approx(oracle::rabi_minus_population(w1, t[k])).epsilon(1e-10));
    CHECK(out[k].norm() == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("unitary_step agrees with the Taylor exponential") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator3 h = random_hermitian(rng, 1.0);
    const double dt = 0.7;
    const Operator3 ref = oracle::expm(cdouble(0.0, -dt) * h);
    CHECK((unitary_step(h, dt) - ref).norm() < 1e-12);
  }
}

TEST_CASE("driven propagation conserves the norm and refuses coarse steps") {
  const auto& s = spin1_operators();
  const double w = kTwoPi * 1e9;
  const TimeDependentHamiltonian h(Operator3(w * s.sz), {DriveTerm{s.sx, kTwoPi * 5e7, w, 0.0}});
  State3 psi0(1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0));
  const std::vector<double> t{0.0, 5e-9, 1e-8};
  const auto out = propagate(h, psi0, t, 1e-12);
  for (const auto& v : out) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-8));
  try {
    propagate(h, psi0, t, 1e-9);
    FAIL("expected under-resolved error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::under_resolved);
  }
}

TEST_CASE("matrix_power and interval propagator") {
  const auto& s = spin1_operators();
  const Operator3 u = unitary_step(s.sx + 0.3 * s.sz, 0.1);
  Operator3 direct = Operator3::Identity();
  for (int k = 0; k < 37; ++k) direct = u * direct;
  CHECK((matrix_power(u, 37) - direct).norm() < 1e-12);
  CHECK((matrix_power(u, 0) - Operator3::Identity()).norm() == 0.0);
  const TimeDependentHamiltonian h(s.sx + 0.3 * s.sz);
  CHECK((interval_propagator(h, 0.0, 3.7, 37) - direct).norm() < 1e-12);
}

TEST_CASE("time trace validation") {
  const TimeTrace t = TimeTrace::uniform(0.0, 0.5, {1.0, 2.0, 3.0});
  CHECK(t.dt() == 0.5);
  CHECK_NOTHROW(t.validate());
  TimeTrace bad = t;
  bad.values.pop_back();
  CHECK_THROWS_AS(bad.validate(), Error);
}
