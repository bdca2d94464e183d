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


#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "overtone/errors.hpp"
#include "overtone/experiment.hpp"

using namespace overtone;

namespace {

FieldContext field(double b0 = 0.207) {
  FieldContext ctx;
  ctx.b0 = b0;
  ctx.b1 = mt_to_tesla(0.14);
  ctx.omega_mw = ghz_to_rad(11.6);
  return ctx;
}

TripletPopulations mix(const TripletPopulations& p, double lambda) {
  return TripletPopulations::zero_field(1.0 / 3 + lambda * (p.values[0] - 1.0 / 3),
                                        1.0 / 3 + lambda * (p.values[1] - 1.0 / 3),
                                        1.0 / 3 + lambda * (p.values[2] - 1.0 / 3));
}

double peak_position(const Spectrum& s) {
  const auto k = std::max_element(s.intensity.begin(), s.intensity.end()) - s.intensity.begin();
  return s.axis.center(static_cast<std::size_t>(k));
}

IseConfig ise_config() {
  IseConfig c;
  c.omega1 = mhz_to_rad(2.0);
  c.t_mw = us_to_s(3.0);
  c.omega_0n = mhz_to_rad(8.74);
  c.electron_polarization = 0.5;
  c.rep_rate = 500.0;
  c.rep_count = 100;
  c.detuning_offset = mhz_to_rad(8.6);
  c.b_sweep = mhz_to_rad(4.0) / (2.0 * std::abs(c.gamma_e));
  return c;
}

// Same pseudo-spin model as the library, integrated with a fixed finer step.
double ise_reference(double omega, const IseConfig& cfg, std::size_t steps) {
  using M4 = Eigen::Matrix4d;
  const Eigen::Matrix2d sz{{1, 0}, {0, -1}};
  const Eigen::Matrix2d sx{{0, 1}, {1, 0}};
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  auto kron = [](const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
    M4 out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };
  const M4 ez = kron(sz, id), ex = kron(sx, id), iz = kron(id, 0.5 * sz);
  const M4 fixed = 0.5 * omega * ex + cfg.omega_0n * iz + cfg.hyperfine_secular * kron(sz, 0.5 * sz) +
                   cfg.hyperfine_pseudosecular * kron(sz, 0.5 * sx);
  const double range = 2.0 * std::abs(cfg.gamma_e) * cfg.b_sweep;
  Eigen::Matrix4cd rho = (0.25 * (M4::Identity() + cfg.electron_polarization * ez)).cast<std::complex<double>>();
  const double dt = cfg.t_mw / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double tm = (static_cast<double>(k) + 0.5) * dt;
    Eigen::SelfAdjointEigenSolver<M4> es(fixed + 0.5 * (cfg.detuning_offset + range * (tm / cfg.t_mw - 0.5)) * ez);
    Eigen::Vector4cd ph;
    for (int j = 0; j < 4; ++j) ph(j) = std::polar(1.0, -es.eigenvalues()(j) * dt);
    const Eigen::Matrix4cd v = es.eigenvectors().cast<std::complex<double>>();
    const Eigen::Matrix4cd u = v * ph.asDiagonal() * v.adjoint();
    rho = u * rho * u.adjoint();
  }
  return 2.0 * std::real((rho * iz.cast<std::complex<double>>()).trace());
}

}  // namespace

TEST_CASE("population presets") {
  CHECK_NOTHROW(pentacene_populations().validate());
  CHECK_NOTHROW(nv_populations().validate());
  CHECK_THROWS_AS(TripletPopulations::zero_field(0.5, 0.6, -0.1), Error);
  CHECK_THROWS_AS(TripletPopulations::ms(0.5, 0.3, 0.3), Error);
  const Operator3 rho = pas_density(pentacene_populations());
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK((rho - rho.adjoint()).norm() < 1e-15);
}

TEST_CASE("eigenstate populations at beta = 0") {
  const ZfsTensor z = ZfsTensor::from_de(pentacene_zfs().d, 0.0);
  const TripletPopulations p = eigenstate_populations(field(), z, Orientation::make(0, 0, 0), pentacene_populations());
  CHECK(p.p0() == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(p.p_plus() == doctest::Approx(0.46).epsilon(1e-12));
  CHECK(p.p_minus() == doctest::Approx(0.46).epsilon(1e-12));
}

TEST_CASE("eigenstate populations sum to one and ignore rotations about the field") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double a = kTwoPi * u(rng), b = kPi * u(rng);
    const TripletPopulations p =
        eigenstate_populations(field(), pentacene_zfs(), Orientation::make(a, b, 0.0), pentacene_populations());
    const TripletPopulations q = eigenstate_populations(field(), pentacene_zfs(),
                                                        Orientation::make(a, b, kTwoPi * u(rng)),
                                                        pentacene_populations());
    CHECK(p.p0() + p.p_plus() + p.p_minus() == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(p.values[i] == doctest::Approx(q.values[i]).epsilon(1e-10));
  }
}

TEST_CASE("uniform populations carry no overtone polarization") {
  const PowderGrid g = powder_grid(PowderScheme::random, 500, 3);
  const PolarizationMap m =
      overtone_polarization_map(field(), pentacene_zfs(), g, TripletPopulations::ms(1.0 / 3, 1.0 / 3, 1.0 / 3));
  for (double v : m.difference) CHECK(std::abs(v) < 1e-14);
  CHECK(std::abs(m.average) < 1e-14);
}

TEST_CASE("polarization map weightings") {
  const PowderGrid g = powder_grid(PowderScheme::random, 2000, 3);
  for (auto w : {PolarizationWeighting::none, PolarizationWeighting::triplet_fraction,
                 PolarizationWeighting::overtone_moment}) {
    const PolarizationMap m = overtone_polarization_map(field(), pentacene_zfs(), g, pentacene_populations(), w);
    CHECK(m.difference.size() == g.size());
    CHECK(std::abs(m.average) <= 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(m.normalized[i]) <= 1.0 + 1e-12);
  }
}

TEST_CASE("echo sweep with no polarization is flat") {
  const PowderGrid g = powder_grid(PowderScheme::random, 300, 1);
  const Spectrum s = echo_field_sweep(field(), pentacene_zfs(), g, TripletPopulations::ms(1.0 / 3, 1.0 / 3, 1.0 / 3),
                                      UniformAxis::from_range(0.19, 0.48, 100), mhz_to_rad(10.0));
  for (double v : s.intensity) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("echo intensity is linear in polarization") {
  const PowderGrid g = powder_grid(PowderScheme::random, 400, 1);
  const UniformAxis axis = UniformAxis::from_range(0.19, 0.48, 120);
  const Spectrum full = echo_field_sweep(field(), pentacene_zfs(), g, pentacene_populations(), axis, mhz_to_rad(10.0));
  const Spectrum half =
      echo_field_sweep(field(), pentacene_zfs(), g, mix(pentacene_populations(), 0.5), axis, mhz_to_rad(10.0));
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < axis.size; ++k) {
    a += full.intensity[k];
    b += half.intensity[k];
  }
  REQUIRE(a > 0.0);
  CHECK(b / a == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("echo overtone feature positions") {
  const PowderGrid g = powder_grid(PowderScheme::random, 4000, 2);
  EchoOptions ot;
  ot.include_single_quantum = false;
  const UniformAxis axis = UniformAxis::from_range(0.18, 0.215, 140);
  const Spectrum p = echo_field_sweep(field(), pentacene_zfs(), g, pentacene_populations(), axis, mhz_to_rad(5.0), ot);
  const double bp = peak_position(p);
  CHECK(bp > 0.200);
  CHECK(bp < 0.2075);
  const Spectrum nv = echo_field_sweep(field(), nv_zfs(), g, nv_populations(), axis, mhz_to_rad(5.0), ot);
  const double offset = tesla_to_mt(peak_position(nv) - 0.207);
  CHECK(offset > -9.0);
  CHECK(offset < -6.0);
  CHECK_THROWS_AS(echo_field_sweep(field(), nv_zfs(), g, nv_populations(), axis, 0.0), Error);
}

TEST_CASE("ISE transfer vanishes without pseudosecular coupling or polarization") {
  IseConfig c = ise_config();
  c.hyperfine_pseudosecular = 0.0;
  CHECK(std::abs(ise_shot_reduced(mhz_to_rad(4.0), c).delta_nuclear_polarization) < 1e-12);
  c = ise_config();
  c.electron_polarization = 0.0;
  CHECK(std::abs(ise_shot_reduced(mhz_to_rad(4.0), c).delta_nuclear_polarization) < 1e-12);
}

TEST_CASE("ISE transfer is bounded by the electron polarization") {
  for (double pe : {0.2, 0.5, 1.0}) {
    for (double t : {1.0, 5.0, 30.0}) {
      IseConfig c = ise_config();
      c.electron_polarization = pe;
      c.t_mw = us_to_s(t);
      CHECK(std::abs(ise_shot_reduced(mhz_to_rad(4.0), c).delta_nuclear_polarization) <= pe + 1e-12);
    }
  }
}

TEST_CASE("ISE step size is converged") {
  const IseConfig c = ise_config();
  const IseShot shot = ise_shot_reduced(mhz_to_rad(4.0), c);
  const double ref = ise_reference(mhz_to_rad(4.0), c, 10 * shot.steps);
  CHECK(shot.delta_nuclear_polarization == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("ISE transfer grows as the sweep slows") {
  IseConfig fast = ise_config();
  fast.detuning_offset = std::sqrt(std::pow(fast.omega_0n, 2) - std::pow(mhz_to_rad(4.0), 2));
  fast.electron_polarization = 1.0;
  fast.t_mw = us_to_s(2.0);
  IseConfig slow = fast;
  slow.t_mw = us_to_s(40.0);
  CHECK(ise_shot_reduced(mhz_to_rad(4.0), slow).delta_nuclear_polarization >
        ise_shot_reduced(mhz_to_rad(4.0), fast).delta_nuclear_polarization);
}

TEST_CASE("ISE with an orientation uses twice the overtone nutation") {
  const IseConfig c = ise_config();
  const IseShot s = ise_shot(field(), pentacene_zfs(), Orientation::make(0.2, 0.8, 0.1), c);
  CHECK(s.pseudo_nutation > 0.0);
  CHECK(s.steps > 0);
}

TEST_CASE("ISE buildup recursion") {
  IseConfig c = ise_config();
  c.rep_count = 3;
  const TimeTrace t = ise_buildup(0.1, c, 0.5);
  REQUIRE(t.size() == 4);
  CHECK(t.values[1] == doctest::Approx(0.1));
  CHECK(t.values[2] == doctest::Approx(0.15));
  CHECK(t.values[3] == doctest::Approx(0.175));
  CHECK(t.dt() == doctest::Approx(1.0 / 500.0));
  CHECK_THROWS_AS(ise_buildup(0.1, c, 1.5), Error);
}

TEST_CASE("buildup fits recover clean curves") {
  std::vector<double> sat(101), dec(101);
  for (std::size_t k = 0; k < sat.size(); ++k) {
    const double t = 5.0 * static_cast<double>(k);
    sat[k] = 0.2 * (1.0 - std::exp(-t / 120.0));
    dec[k] = 0.2 * std::exp(-t / 240.0);
  }
  const BuildupFit fs = fit_buildup(TimeTrace::uniform(0.0, 5.0, sat), BuildupModel::saturating);
  CHECK(fs.converged);
  CHECK(fs.identifiable);
  CHECK(fs.p_max == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(fs.t_build == doctest::Approx(120.0).epsilon(1e-6));
  const BuildupFit fd = fit_buildup(TimeTrace::uniform(0.0, 5.0, dec), BuildupModel::decaying);
  CHECK(fd.t1 == doctest::Approx(240.0).epsilon(1e-6));
}

TEST_CASE("constant trace has no identifiable time constant") {
  const BuildupFit f = fit_buildup(TimeTrace::uniform(0.0, 1.0, std::vector<double>(50, 0.3)), BuildupModel::decaying);
  CHECK_FALSE(f.identifiable);
  CHECK(f.diagnostics.find("not identifiable") != std::string::npos);
  CHECK_THROWS_AS(fit_buildup(TimeTrace::uniform(0.0, 1.0, {1, 2, 3}), BuildupModel::saturating), Error);
}

TEST_CASE("signal ratio estimate") {
  CHECK(signal_ratio_estimate(1.0, 1.0, 1.0) == 1.0);
  CHECK(signal_ratio_estimate(2.0, 3.0, 0.5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(signal_ratio_estimate(0.0, 1.0, 1.0), Error);
}
