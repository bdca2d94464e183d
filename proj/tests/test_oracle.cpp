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
#include <random>

#include "doctest.h"
#include "overtone/analytics.hpp"
#include "overtone/errors.hpp"
#include "overtone/oracle.hpp"

using namespace overtone;

namespace {

Orientation random_orientation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Orientation::make(kTwoPi * u(rng), std::acos(1.0 - 2.0 * u(rng)), kTwoPi * u(rng));
}

FieldContext pentacene_field(double b0 = 0.207) {
  FieldContext ctx;
  ctx.b0 = b0;
  ctx.b1 = mt_to_tesla(0.14);
  ctx.omega_mw = ghz_to_rad(11.6);
  return ctx;
}

const PerturbationOptions kHalf{kDefaultValidityGuard, SecondOrderForm::half_commutator};

TimeTrace synthetic(double f_mhz, double decay, std::size_t n, double span) {
  std::vector<double> v(n);
  const double dt = span / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = dt * static_cast<double>(k);
    v[k] = 0.8 * std::exp(-decay * t) * std::sin(mhz_to_rad(f_mhz) * t + 0.3) + 0.1;
  }
  return TimeTrace::uniform(0.0, dt, std::move(v));
}

}  // namespace

TEST_CASE("exact overtone gap at beta = 0") {
  const FieldContext ctx = pentacene_field();
  const ZfsTensor z = ZfsTensor::from_de(pentacene_zfs().d, 0.0);
  const TransitionSet t = exact_transitions(ctx, z, Orientation::make(0.4, 0, 1.0));
  const double d_eff = z.d;
  CHECK(t.overtone == doctest::Approx(2.0 * ctx.omega_e()).epsilon(1e-12));
  CHECK(t.sq_plus == doctest::Approx(ctx.omega_e() + d_eff).epsilon(1e-9));
  CHECK(t.moments.overtone == doctest::Approx(0.0));
}

TEST_CASE("exact gap approaches the consistent second-order formula") {
  const ZfsTensor z = pentacene_zfs();
  const Orientation o = Orientation::make(0.5, kPi / 3, 1.2);
  double prev = 0.0;
  for (double b0 : {0.2, 0.4, 0.8}) {
    FieldContext ctx = pentacene_field(b0);
    const double err = std::abs(exact_transitions(ctx, z, o).overtone - overtone_resonance(ctx, z, o, kHalf));
    if (prev > 0.0) CHECK(prev / err > 5.0);
    prev = err;
  }
}

TEST_CASE("single-quantum resonance fields") {
  const double wmw = ghz_to_rad(11.6);
  const double g = std::abs(kGammaElectron);
  const ZfsTensor nv = nv_zfs();
  const Orientation o0 = Orientation::make(0, 0, 0);
  const auto plus = resonance_fields(nv, o0, wmw, kGammaElectron, Transition::sq_plus, 0.1, 0.7);
  const auto minus = resonance_fields(nv, o0, wmw, kGammaElectron, Transition::sq_minus, 0.1, 0.7);
  REQUIRE(plus.size() == 1);
  REQUIRE(minus.size() == 1);
  CHECK(plus[0] == doctest::Approx((wmw - nv.d) / g).epsilon(1e-10));
  CHECK(minus[0] == doctest::Approx((wmw + nv.d) / g).epsilon(1e-10));
  const auto ot = resonance_fields(nv, o0, wmw, kGammaElectron, Transition::overtone, 0.1, 0.7);
  REQUIRE(ot.size() == 1);
  CHECK(ot[0] == doctest::Approx(wmw / (2.0 * g)).epsilon(1e-10));

  std::mt19937_64 rng(21);
  for (int k = 0; k < 50; ++k) {
    const Orientation o = random_orientation(rng);
    for (auto tr : {Transition::sq_plus, Transition::sq_minus}) {
      for (double b : resonance_fields(nv, o, wmw, kGammaElectron, tr, 0.25, 0.6)) {
        CHECK(b > 0.31);
        CHECK(b < 0.52);
      }
      for (double b : resonance_fields(pentacene_zfs(), o, wmw, kGammaElectron, tr, 0.25, 0.6)) {
        CHECK(b > 0.36);
        CHECK(b < 0.47);
      }
    }
  }
  CHECK_THROWS_AS(resonance_fields(nv, o0, wmw, kGammaElectron, Transition::sq_plus, 0.5, 0.1), Error);
}

TEST_CASE("zero drive leaves the populations constant") {
  FieldContext ctx = pentacene_field();
  ctx.b1 = 0.0;
  const Orientation o = Orientation::make(0.2, 0.9, 0.1);
  const TimeTrace t = rabi_trace(ctx, pentacene_zfs(), o, ghz_to_rad(11.6), 2e-6, Frame::lab);
  for (double v : t.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(fit_decaying_sinusoid(t), Error);
}

TEST_CASE("rotating frame at beta = pi/4 nutates at the predicted rate") {
  const FieldContext ctx = pentacene_field();
  const ZfsTensor z = ZfsTensor::from_de(pentacene_zfs().d, 0.0);
  const Orientation o = Orientation::make(0, kPi / 4, 0);
  const double eps = epsilon(z, ctx.b0, ctx.gamma_e);
  const double drive = overtone_resonance(ctx, z, o, kHalf);
  const double predicted = overtone_nutation(ctx, z, o);
  const TimeTrace t = rabi_trace(ctx, z, o, drive, 6.0 * kPi / predicted, Frame::rotating);
  const FitResult f = fit_decaying_sinusoid(t);
  CHECK(0.5 * f.frequency == doctest::Approx(1.5 * eps * ctx.omega1()).epsilon(0.05));
  for (double v : t.values) CHECK(std::abs(v) <= 1.0 + 1e-12);
}

TEST_CASE("lab and rotating frames agree") {
  const FieldContext ctx = pentacene_field();
  CHECK(ctx.omega1() <= ctx.omega_e() / 10.0);
  const ZfsTensor z = pentacene_zfs();
  const Orientation o = Orientation::make(0.3, 1.0, 0.4);
  const double predicted = overtone_nutation(ctx, z, o);
  const double duration = 4.0 * kPi / predicted;
  const TimeTrace lab = rabi_trace(ctx, z, o, exact_transitions(ctx, z, o).overtone, duration, Frame::lab);
  const TimeTrace rot =
      rabi_trace(ctx, z, o, overtone_resonance(ctx, z, o, kHalf), duration, Frame::rotating);
  const FitResult fl = fit_decaying_sinusoid(lab);
  const FitResult fr = fit_decaying_sinusoid(rot);
  CHECK(fl.frequency == doctest::Approx(fr.frequency).epsilon(0.02));
  CHECK_FALSE(fl.flagged);
}

TEST_CASE("rabi argument checks") {
  const FieldContext ctx = pentacene_field();
  const Orientation o = Orientation::make(0, 1, 0);
  RabiOptions one;
  one.samples = 1;
  CHECK_THROWS_AS(rabi_trace(ctx, pentacene_zfs(), o, 1e10, 1e-6, Frame::lab, one), Error);
  CHECK_THROWS_AS(rabi_trace(ctx, pentacene_zfs(), o, 1e10, 0.0, Frame::lab), Error);
  RabiOptions sq;
  sq.signal = RabiSignal::single_quantum;
  CHECK_THROWS_AS(rabi_trace(ctx, pentacene_zfs(), o, 1e10, 1e-6, Frame::rotating, sq), Error);
}

TEST_CASE("fit recovers a clean sinusoid") {
  const FitResult f = fit_decaying_sinusoid(synthetic(0.67, 0.0, 400, 5e-6));
  CHECK(rad_to_mhz(f.frequency) == doctest::Approx(0.67).epsilon(1e-3));
  CHECK(f.amplitude == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(f.offset == doctest::Approx(0.1).epsilon(1e-3));
  CHECK_FALSE(f.flagged);
}

TEST_CASE("fit recovers a decay rate") {
  const FitResult f = fit_decaying_sinusoid(synthetic(1.3, 3e5, 500, 6e-6));
  CHECK(f.decay_rate == doctest::Approx(3e5).epsilon(0.05));
  CHECK(rad_to_mhz(f.frequency) == doctest::Approx(1.3).epsilon(1e-3));
}

TEST_CASE("fit rejects a constant trace") {
  const TimeTrace flat = TimeTrace::uniform(0.0, 1e-8, std::vector<double>(200, 0.4));
  try {
    fit_decaying_sinusoid(flat);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_oscillation);
  }
  CHECK_THROWS_AS(fit_decaying_sinusoid(TimeTrace::uniform(0.0, 1e-8, std::vector<double>(8, 0.0))), Error);
}

TEST_CASE("fit flags traces shorter than 1.5 periods") {
  const FitResult f = fit_decaying_sinusoid(synthetic(0.2, 0.0, 300, 5e-6));
  CHECK(f.flagged);
  CHECK_FALSE(f.note.empty());
}

TEST_CASE("powder histogram is invariant to orientation order") {
  const FieldContext ctx = pentacene_field();
  PowderGrid g = powder_grid(PowderScheme::random, 5000, 9);
  const double c = 2.0 * ctx.omega_e();
  const double ewz = epsilon(pentacene_zfs(), ctx.b0, ctx.gamma_e) * pentacene_zfs().omega_zfs();
  const UniformAxis axis = UniformAxis::from_range(c - ewz, c + 8.0 * ewz, 60);
  const Spectrum a = powder_histogram(ctx, pentacene_zfs(), g, axis);
  std::vector<std::size_t> idx(g.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::mt19937_64 rng(2);
  std::shuffle(idx.begin(), idx.end(), rng);
  PowderGrid p;
  for (std::size_t k : idx) {
    p.orientations.push_back(g.orientations[k]);
    p.weights.push_back(g.weights[k]);
  }
  const Spectrum b = powder_histogram(ctx, pentacene_zfs(), p, axis);
  CHECK(a.intensity == b.intensity);
  CHECK(a.integral() == doctest::Approx(1.0));
}

TEST_CASE("single orientation fills one bin") {
  const FieldContext ctx = pentacene_field();
  PowderGrid g;
  g.orientations.push_back(Orientation::make(0.1, 0.8, 0.3));
  g.weights.push_back(1.0);
  const double w = overtone_resonance(ctx, pentacene_zfs(), g.orientations[0]);
  const Spectrum s = powder_histogram(ctx, pentacene_zfs(), g, UniformAxis::from_range(w - 1e8, w + 1e8, 20));
  int nonzero = 0;
  for (double v : s.intensity) nonzero += v != 0.0;
  CHECK(nonzero == 1);
  CHECK_THROWS_AS(powder_histogram(ctx, pentacene_zfs(), PowderGrid{}, s.axis), Error);
  CHECK_THROWS_AS(powder_histogram(ctx, pentacene_zfs(), g, UniformAxis::from_range(0, 1, 5)), Error);
}

TEST_CASE("nutation histogram peaks at the divergence") {
  const FieldContext ctx = pentacene_field();
  const ZfsTensor z = ZfsTensor::from_de(pentacene_zfs().d, 0.0);
  const double ew1 = epsilon(z, ctx.b0, ctx.gamma_e) * ctx.omega1();
  HistogramOptions opt;
  opt.quantity = PowderQuantity::nutation_formula;
  const UniformAxis axis = UniformAxis::from_range(0.0, 2.0 * ew1, 80);
  const Spectrum s = powder_histogram(ctx, z, powder_grid(PowderScheme::random, 200000, 4), axis, opt);
  const auto peak = std::max_element(s.intensity.begin(), s.intensity.end()) - s.intensity.begin();
  CHECK(std::abs(static_cast<long>(peak) - axis.locate(1.5 * ew1 - 1e-9 * ew1)) <= 1);
  CHECK(s.kind == AxisKind::nutation_rate);
  const Spectrum ref = nutation_distribution(NutationGeometry::perpendicular, ew1, axis);
  CHECK(compare_spectra(s, ref) < 0.05);
}

TEST_CASE("compare spectra") {
  Spectrum a;
  a.axis = UniformAxis::from_range(0.0, 1.0, 10);
  a.intensity.assign(10, 0.0);
  Spectrum b = a;
  a.intensity[2] = 1.0;
  b.intensity[7] = 3.0;
  CHECK(compare_spectra(a, a) == 0.0);
  CHECK(compare_spectra(a, b) == doctest::Approx(2.0));
  const AxisInterval skip[] = {{0.15, 0.35}, {0.65, 0.85}};
  CHECK(compare_spectra(a, b, skip) == 0.0);
  Spectrum c = a;
  c.axis = UniformAxis::from_range(0.0, 1.1, 10);
  try {
    compare_spectra(a, c);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::axis_mismatch);
  }
}
