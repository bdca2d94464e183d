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
#include <cstdlib>
#include <string>

#include "overtone/errors.hpp"
#include "overtone/kernels.hpp"

namespace overtone::kernels {

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(OVERTONE_BUILD_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    if (const char* env = std::getenv("OVERTONE_SIMD")) {
      const std::string v(env);
      if (v == "scalar") return Isa::scalar;
      if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    }
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

OrientationTrig OrientationTrig::from(std::span<const Orientation> orientations) {
  OrientationTrig t;
  const std::size_t n = orientations.size();
  for (auto* v : {&t.sin_beta, &t.cos_beta, &t.cos_2alpha, &t.sin_2alpha, &t.cos_gamma,
                  &t.sin_gamma}) {
    v->resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Orientation& o = orientations[i];
    t.sin_beta[i] = std::sin(o.beta);
    t.cos_beta[i] = std::cos(o.beta);
    t.cos_2alpha[i] = std::cos(2.0 * o.alpha);
    t.sin_2alpha[i] = std::sin(2.0 * o.alpha);
    t.cos_gamma[i] = std::cos(o.gamma);
    t.sin_gamma[i] = std::sin(o.gamma);
  }
  return t;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::invalid_argument, what);
}

Isa resolve(Isa isa) { return isa_available(isa) ? isa : Isa::scalar; }

}  // namespace

void orientation_factors(Isa isa, const OrientationTrig& trig, double eta, double sin_chi,
                         double cos_chi, std::span<double> h, std::span<double> nutation) {
  require(h.size() == trig.size() && nutation.size() == trig.size(),
          "orientation_factors: output size mismatch");
#if defined(OVERTONE_BUILD_AVX2)
  if (resolve(isa) == Isa::avx2) {
    avx2::orientation_factors(trig, eta, sin_chi, cos_chi, h.data(), nutation.data(), 0, trig.size());
    return;
  }
#endif
  (void)isa;
  scalar::orientation_factors(trig, eta, sin_chi, cos_chi, h.data(), nutation.data(), 0, trig.size());
}

#if defined(OVERTONE_BUILD_AVX2)
#define OVERTONE_DISPATCH(fn, ...)                   \
  if (resolve(isa) == Isa::avx2) {                   \
    avx2::fn(__VA_ARGS__);                           \
    return;                                          \
  }                                                  \
  scalar::fn(__VA_ARGS__)
#else
#define OVERTONE_DISPATCH(fn, ...) \
  (void)isa;                       \
  scalar::fn(__VA_ARGS__)
#endif

void powder_h_cdf(Isa isa, std::span<const double> q, std::span<double> out) {
  require(q.size() == out.size(), "powder_h_cdf: output size mismatch");
  OVERTONE_DISPATCH(powder_h_cdf, q.data(), out.data(), q.size());
}

void nutation_cdf_perpendicular(Isa isa, std::span<const double> v, std::span<double> out) {
  require(v.size() == out.size(), "nutation_cdf_perpendicular: output size mismatch");
  OVERTONE_DISPATCH(nutation_cdf_perpendicular, v.data(), out.data(), v.size());
}

void nutation_cdf_parallel(Isa isa, std::span<const double> v, std::span<double> out) {
  require(v.size() == out.size(), "nutation_cdf_parallel: output size mismatch");
  OVERTONE_DISPATCH(nutation_cdf_parallel, v.data(), out.data(), v.size());
}

void bin_index(Isa isa, std::span<const double> x, double lo, double inv_step, std::int32_t bins,
               std::span<std::int32_t> out) {
  require(x.size() == out.size(), "bin_index: output size mismatch");
  OVERTONE_DISPATCH(bin_index, x.data(), lo, inv_step, bins, out.data(), x.size());
}

}  // namespace overtone::kernels
