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

#include "overtone/kernels.hpp"

namespace overtone::kernels::scalar {

void orientation_factors(const OrientationTrig& trig, double eta, double sin_chi, double cos_chi,
                         double* h, double* nutation, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    const double s = trig.sin_beta[i];
    const double c = trig.cos_beta[i];
    const double ca = trig.cos_2alpha[i];
    const double sa = trig.sin_2alpha[i];
    const double cg = trig.cos_gamma[i];
    const double sg = trig.sin_gamma[i];

    const double sc = s * c;
    const double ea = eta * ca;
    const double es = eta * sa;
    const double fa = sc * (3.0 - ea);
    const double fb = 0.0 - es * s;
    const double fr = cg * fa - sg * fb;
    const double fi = sg * fa + cg * fb;

    const double ga = 0.5 * (3.0 * (s * s) + ea * (1.0 + c * c));
    const double gb = es * c;
    const double c2g = cg * cg - sg * sg;
    const double s2g = 2.0 * (sg * cg);
    const double gr = c2g * ga - s2g * gb;
    const double gi = s2g * ga + c2g * gb;

    h[i] = ((fr * fr + fi * fi) + gr * gr) + gi * gi;
    const double zr = fr * sin_chi + gr * cos_chi;
    const double zi = fi * sin_chi + gi * cos_chi;
    nutation[i] = std::sqrt(zr * zr + zi * zi);
  }
}

void powder_h_cdf(const double* q, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = q[i];
    if (!(x > 0.0)) {
      out[i] = 0.0;
    } else if (x >= 1.0) {
      out[i] = 1.0;
    } else {
      const double sr = std::sqrt(1.0 - x);
      const double lo = 1.0 - std::sqrt((1.0 + 2.0 * sr) / 3.0);
      const double hi = x > 0.75 ? std::sqrt(std::max((1.0 - 2.0 * sr) / 3.0, 0.0)) : 0.0;
      out[i] = lo + hi;
    }
  }
}

void nutation_cdf_perpendicular(const double* v, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i];
    if (!(x > 0.0)) {
      out[i] = 0.0;
    } else if (x >= 1.0) {
      out[i] = 1.0;
    } else {
      const double s = std::sqrt(1.0 - x * x);
      out[i] = (1.0 - std::sqrt((1.0 + s) / 2.0)) + std::sqrt((1.0 - s) / 2.0);
    }
  }
}

void nutation_cdf_parallel(const double* v, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i];
    if (!(x > 0.0)) {
      out[i] = 0.0;
    } else if (x >= 1.0) {
      out[i] = 1.0;
    } else {
      out[i] = 1.0 - std::sqrt(1.0 - x);
    }
  }
}

void bin_index(const double* x, double lo, double inv_step, std::int32_t bins, std::int32_t* out,
               std::size_t n) {
  const double nb = static_cast<double>(bins);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (x[i] - lo) * inv_step;
    out[i] = (d >= 0.0 && d < nb) ? static_cast<std::int32_t>(std::floor(d)) : -1;
  }
}

}  // namespace overtone::kernels::scalar
