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

#include <immintrin.h>

#include "overtone/kernels.hpp"

namespace overtone::kernels::avx2 {

namespace {

inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }
inline __m256d add(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
inline __m256d sub(__m256d a, __m256d b) { return _mm256_sub_pd(a, b); }

}  // namespace

void orientation_factors(const OrientationTrig& trig, double eta, double sin_chi, double cos_chi,
                         double* h, double* nutation, std::size_t begin, std::size_t end) {
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d vsx = _mm256_set1_pd(sin_chi);
  const __m256d vcx = _mm256_set1_pd(cos_chi);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d s = _mm256_loadu_pd(trig.sin_beta.data() + i);
    const __m256d c = _mm256_loadu_pd(trig.cos_beta.data() + i);
    const __m256d ca = _mm256_loadu_pd(trig.cos_2alpha.data() + i);
    const __m256d sa = _mm256_loadu_pd(trig.sin_2alpha.data() + i);
    const __m256d cg = _mm256_loadu_pd(trig.cos_gamma.data() + i);
    const __m256d sg = _mm256_loadu_pd(trig.sin_gamma.data() + i);

    const __m256d sc = mul(s, c);
    const __m256d ea = mul(veta, ca);
    const __m256d es = mul(veta, sa);
    const __m256d fa = mul(sc, sub(three, ea));
    const __m256d fb = sub(zero, mul(es, s));
    const __m256d fr = sub(mul(cg, fa), mul(sg, fb));
    const __m256d fi = add(mul(sg, fa), mul(cg, fb));

    const __m256d ga = mul(half, add(mul(three, mul(s, s)), mul(ea, add(one, mul(c, c)))));
    const __m256d gb = mul(es, c);
    const __m256d c2g = sub(mul(cg, cg), mul(sg, sg));
    const __m256d s2g = mul(two, mul(sg, cg));
    const __m256d gr = sub(mul(c2g, ga), mul(s2g, gb));
    const __m256d gi = add(mul(s2g, ga), mul(c2g, gb));

    const __m256d hv = add(add(add(mul(fr, fr), mul(fi, fi)), mul(gr, gr)), mul(gi, gi));
    _mm256_storeu_pd(h + i, hv);
    const __m256d zr = add(mul(fr, vsx), mul(gr, vcx));
    const __m256d zi = add(mul(fi, vsx), mul(gi, vcx));
    _mm256_storeu_pd(nutation + i, _mm256_sqrt_pd(add(mul(zr, zr), mul(zi, zi))));
  }
  if (i < end) scalar::orientation_factors(trig, eta, sin_chi, cos_chi, h, nutation, i, end);
}

namespace {

// Lanes with !(x > 0) become 0 and lanes with x >= 1 become 1.
inline __m256d clamp_unit_cdf(__m256d x, __m256d value) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  value = _mm256_blendv_pd(value, one, _mm256_cmp_pd(x, one, _CMP_GE_OQ));
  return _mm256_blendv_pd(zero, value, _mm256_cmp_pd(x, zero, _CMP_GT_OQ));
}

}  // namespace

void powder_h_cdf(const double* q, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d edge = _mm256_set1_pd(0.75);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(q + i);
    const __m256d sr = _mm256_sqrt_pd(sub(one, x));
    const __m256d lo = sub(one, _mm256_sqrt_pd(_mm256_div_pd(add(one, mul(two, sr)), three)));
    __m256d hi = _mm256_sqrt_pd(_mm256_max_pd(_mm256_div_pd(sub(one, mul(two, sr)), three), zero));
    hi = _mm256_blendv_pd(zero, hi, _mm256_cmp_pd(x, edge, _CMP_GT_OQ));
    _mm256_storeu_pd(out + i, clamp_unit_cdf(x, add(lo, hi)));
  }
  if (i < n) scalar::powder_h_cdf(q + i, out + i, n - i);
}

void nutation_cdf_perpendicular(const double* v, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d s = _mm256_sqrt_pd(sub(one, mul(x, x)));
    const __m256d a = sub(one, _mm256_sqrt_pd(_mm256_div_pd(add(one, s), two)));
    const __m256d b = _mm256_sqrt_pd(_mm256_div_pd(sub(one, s), two));
    _mm256_storeu_pd(out + i, clamp_unit_cdf(x, add(a, b)));
  }
  if (i < n) scalar::nutation_cdf_perpendicular(v + i, out + i, n - i);
}

void nutation_cdf_parallel(const double* v, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d g = sub(one, _mm256_sqrt_pd(sub(one, x)));
    _mm256_storeu_pd(out + i, clamp_unit_cdf(x, g));
  }
  if (i < n) scalar::nutation_cdf_parallel(v + i, out + i, n - i);
}

void bin_index(const double* x, double lo, double inv_step, std::int32_t bins, std::int32_t* out,
               std::size_t n) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vinv = _mm256_set1_pd(inv_step);
  const __m256d nb = _mm256_set1_pd(static_cast<double>(bins));
  const __m256d zero = _mm256_setzero_pd();
  const __m256d minus_one = _mm256_set1_pd(-1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = mul(sub(_mm256_loadu_pd(x + i), vlo), vinv);
    const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(d, zero, _CMP_GE_OQ),
                                         _mm256_cmp_pd(d, nb, _CMP_LT_OQ));
    const __m256d k = _mm256_blendv_pd(minus_one, _mm256_floor_pd(d), inside);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_cvttpd_epi32(k));
  }
  if (i < n) scalar::bin_index(x + i, lo, inv_step, bins, out + i, n - i);
}

}  // namespace overtone::kernels::avx2
