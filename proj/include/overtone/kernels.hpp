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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "overtone/zfs.hpp"

namespace overtone::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
// Best available ISA, overridable with OVERTONE_SIMD=scalar|avx2.
Isa active_isa();

// Structure-of-arrays trigonometric table for a set of orientations.
struct OrientationTrig {
  std::vector<double> sin_beta, cos_beta, cos_2alpha, sin_2alpha, cos_gamma, sin_gamma;

  static OrientationTrig from(std::span<const Orientation> orientations);
  std::size_t size() const { return sin_beta.size(); }
};

// h = |f|^2 + |g|^2 and |f sin(chi) + g cos(chi)| per orientation.
void orientation_factors(Isa isa, const OrientationTrig& trig, double eta, double sin_chi,
                         double cos_chi, std::span<double> h, std::span<double> nutation);

// Powder CDF of h/3 for eta = 0, argument q = h/3 clamped to [0, 1].
void powder_h_cdf(Isa isa, std::span<const double> q, std::span<double> out);

// Nutation-rate CDFs in the reduced variable v = omega_nut / (1.5 eps omega1).
void nutation_cdf_perpendicular(Isa isa, std::span<const double> v, std::span<double> out);
void nutation_cdf_parallel(Isa isa, std::span<const double> v, std::span<double> out);

// floor((x - lo) * inv_step) when inside [0, bins), else -1.
void bin_index(Isa isa, std::span<const double> x, double lo, double inv_step, std::int32_t bins,
               std::span<std::int32_t> out);

namespace scalar {
void orientation_factors(const OrientationTrig& trig, double eta, double sin_chi, double cos_chi,
                         double* h, double* nutation, std::size_t begin, std::size_t end);
void powder_h_cdf(const double* q, double* out, std::size_t n);
void nutation_cdf_perpendicular(const double* v, double* out, std::size_t n);
void nutation_cdf_parallel(const double* v, double* out, std::size_t n);
void bin_index(const double* x, double lo, double inv_step, std::int32_t bins, std::int32_t* out,
               std::size_t n);
}  // namespace scalar

namespace avx2 {
void orientation_factors(const OrientationTrig& trig, double eta, double sin_chi, double cos_chi,
                         double* h, double* nutation, std::size_t begin, std::size_t end);
void powder_h_cdf(const double* q, double* out, std::size_t n);
void nutation_cdf_perpendicular(const double* v, double* out, std::size_t n);
void nutation_cdf_parallel(const double* v, double* out, std::size_t n);
void bin_index(const double* x, double lo, double inv_step, std::int32_t bins, std::int32_t* out,
               std::size_t n);
}  // namespace avx2

}  // namespace overtone::kernels
