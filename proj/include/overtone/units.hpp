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

#include <numbers>

namespace overtone {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Free-electron gyromagnetic ratio, rad s^-1 T^-1.
inline constexpr double kGammaElectron = -kTwoPi * 28.02495e9;

inline constexpr double mhz_to_rad(double mhz) { return kTwoPi * mhz * 1e6; }
inline constexpr double ghz_to_rad(double ghz) { return kTwoPi * ghz * 1e9; }
inline constexpr double rad_to_mhz(double w) { return w / (kTwoPi * 1e6); }
inline constexpr double rad_to_ghz(double w) { return w / (kTwoPi * 1e9); }
inline constexpr double mt_to_tesla(double mt) { return mt * 1e-3; }
inline constexpr double tesla_to_mt(double t) { return t * 1e3; }
inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
inline constexpr double us_to_s(double us) { return us * 1e-6; }
inline constexpr double ns_to_s(double ns) { return ns * 1e-9; }

}  // namespace overtone
