// SPDX-License-Identifier: Apache-2.0
//
// csitl - Monte Carlo link-level simulator for CSIT-limited multi-antenna systems
// Copyright (C) 2026 The csitl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSITL_UNITS_HPP
#define CSITL_UNITS_HPP

#include <cmath>
#include <limits>
#include <numbers>

namespace csitl
{

// Powers are carried in milliwatts; dBm is 10*log10(P_mW).

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

inline double linear_to_db(double x) { return x > 0.0 ? 10.0 * std::log10(x) : -std::numeric_limits<double>::infinity(); }

inline double dbm_to_mw(double p_dbm) { return db_to_linear(p_dbm); }

inline double mw_to_dbm(double p_mw) { return linear_to_db(p_mw); }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle into [0, 2*pi).
inline double normalize_angle(double rad)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(rad, two_pi);
    if (r < 0.0)
        r += two_pi;
    if (r >= two_pi)
        r = 0.0;
    return r;
}

} // namespace csitl

#endif // CSITL_UNITS_HPP
