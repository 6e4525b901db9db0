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

#ifndef CSITL_RNG_HPP
#define CSITL_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

#include <cmath>

namespace csitl
{

namespace detail
{
constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

/**
 * Counter-based random stream keyed by (global seed, stream ids).
 *
 * The n-th output of a stream is a pure function of its key and n, so any
 * draw is reproducible no matter which worker evaluates it or in which order
 * streams are visited. Satisfies UniformRandomBitGenerator.
 */
class RandomStream
{
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) : key_(detail::mix64(seed + detail::golden_gamma)) {}

    RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) : RandomStream(seed)
    {
        for (auto id : ids)
            key_ = detail::mix64(key_ ^ detail::mix64(id + detail::golden_gamma));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return detail::mix64(key_ + (++counter_) * detail::golden_gamma); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Circularly-symmetric complex normal with unit variance (Box-Muller).
    std::complex<double> complex_normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1)); // E|z|^2 = 1
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Standard real normal.
    double normal() { return std::sqrt(2.0) * complex_normal().real(); }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace csitl

#endif // CSITL_RNG_HPP
