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

#ifndef CSITL_FBL_HPP
#define CSITL_FBL_HPP

#include "beamforming.hpp"
#include "channel.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace csitl
{

enum class ReliabilityMode
{
    averaged_error, // E_h[eps(SINR(h), n)] <= target
    sinr_outage,    // P(n log2(1 + SINR) < k) <= target
};

struct FblConfig
{
    std::int64_t payload_bits = 256;
    double target_error = 1e-4;
    std::int64_t max_blocklength = 100'000'000;
    ReliabilityMode mode = ReliabilityMode::averaged_error;

    void validate() const
    {
        if (payload_bits < 1)
            throw std::invalid_argument("FblConfig: payload_bits must be >= 1");
        if (!(target_error > 0.0 && target_error < 1.0))
            throw std::invalid_argument("FblConfig: target_error must lie in (0, 1)");
        if (max_blocklength < 1)
            throw std::invalid_argument("FblConfig: max_blocklength must be >= 1");
    }

    friend bool operator==(const FblConfig &, const FblConfig &) = default;
};

/// Standard normal tail Q(x) = erfc(x / sqrt2) / 2.
inline double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/**
 * Normal-approximation block error probability for n channel uses carrying
 * k bits at SINR s:
 *   eps = Q((n ln(1+s) - k ln2 + ln(n)/2) / sqrt(n V)),  V = 1 - (1+s)^-2.
 */
inline double block_error(double sinr, std::int64_t n, std::int64_t k)
{
    if (!(sinr > 0.0))
        return 1.0;
    if (n < 1)
        throw std::invalid_argument("block_error: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double capacity = std::log1p(sinr);
    const double dispersion = -std::expm1(-2.0 * capacity);
    const double arg = (nn * capacity - static_cast<double>(k) * std::numbers::ln2 + 0.5 * std::log(nn)) /
                       std::sqrt(nn * dispersion);
    return std::clamp(gaussian_q(arg), 0.0, 1.0);
}

namespace detail
{

// Smallest n in [1, max_n] with pred(n) true, assuming pred is monotone.
template <class Pred>
std::optional<std::int64_t> smallest_feasible(std::int64_t max_n, Pred &&pred)
{
    if (!pred(max_n))
        return std::nullopt;
    if (pred(1))
        return 1;
    std::int64_t lo = 1, hi = max_n; // pred(lo) false, pred(hi) true
    while (hi - lo > 1)
    {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace detail

/// Reliability estimate of one user at blocklength n from its SINR samples.
inline double user_error(std::span<const double> sinr_samples, std::int64_t n, const FblConfig &config)
{
    std::vector<double> e(sinr_samples.size());
    if (config.mode == ReliabilityMode::averaged_error)
    {
        for (std::size_t t = 0; t < e.size(); ++t)
            e[t] = block_error(sinr_samples[t], n, config.payload_bits);
    }
    else
    {
        const double needed = std::exp2(static_cast<double>(config.payload_bits) / static_cast<double>(n)) - 1.0;
        for (std::size_t t = 0; t < e.size(); ++t)
            e[t] = sinr_samples[t] < needed ? 1.0 : 0.0;
    }
    return pairwise_sum(e) / static_cast<double>(e.size());
}

/**
 * Minimal blocklength meeting the reliability target for every user, given
 * per-user SINR samples ([user][trial]). The same samples are reused for all
 * candidate n. Returns nullopt when max_blocklength is not enough.
 */
inline std::optional<std::int64_t> min_latency_from_samples(const std::vector<std::vector<double>> &sinr_samples,
                                                            const FblConfig &config)
{
    config.validate();
    return detail::smallest_feasible(config.max_blocklength, [&](std::int64_t n) {
        for (const auto &s : sinr_samples)
            if (user_error(s, n, config) > config.target_error)
                return false;
        return true;
    });
}

inline std::optional<std::int64_t> min_latency(const PrecodingMatrix &precoder,
                                               std::span<const RicianChannelModel> models,
                                               const UlaGeometry &geometry, double noise_power,
                                               const FblConfig &config, std::int64_t trials, std::uint64_t seed,
                                               unsigned threads = 1)
{
    config.validate();
    const auto samples = sample_user_sinrs(precoder, models, geometry, noise_power, trials, seed, threads);
    return min_latency_from_samples(samples, config);
}

} // namespace csitl

#endif // CSITL_FBL_HPP
