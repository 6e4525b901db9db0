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

#ifndef CSITL_MONTECARLO_HPP
#define CSITL_MONTECARLO_HPP

#include "parallel.hpp"
#include "rng.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csitl
{

struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const McEstimate &, const McEstimate &) = default;
};

/// Outage estimate plus the log10 view used by outage heatmaps.
struct OutageEstimate
{
    McEstimate probability;
    /// log10 of the probability, or -(log10(trials) + 1) when no outage was seen.
    double log10_probability = 0.0;
    bool below_resolution = false;
};

class NonFiniteSampleError : public std::runtime_error
{
  public:
    NonFiniteSampleError(std::int64_t trial, double value)
        : std::runtime_error("non-finite Monte Carlo sample at trial " + std::to_string(trial) + " (" +
                             std::to_string(value) + ")"),
          trial_(trial)
    {
    }
    std::int64_t trial() const { return trial_; }

  private:
    std::int64_t trial_;
};

/// Mean and standard error s/sqrt(n) of a fixed sample vector.
inline McEstimate summarize(std::span<const double> samples, std::uint64_t seed = 0)
{
    if (samples.empty())
        throw std::invalid_argument("summarize: no samples");
    for (std::size_t t = 0; t < samples.size(); ++t)
        if (!std::isfinite(samples[t]))
            throw NonFiniteSampleError(static_cast<std::int64_t>(t), samples[t]);

    const auto n = static_cast<double>(samples.size());
    const double mean = pairwise_sum(samples) / n;
    std::vector<double> sq(samples.size());
    for (std::size_t t = 0; t < samples.size(); ++t)
        sq[t] = (samples[t] - mean) * (samples[t] - mean);
    const double var = samples.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), static_cast<std::int64_t>(samples.size()), seed};
}

/// Fraction of samples strictly below `threshold`, binomial standard error.
inline OutageEstimate summarize_outage(std::span<const double> samples, double threshold, std::uint64_t seed = 0)
{
    if (samples.empty())
        throw std::invalid_argument("summarize_outage: no samples");
    std::int64_t below = 0;
    for (std::size_t t = 0; t < samples.size(); ++t)
    {
        if (!std::isfinite(samples[t]))
            throw NonFiniteSampleError(static_cast<std::int64_t>(t), samples[t]);
        below += samples[t] < threshold ? 1 : 0;
    }
    const auto n = static_cast<std::int64_t>(samples.size());
    const double p = static_cast<double>(below) / static_cast<double>(n);
    OutageEstimate out;
    out.probability = {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
    if (below == 0)
    {
        out.below_resolution = true;
        out.log10_probability = -(std::log10(static_cast<double>(n)) + 1.0);
    }
    else
    {
        out.log10_probability = std::log10(p);
    }
    return out;
}

/**
 * Draws `trials` samples, trial t from RandomStream(seed, {t}), on `threads`
 * workers. Sampler signature: double(std::int64_t trial, RandomStream &).
 */
template <class Sampler>
std::vector<double> draw_samples(Sampler &&sampler, std::int64_t trials, std::uint64_t seed, unsigned threads = 1)
{
    if (trials < 1)
        throw std::invalid_argument("Monte Carlo: trials must be >= 1");
    std::vector<double> samples(static_cast<std::size_t>(trials));
    parallel_for(samples.size(), threads, [&](std::size_t t) {
        RandomStream stream(seed, {static_cast<std::uint64_t>(t)});
        samples[t] = sampler(static_cast<std::int64_t>(t), stream);
    });
    return samples;
}

template <class Sampler>
McEstimate mc_mean(Sampler &&sampler, std::int64_t trials, std::uint64_t seed, unsigned threads = 1)
{
    const auto samples = draw_samples(sampler, trials, seed, threads);
    return summarize(samples, seed);
}

template <class Sampler>
OutageEstimate outage_probability(Sampler &&sampler, double threshold, std::int64_t trials, std::uint64_t seed,
                                  unsigned threads = 1)
{
    const auto samples = draw_samples(sampler, trials, seed, threads);
    return summarize_outage(samples, threshold, seed);
}

} // namespace csitl

#endif // CSITL_MONTECARLO_HPP
