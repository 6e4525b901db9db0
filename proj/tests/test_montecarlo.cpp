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

#include <csitl/montecarlo.hpp>
#include <csitl/parallel.hpp>

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>

using namespace csitl;

namespace
{

auto uniform_sampler = [](std::int64_t, RandomStream &s) { return s.uniform(); };

} // namespace

TEST(McMean, ConstantSampler)
{
    const McEstimate e = mc_mean([](std::int64_t, RandomStream &) { return 2.5; }, 1000, 4);
    EXPECT_EQ(e.mean, 2.5);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.trials, 1000);
    EXPECT_EQ(e.seed, 4u);
}

TEST(McMean, UniformMoments)
{
    const McEstimate e = mc_mean(uniform_sampler, 100000, 1);
    EXPECT_NEAR(e.mean, 0.5, 4.0 / std::sqrt(12.0 * 1e5));
    EXPECT_NEAR(e.std_error, 1.0 / std::sqrt(12.0 * 1e5), 0.02 / std::sqrt(12.0 * 1e5));
}

TEST(McMean, BitIdenticalAcrossRunsAndWorkers)
{
    const McEstimate a = mc_mean(uniform_sampler, 50001, 77, 1);
    const McEstimate b = mc_mean(uniform_sampler, 50001, 77, 1);
    const McEstimate c = mc_mean(uniform_sampler, 50001, 77, 8);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.mean, c.mean);
    EXPECT_EQ(a.std_error, c.std_error);
}

TEST(McMean, RejectsNoTrials) { EXPECT_THROW(mc_mean(uniform_sampler, 0, 1), std::invalid_argument); }

TEST(McMean, NonFiniteSampleNamesTrial)
{
    auto bad = [](std::int64_t t, RandomStream &) { return t == 17 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
    try
    {
        mc_mean(bad, 100, 1);
        FAIL() << "expected NonFiniteSampleError";
    }
    catch (const NonFiniteSampleError &e)
    {
        EXPECT_EQ(e.trial(), 17);
        EXPECT_NE(std::string(e.what()).find("17"), std::string::npos);
    }
}

TEST(McMean, StandardErrorScaling)
{
    // log se against log n should have slope -1/2.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::int64_t n : {100, 300, 1000, 3000, 10000, 30000, 100000})
    {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(mc_mean(uniform_sampler, n, 3).std_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    EXPECT_NEAR(slope, -0.5, 0.05);
}

TEST(Outage, Extremes)
{
    const OutageEstimate none = outage_probability(uniform_sampler, -1.0, 1000, 1);
    EXPECT_EQ(none.probability.mean, 0.0);
    EXPECT_TRUE(none.below_resolution);
    EXPECT_DOUBLE_EQ(none.log10_probability, -4.0);
    const OutageEstimate all = outage_probability(uniform_sampler, 2.0, 1000, 1);
    EXPECT_EQ(all.probability.mean, 1.0);
    EXPECT_EQ(all.probability.std_error, 0.0);
    EXPECT_FALSE(all.below_resolution);
    EXPECT_EQ(all.log10_probability, 0.0);
}

TEST(Outage, UniformCdf)
{
    const OutageEstimate e = outage_probability(uniform_sampler, 0.3, 100000, 2);
    EXPECT_NEAR(e.probability.std_error, std::sqrt(0.3 * 0.7 / 1e5), 1e-4);
    EXPECT_NEAR(e.probability.mean, 0.3, 4 * e.probability.std_error);
    EXPECT_NEAR(e.log10_probability, std::log10(e.probability.mean), 1e-15);
}

TEST(Outage, StrictlyBelowThreshold)
{
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(summarize_outage(x, 2.0).probability.mean, 0.25);
}

TEST(Parallel, CoversEveryIndexOnce)
{
    for (unsigned threads : {1u, 3u, 8u})
    {
        std::vector<std::atomic<int>> hits(1001);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
        for (auto &h : hits)
            ASSERT_EQ(h.load(), 1);
    }
}

TEST(Parallel, PropagatesExceptions)
{
    EXPECT_THROW(parallel_for(100, 4,
                              [](std::size_t i) {
                                  if (i == 63)
                                      throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(PairwiseSum, MatchesExactSmallSums)
{
    std::vector<double> x(1000, 0.1);
    EXPECT_NEAR(pairwise_sum(x), 100.0, 1e-12);
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}
