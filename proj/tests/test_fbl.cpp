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

#include "oracles.hpp"

#include <csitl/fbl.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace csitl;

TEST(BlockError, HalfAtZeroArgument)
{
    // Pick s so that n ln(1+s) = k ln2 - ln(n)/2 holds exactly for n = 200, k = 256.
    const std::int64_t n = 200;
    const int k = 256;
    const double s = std::expm1((k * std::log(2.0) - 0.5 * std::log(200.0)) / 200.0);
    EXPECT_NEAR(block_error(s, n, k), 0.5, 1e-12);
}

TEST(BlockError, VanishesAtHighSinr)
{
    EXPECT_LT(block_error(1e9, 10, 256), 1e-12);
    EXPECT_EQ(block_error(0.0, 10, 256), 1.0);
    EXPECT_EQ(block_error(-1.0, 10, 256), 1.0);
    EXPECT_THROW(block_error(1.0, 0, 256), std::invalid_argument);
}

TEST(BlockError, MatchesIndependentFormula)
{
    for (double s : {0.01, 0.3, 1.0, 3.981, 40.0})
        for (std::int64_t n : {1, 10, 137, 5000, 1000000})
        {
            const double want = oracle::normal_approx_error(s, n, 256);
            EXPECT_NEAR(block_error(s, n, 256), want, 1e-12 * std::max(want, 1e-300) + 1e-300)
                << "s=" << s << " n=" << n;
        }
}

TEST(BlockError, MonotoneInBlocklengthAndSinr)
{
    const int k = 64;
    for (double s : {0.2, 1.0, 5.0})
    {
        double prev = 2.0;
        for (std::int64_t n = 60; n < 3000; n += 37)
        {
            const double e = block_error(s, n, k);
            EXPECT_GE(e, 0.0);
            EXPECT_LE(e, 1.0);
            if (prev < 1.0 && prev > 1e-300)
            {
                EXPECT_LT(e, prev) << "s=" << s << " n=" << n;
            }
            prev = e;
        }
    }
    double prev = 2.0;
    for (double s = 0.1; s < 5.0; s += 0.1)
    {
        const double e = block_error(s, 300, k);
        EXPECT_LT(e, prev);
        prev = e;
    }
}

TEST(MinLatency, SixDbReference)
{
    FblConfig cfg;
    const std::vector<std::vector<double>> samples = {{3.981}};
    const auto n = min_latency_from_samples(samples, cfg);
    ASSERT_TRUE(n.has_value());
    const auto ref = oracle::min_blocklength_scan({3.981}, 256, 1e-4, 100000);
    ASSERT_TRUE(ref.has_value());
    EXPECT_EQ(*n, *ref);
    EXPECT_GE(*n, 125);
    EXPECT_LE(*n, 150);
}

TEST(MinLatency, DeterministicSinrsMatchScan)
{
    FblConfig cfg;
    cfg.payload_bits = 100;
    cfg.target_error = 1e-5;
    for (double base : {0.05, 0.4, 2.0, 30.0})
    {
        const std::vector<double> s = {base, 1.7 * base, 0.9 * base};
        std::vector<std::vector<double>> samples;
        for (double x : s)
            samples.push_back(std::vector<double>(5, x));
        const auto n = min_latency_from_samples(samples, cfg);
        const auto ref = oracle::min_blocklength_scan(s, 100, 1e-5, 10000000);
        ASSERT_TRUE(n && ref);
        EXPECT_EQ(*n, *ref) << "base " << base;
    }
}

TEST(MinLatency, LooseTargetGivesOne)
{
    FblConfig cfg;
    cfg.payload_bits = 1;
    cfg.target_error = 1e-3;
    const double s = 100.0;
    ASSERT_LE(block_error(s, 1, 1), 1e-3);
    EXPECT_EQ(min_latency_from_samples({{s}}, cfg), std::optional<std::int64_t>(1));
}

TEST(MinLatency, InfeasibleWithinCap)
{
    FblConfig cfg;
    cfg.max_blocklength = 50;
    EXPECT_FALSE(min_latency_from_samples({{1.0}}, cfg).has_value());
}

TEST(MinLatency, FadedSamplesMatchScanAndIgnoreOrder)
{
    std::mt19937_64 gen(3);
    std::exponential_distribution<double> ex(1.0);
    std::vector<std::vector<double>> samples(2);
    for (auto &u : samples)
        for (int t = 0; t < 400; ++t)
            u.push_back(5.0 * ex(gen));
    FblConfig cfg;
    cfg.target_error = 1e-2;
    const auto n = min_latency_from_samples(samples, cfg);
    const auto ref = oracle::min_blocklength_scan_samples(samples, 256, 1e-2, 100000000);
    ASSERT_TRUE(n && ref);
    EXPECT_EQ(*n, *ref);
    for (auto &u : samples)
        std::shuffle(u.begin(), u.end(), gen);
    EXPECT_EQ(min_latency_from_samples(samples, cfg), n);
}

TEST(MinLatency, SinrOutageMode)
{
    FblConfig cfg;
    cfg.mode = ReliabilityMode::sinr_outage;
    cfg.target_error = 0.25;
    cfg.payload_bits = 100;
    // Needed SINR at n is 2^(k/n) - 1; with samples {1, 3, 7, 15} the 25% quantile must reach 3.
    const std::vector<std::vector<double>> samples = {{1.0, 3.0, 7.0, 15.0}};
    const auto n = min_latency_from_samples(samples, cfg);
    ASSERT_TRUE(n);
    EXPECT_EQ(*n, 50); // 2^(100/50) - 1 = 3
}

TEST(FblConfig, Validation)
{
    FblConfig c;
    c.payload_bits = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.target_error = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.max_blocklength = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(MinLatency, DeterministicChannelEndToEnd)
{
    const UlaGeometry g(4);
    std::vector<RicianChannelModel> models;
    std::vector<CMatrix> moments;
    for (double az : {0.0, 0.5, 1.0})
    {
        models.emplace_back(1e12, az, CMatrix::Identity(4, 4), 0.0);
        moments.push_back(models.back().second_moment(g));
    }
    const double noise = 1.0;
    const auto [pre, rep] = sinr_balancing_precoder(moments, noise, 1.0);
    std::vector<double> s;
    for (std::size_t i = 0; i < models.size(); ++i)
    {
        const CVector a = steering_vector(g, models[i].azimuth());
        double interf = noise;
        for (std::size_t j = 0; j < pre.columns.size(); ++j)
            if (j != i)
                interf += std::norm(a.dot(pre.columns[j]));
        s.push_back(std::norm(a.dot(pre.columns[i])) / interf);
    }
    FblConfig cfg;
    const auto n = min_latency(pre, models, g, noise, cfg, 1000, 5);
    const auto ref = oracle::min_blocklength_scan(s, 256, 1e-4, 100000000);
    ASSERT_TRUE(n && ref);
    EXPECT_EQ(*n, *ref);
}
