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

// Shared statistical checks for the unit tests and the acceptance binary.

#ifndef CSITL_TESTS_SUPPORT_HPP
#define CSITL_TESTS_SUPPORT_HPP

#include <csitl/channel.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace support
{

/// Largest |empirical - expected| / standard error over the real and imaginary
/// parts of every entry of E[h h^H]. Entries with zero sample variance must match exactly.
inline double second_moment_max_z(const csitl::ChannelSampler &sampler, const Eigen::MatrixXcd &expected,
                                  std::int64_t draws, std::uint64_t seed)
{
    const Eigen::Index m = expected.rows();
    Eigen::MatrixXd sum_re = Eigen::MatrixXd::Zero(m, m), sum_im = sum_re, sq_re = sum_re, sq_im = sum_re;
    csitl::CVector h;
    for (std::int64_t t = 0; t < draws; ++t)
    {
        csitl::RandomStream stream(seed, {static_cast<std::uint64_t>(t)});
        sampler.sample(stream, h);
        const Eigen::MatrixXcd o = h * h.adjoint();
        sum_re += o.real();
        sum_im += o.imag();
        sq_re += o.real().cwiseAbs2();
        sq_im += o.imag().cwiseAbs2();
    }
    const double n = static_cast<double>(draws);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
        {
            for (int part = 0; part < 2; ++part)
            {
                const double s = part ? sum_im(i, j) : sum_re(i, j);
                const double q = part ? sq_im(i, j) : sq_re(i, j);
                const double want = part ? expected(i, j).imag() : expected(i, j).real();
                const double mean = s / n;
                const double var = std::max(0.0, q / n - mean * mean);
                const double se = std::sqrt(var / n);
                const double dev = std::abs(mean - want);
                if (se == 0.0)
                {
                    if (dev > 1e-12 * std::max(1.0, std::abs(want)))
                        return INFINITY;
                    continue;
                }
                worst = std::max(worst, dev / se);
            }
        }
    return worst;
}

inline csitl::CVector random_vector(std::mt19937_64 &gen, Eigen::Index m, double scale = 1.0)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5) * scale);
    csitl::CVector v(m);
    for (Eigen::Index i = 0; i < m; ++i)
        v(i) = csitl::cd(nd(gen), nd(gen));
    return v;
}

inline std::vector<csitl::CMatrix> random_outer_products(std::mt19937_64 &gen, Eigen::Index m, std::size_t k)
{
    std::vector<csitl::CMatrix> h;
    for (std::size_t i = 0; i < k; ++i)
    {
        const csitl::CVector v = random_vector(gen, m);
        h.push_back(v * v.adjoint());
    }
    return h;
}

// Random statistical moment: Rician-like mix of a random rank-one part and an exponential correlation.
inline csitl::CMatrix random_moment(std::mt19937_64 &gen, Eigen::Index m)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const csitl::CVector a = random_vector(gen, m).normalized() * std::sqrt(static_cast<double>(m));
    const double kappa = 10.0 * u(gen);
    csitl::CMatrix r(m, m);
    const double rho = 0.9 * u(gen);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            r(i, j) = std::pow(rho, std::abs(i - j));
    return (0.5 + u(gen)) * (kappa / (1 + kappa) * a * a.adjoint() + 1 / (1 + kappa) * r);
}

} // namespace support

#endif // CSITL_TESTS_SUPPORT_HPP
