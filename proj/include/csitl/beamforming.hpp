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

#ifndef CSITL_BEAMFORMING_HPP
#define CSITL_BEAMFORMING_HPP

#include "channel.hpp"
#include "linalg.hpp"
#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace csitl
{

struct TransmitCovariance
{
    CMatrix matrix;
    double power_budget = 0.0; // mW
};

struct PrecodingMatrix
{
    std::vector<CVector> columns;
    double power_budget = 0.0; // mW

    double total_power() const
    {
        double s = 0.0;
        for (const auto &w : columns)
            s += w.squaredNorm();
        return s;
    }
};

struct SolverReport
{
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

/// Indices of the k devices with the largest path loss, largest first; ties go to the lowest index.
inline std::vector<std::size_t> select_trained_devices(std::span<const double> path_losses_db, std::size_t k)
{
    if (k < 1 || k > path_losses_db.size())
        throw std::invalid_argument("select_trained_devices: k must lie in [1, number of devices]");
    std::vector<std::size_t> idx(path_losses_db.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return path_losses_db[a] > path_losses_db[b]; });
    idx.resize(k);
    return idx;
}

namespace detail
{

// Coordinates of a Hermitian matrix in the orthonormal basis
// {e_ii} U {(e_ij + e_ji)/sqrt2} U {j(e_ij - e_ji)/sqrt2}, i < j.
// For Hermitian X these are Re tr(E_k X).
inline Eigen::VectorXd herm_coords(const CMatrix &x)
{
    const Eigen::Index m = x.rows();
    Eigen::VectorXd c(m * m);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        c(k++) = x(i, i).real();
    const double s = std::sqrt(2.0);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j)
        {
            c(k++) = s * x(i, j).real();  // (x_ij + x_ji)/sqrt2 = sqrt2 Re x_ij
            c(k++) = -s * x(i, j).imag(); // j(x_ji - x_ij)/sqrt2 = sqrt2 Im x_ji
        }
    return c;
}

inline CMatrix herm_from_coords(const Eigen::VectorXd &c, Eigen::Index m)
{
    CMatrix x = CMatrix::Zero(m, m);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        x(i, i) = c(k++);
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j)
        {
            const double re = c(k++) * s;
            const double im = -c(k++) * s;
            x(i, j) = cd(re, im);
            x(j, i) = cd(re, -im);
        }
    return x;
}

/// Upper bound max eig(sum_i lambda_i H_i) for lambda on the simplex.
inline double dual_bound(const Eigen::VectorXd &lambda, std::span<const CMatrix> h)
{
    CMatrix dual = CMatrix::Zero(h.front().rows(), h.front().cols());
    for (std::size_t i = 0; i < h.size(); ++i)
        dual += lambda(static_cast<Eigen::Index>(i)) * h[i];
    return max_eigenvalue(0.5 * (dual + dual.adjoint()));
}

/// Lawson-Hanson non-negative least squares: min ||A x - b|| subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd &a, const Eigen::VectorXd &b)
{
    const Eigen::Index n = a.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff()) * static_cast<double>(std::max(a.rows(), n));

    auto solve_passive = [&]() {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)])
                idx.push_back(j);
        Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j)
            ap.col(static_cast<Eigen::Index>(j)) = a.col(idx[j]);
        const Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(b);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (std::size_t j = 0; j < idx.size(); ++j)
            z(idx[j]) = zp(static_cast<Eigen::Index>(j));
        return z;
    };

    for (int outer = 0; outer < 3 * n + 10; ++outer)
    {
        const Eigen::VectorXd w = a.transpose() * (b - a * x);
        Eigen::Index pick = -1;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[static_cast<std::size_t>(j)] && w(j) > tol && (pick < 0 || w(j) > w(pick)))
                pick = j;
        if (pick < 0)
            break;
        passive[static_cast<std::size_t>(pick)] = true;
        for (int inner = 0; inner < 3 * n + 10; ++inner)
        {
            const Eigen::VectorXd z = solve_passive();
            double alpha = 1.0;
            bool clipped = false;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
                {
                    const double den = x(j) - z(j);
                    if (den > 0.0 && x(j) / den < alpha)
                        alpha = x(j) / den;
                    clipped = true;
                }
            if (!clipped)
            {
                x = z;
                break;
            }
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && x(j) <= tol)
                {
                    passive[static_cast<std::size_t>(j)] = false;
                    x(j) = 0.0;
                }
        }
    }
    return x;
}

/// Sharpens a barrier dual estimate with complementary slackness: on the range U of
/// the primal iterate, sum_{i in A} lambda_i U^H H_i U = nu I with lambda >= 0 over an
/// active set A. Returns the smallest bound found; every candidate is a valid certificate.
inline double refined_dual_bound(const CMatrix &q, const Eigen::VectorXd &lambda, std::span<const CMatrix> h)
{
    const auto k = static_cast<Eigen::Index>(h.size());
    double best = dual_bound(lambda, h);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(q);
    const Eigen::VectorXd ev = eig.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return lambda(x) > lambda(y); });

    for (double rel : {1e-3, 1e-6})
    {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index j = 0; j < ev.size(); ++j)
            if (ev(j) > rel * ev.maxCoeff())
                cols.push_back(j);
        const auto r = static_cast<Eigen::Index>(cols.size());
        CMatrix u(q.rows(), r);
        for (Eigen::Index j = 0; j < r; ++j)
            u.col(j) = eig.eigenvectors().col(cols[static_cast<std::size_t>(j)]);
        Eigen::MatrixXd proj(r * r, k);
        for (Eigen::Index i = 0; i < k; ++i)
            proj.col(i) = herm_coords(u.adjoint() * h[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] * u);
        const Eigen::VectorXd eye = herm_coords(CMatrix::Identity(r, r));

        // nu is fixed to 1 and lambda rescaled onto the simplex afterwards.
        std::vector<Eigen::Index> sizes;
        for (double rho : {1e-1, 1e-2, 1e-3, 1e-4})
        {
            const auto na = static_cast<Eigen::Index>((lambda.array() >= rho * lambda.maxCoeff()).count());
            if (std::find(sizes.begin(), sizes.end(), na) == sizes.end())
                sizes.push_back(na);
        }
        for (Eigen::Index na : sizes)
        {
            const Eigen::MatrixXd pa = proj.leftCols(na);
            auto consider = [&](const Eigen::VectorXd &sol) {
                Eigen::VectorXd cand = Eigen::VectorXd::Zero(k);
                for (Eigen::Index j = 0; j < na; ++j)
                    cand(order[static_cast<std::size_t>(j)]) = std::max(0.0, sol(j));
                const double sum = cand.sum();
                if (sum > 0.0 && cand.allFinite())
                    best = std::min(best, dual_bound(cand / sum, h));
            };
            consider(nnls(pa, eye));
            // Minimum-norm correction of the barrier multipliers; it keeps their
            // information about the complement of the range, which the equations leave free.
            Eigen::VectorXd lb(na);
            for (Eigen::Index j = 0; j < na; ++j)
                lb(j) = lambda(order[static_cast<std::size_t>(j)]);
            const Eigen::VectorXd plb = pa * lb;
            const double c = plb.squaredNorm() > 0.0 ? plb.dot(eye) / plb.squaredNorm() : 0.0;
            if (c > 0.0)
            {
                lb *= c;
                consider(lb + pa.completeOrthogonalDecomposition().solve(eye - pa * lb));
            }
        }
    }
    return best;
}

} // namespace detail

struct MaxMinOptions
{
    double tol = 1e-6;           // relative duality gap
    int max_iterations = 20000;  // Newton steps, all barrier stages
    double barrier_growth = 50.0;
};

/**
 * Max-min received energy transmit covariance:
 *   maximize min_i tr(Q H_i)  s.t.  tr(Q) = P, Q >= 0.
 *
 * Log-barrier interior point on the (Q, t) epigraph form with equality-
 * constrained Newton steps. After every barrier stage a dual point
 * lambda_i = 1/(tau s_i) on the simplex gives the certificate
 * P lambda_max(sum lambda_i H_i) >= optimum, so `residual` is a true relative
 * duality gap.
 */
inline std::pair<TransmitCovariance, SolverReport>
maxmin_energy_covariance(std::span<const CMatrix> gains, double power, const MaxMinOptions &opt = {})
{
    if (gains.empty())
        throw std::invalid_argument("maxmin_energy_covariance: no constraint matrices");
    if (!(power > 0.0))
        throw std::invalid_argument("maxmin_energy_covariance: power budget must be > 0");
    if (!(opt.tol > 0.0))
        throw std::invalid_argument("maxmin_energy_covariance: tol must be > 0");
    const Eigen::Index m = gains.front().rows();
    for (const auto &h : gains)
        if (h.rows() != m || h.cols() != m)
            throw std::invalid_argument("maxmin_energy_covariance: constraint matrices differ in size");

    const std::size_t k = gains.size();
    const Eigen::Index n = m * m;

    double scale = 0.0;
    double min_trace = std::numeric_limits<double>::infinity();
    for (const auto &h : gains)
    {
        const double tr = h.trace().real();
        scale = std::max(scale, tr);
        min_trace = std::min(min_trace, tr);
    }

    TransmitCovariance cov{CMatrix::Identity(m, m) * cd(power / static_cast<double>(m)), power};
    SolverReport report;
    if (!(min_trace > 0.0))
    {
        // A zero constraint matrix pins the optimum at 0; any feasible Q is optimal.
        report.converged = true;
        return {cov, report};
    }

    // Normalized problem: unit budget, gains / scale.
    Eigen::MatrixXd a(static_cast<Eigen::Index>(k), n);
    std::vector<CMatrix> hn(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        hn[i] = gains[i] / scale;
        hn[i] = 0.5 * (hn[i] + hn[i].adjoint()).eval();
        a.row(static_cast<Eigen::Index>(i)) = detail::herm_coords(hn[i]).transpose();
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e.head(m).setOnes();

    Eigen::VectorXd x = detail::herm_coords(CMatrix::Identity(m, m) / static_cast<double>(m));
    double t = (a * x).minCoeff() - 0.5;

    auto strictly_feasible = [&](const Eigen::VectorXd &xx, double tt) {
        if ((a * xx).minCoeff() - tt <= 0.0)
            return false;
        Eigen::LLT<CMatrix> llt(detail::herm_from_coords(xx, m));
        return llt.info() == Eigen::Success;
    };

    const double degrees = static_cast<double>(k) + static_cast<double>(m);
    // Initial weight from the gap between Q = I/M and uniform multipliers.
    double tau = 1.0;
    {
        const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k));
        const double gap0 = detail::dual_bound(uniform, hn) - (a * x).minCoeff();
        if (gap0 > 0.0)
            tau = std::max(1.0, degrees / gap0);
    }
    double best_upper = std::numeric_limits<double>::infinity();
    double best_lower = -std::numeric_limits<double>::infinity();
    CMatrix best_q = CMatrix::Identity(m, m) / static_cast<double>(m);
    int iterations = 0;
    double gap = std::numeric_limits<double>::infinity();
    const Eigen::Index dim = n + 2;

    while (iterations < opt.max_iterations)
    {
        // Centering.
        for (int inner = 0; inner < 200 && iterations < opt.max_iterations; ++inner)
        {
            ++iterations;
            // Newton step in scaled coordinates dQ = S dX S with S = Q^{1/2}; the
            // log-det Hessian becomes the identity there.
            const CMatrix q = detail::herm_from_coords(x, m);
            const CMatrix sq = hermitian_sqrt(q);
            const Eigen::VectorXd s = a * x - Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), t);
            const Eigen::VectorXd inv_s = s.cwiseInverse();
            const Eigen::VectorXd inv_s2 = inv_s.cwiseAbs2();
            Eigen::MatrixXd as(static_cast<Eigen::Index>(k), n);
            for (std::size_t i = 0; i < k; ++i)
                as.row(static_cast<Eigen::Index>(i)) = detail::herm_coords(sq * hn[i] * sq).transpose();
            const Eigen::VectorXd es = detail::herm_coords(q);

            Eigen::VectorXd grad(n + 1);
            grad.head(n) = -as.transpose() * inv_s - e;
            grad(n) = -tau + inv_s.sum();

            Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
            kkt.topLeftCorner(n, n) = as.transpose() * inv_s2.asDiagonal() * as;
            kkt.topLeftCorner(n, n).diagonal().array() += 1.0;
            kkt.block(0, n, n, 1) = -as.transpose() * inv_s2;
            kkt.block(n, 0, 1, n) = kkt.block(0, n, n, 1).transpose();
            kkt(n, n) = inv_s2.sum();
            kkt.block(n + 1, 0, 1, n) = es.transpose();
            kkt.block(0, n + 1, n, 1) = es;
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
            rhs.head(n + 1) = -grad;
            const Eigen::VectorXd step = kkt.partialPivLu().solve(rhs);
            Eigen::VectorXd dxt(n + 1);
            dxt.head(n) = detail::herm_coords(sq * detail::herm_from_coords(step.head(n), m) * sq);
            dxt(n) = step(n);
            const double decrement = -grad.dot(step.head(n + 1));
            if (!(decrement > 0.0) || decrement < 1e-16)
                break;

            // Damped Newton: the barrier is self-concordant, so 1/(1 + sqrt(decrement))
            // keeps the iterate feasible and decreases it; backtracking only guards rounding.
            double alpha = decrement > 0.25 ? 1.0 / (1.0 + std::sqrt(decrement)) : 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls, alpha *= 0.5)
            {
                const Eigen::VectorXd xn = x + alpha * dxt.head(n);
                const double tn = t + alpha * dxt(n);
                if (strictly_feasible(xn, tn))
                {
                    x = xn;
                    t = tn;
                    moved = true;
                    break;
                }
            }
            if (!moved || decrement < 1e-14)
                break;
        }

        // Certificate. Bounds are tracked across stages since late stages can lose
        // centering accuracy.
        const Eigen::VectorXd s = a * x - Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), t);
        Eigen::VectorXd lambda = (s * tau).cwiseInverse();
        lambda /= lambda.sum();
        CMatrix q = detail::herm_from_coords(x, m);
        q = 0.5 * (q + q.adjoint()).eval();
        q /= q.trace().real();
        double lower = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i)
            lower = std::min(lower, (q * hn[i]).trace().real());
        if (lower > best_lower)
        {
            best_lower = lower;
            best_q = q;
        }
        best_upper = std::min(best_upper, detail::dual_bound(lambda, hn));
        if ((best_upper - best_lower) > opt.tol * best_upper && (best_upper - best_lower) < 1e-2 * best_upper)
            best_upper = std::min(best_upper, detail::refined_dual_bound(q, lambda, hn));
        gap = std::max(0.0, best_upper - best_lower) / std::max(best_upper, std::numeric_limits<double>::min());
        if (gap <= opt.tol)
            break;
        if (degrees / tau < 1e-13)
            break;
        tau *= opt.barrier_growth;
    }

    const CMatrix &q = best_q;
    double lower = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i)
        lower = std::min(lower, (q * gains[i]).trace().real());

    cov.matrix = q * cd(power);
    report.objective = power * lower;
    report.iterations = iterations;
    report.residual = gap;
    report.converged = gap <= opt.tol;
    return {cov, report};
}

/// Average SINR_i = w_i^H R_i w_i / (sum_{j != i} w_j^H R_i w_j + noise).
inline std::vector<double> statistical_sinr(const PrecodingMatrix &precoder, std::span<const CMatrix> second_moments,
                                            double noise_power)
{
    const std::size_t u = precoder.columns.size();
    if (second_moments.size() != u)
        throw std::invalid_argument("statistical_sinr: one second moment per user required");
    std::vector<double> out(u);
    for (std::size_t i = 0; i < u; ++i)
    {
        double interference = noise_power;
        double signal = 0.0;
        for (std::size_t j = 0; j < u; ++j)
        {
            const double g = (precoder.columns[j].adjoint() * second_moments[i] * precoder.columns[j])(0).real();
            if (j == i)
                signal = g;
            else
                interference += g;
        }
        out[i] = signal / interference;
    }
    return out;
}

namespace detail
{

// Perron root and eigenvector (last entry scaled to 1) of the extended
// SINR-balancing coupling matrix. Noise is normalized to 1.
inline std::pair<double, Eigen::VectorXd> balance_powers(const Eigen::MatrixXd &coupling, const Eigen::VectorXd &gain,
                                                         double power)
{
    const Eigen::Index u = gain.size();
    Eigen::MatrixXd ext(u + 1, u + 1);
    const Eigen::VectorXd d = gain.cwiseInverse();
    ext.topLeftCorner(u, u) = d.asDiagonal() * coupling;
    ext.block(0, u, u, 1) = d;
    ext.block(u, 0, 1, u) = (Eigen::RowVectorXd::Ones(u) * d.asDiagonal() * coupling) / power;
    ext(u, u) = d.sum() / power;

    Eigen::EigenSolver<Eigen::MatrixXd> es(ext);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ext.rows(); ++i)
        if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real())
            best = i;
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    v /= v(u);
    Eigen::VectorXd p = v.head(u).cwiseMax(0.0);
    p *= power / p.sum();
    return {es.eigenvalues()(best).real(), p};
}

} // namespace detail

struct SinrBalancingOptions
{
    double tol = 1e-8;
    int max_iterations = 5000;
};

/**
 * Max-min average SINR precoder under a total power budget.
 *
 * Alternates receive-side beam updates in the dual uplink (principal
 * generalized eigenvector of (R_i, sum_{j!=i} q_j R_j + I)) with Perron-root
 * power balancing; the final downlink powers equalize every average SINR.
 */
inline std::pair<PrecodingMatrix, SolverReport> sinr_balancing_precoder(std::span<const CMatrix> second_moments,
                                                                        double noise_power, double power,
                                                                        const SinrBalancingOptions &opt = {})
{
    const std::size_t u = second_moments.size();
    if (u == 0)
        throw std::invalid_argument("sinr_balancing_precoder: no users");
    if (!(noise_power > 0.0) || !(power > 0.0))
        throw std::invalid_argument("sinr_balancing_precoder: noise and power must be > 0");
    const Eigen::Index m = second_moments.front().rows();
    std::vector<CMatrix> r(u);
    for (std::size_t i = 0; i < u; ++i)
    {
        if (second_moments[i].rows() != m || second_moments[i].cols() != m)
            throw std::invalid_argument("sinr_balancing_precoder: second moments differ in size");
        if (!(second_moments[i].trace().real() > 0.0))
            throw std::invalid_argument("sinr_balancing_precoder: zero second moment for a user");
        r[i] = 0.5 * (second_moments[i] + second_moments[i].adjoint());
    }
    const double pn = power / noise_power;
    const auto ui = static_cast<Eigen::Index>(u);

    std::vector<CVector> beams(u);
    for (std::size_t i = 0; i < u; ++i)
        beams[i] = dominant_eigenvector(r[i]);

    auto gains = [&](Eigen::MatrixXd &g) {
        g.resize(ui, ui);
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t j = 0; j < u; ++j)
                g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    (beams[j].adjoint() * r[i] * beams[j])(0).real();
    };

    SolverReport report;
    Eigen::MatrixXd g;
    double gamma_prev = 0.0;
    double change = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < opt.max_iterations; ++it)
    {
        gains(g);
        Eigen::MatrixXd coupling_ul = g.transpose();
        coupling_ul.diagonal().setZero();
        const auto [root, q] = detail::balance_powers(coupling_ul, g.diagonal(), pn);
        const double gamma = 1.0 / root;
        change = std::abs(gamma - gamma_prev) / gamma;
        gamma_prev = gamma;
        if (it > 0 && change <= opt.tol)
            break;
        for (std::size_t i = 0; i < u; ++i)
        {
            CMatrix interference = CMatrix::Identity(m, m);
            for (std::size_t j = 0; j < u; ++j)
                if (j != i)
                    interference += q(static_cast<Eigen::Index>(j)) * r[j];
            beams[i] = principal_generalized_eigenvector(r[i], interference);
        }
    }

    gains(g);
    Eigen::MatrixXd coupling_dl = g;
    coupling_dl.diagonal().setZero();
    const auto [root, p] = detail::balance_powers(coupling_dl, g.diagonal(), pn);

    PrecodingMatrix pre;
    pre.power_budget = power;
    pre.columns.resize(u);
    for (std::size_t i = 0; i < u; ++i)
        pre.columns[i] = beams[i] * std::sqrt(p(static_cast<Eigen::Index>(i)) * noise_power);

    const auto sinr = statistical_sinr(pre, r, noise_power);
    const auto [lo, hi] = std::minmax_element(sinr.begin(), sinr.end());
    const double spread = (*hi - *lo) / *lo;
    report.objective = *lo;
    report.iterations = it;
    report.residual = std::max(change, spread);
    report.converged = report.residual <= opt.tol;
    (void)root;
    return {pre, report};
}

/// Instantaneous SINR of every user for one set of channel draws.
inline void instantaneous_sinr(const PrecodingMatrix &precoder, std::span<const CVector> channels, double noise_power,
                               std::span<double> out)
{
    const std::size_t u = precoder.columns.size();
    for (std::size_t i = 0; i < u; ++i)
    {
        double interference = noise_power;
        double signal = 0.0;
        for (std::size_t j = 0; j < u; ++j)
        {
            const double g = std::norm(channels[i].dot(precoder.columns[j])); // |h_i^H w_j|^2
            if (j == i)
                signal = g;
            else
                interference += g;
        }
        out[i] = signal / interference;
    }
}

/**
 * Per-user SINR samples: trial t draws users' channels in order from
 * RandomStream(seed, {t}). Result is indexed [user][trial].
 */
inline std::vector<std::vector<double>> sample_user_sinrs(const PrecodingMatrix &precoder,
                                                          std::span<const RicianChannelModel> models,
                                                          const UlaGeometry &geometry, double noise_power,
                                                          std::int64_t trials, std::uint64_t seed,
                                                          unsigned threads = 1)
{
    const std::size_t u = precoder.columns.size();
    if (models.size() != u)
        throw std::invalid_argument("sample_user_sinrs: one channel model per user required");
    if (trials < 1)
        throw std::invalid_argument("sample_user_sinrs: trials must be >= 1");
    std::vector<ChannelSampler> samplers;
    samplers.reserve(u);
    for (const auto &mdl : models)
        samplers.emplace_back(mdl, geometry);
    std::vector<std::vector<double>> out(u, std::vector<double>(static_cast<std::size_t>(trials)));
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        thread_local std::vector<CVector> h;
        thread_local std::vector<double> s;
        h.resize(u);
        s.resize(u);
        RandomStream stream(seed, {static_cast<std::uint64_t>(t)});
        for (std::size_t i = 0; i < u; ++i)
        {
            h[i].resize(geometry.num_elements());
            samplers[i].sample(stream, h[i]);
        }
        instantaneous_sinr(precoder, h, noise_power, s);
        for (std::size_t i = 0; i < u; ++i)
            out[i][t] = s[i];
    });
    return out;
}

/// Monte Carlo mean of each user's instantaneous SINR.
inline std::vector<McEstimate> average_sinr_mc(const PrecodingMatrix &precoder,
                                               std::span<const RicianChannelModel> models, const UlaGeometry &geometry,
                                               double noise_power, std::int64_t trials, std::uint64_t seed,
                                               unsigned threads = 1)
{
    const auto samples = sample_user_sinrs(precoder, models, geometry, noise_power, trials, seed, threads);
    std::vector<McEstimate> out;
    out.reserve(samples.size());
    for (const auto &s : samples)
        out.push_back(summarize(s, seed));
    return out;
}

} // namespace csitl

#endif // CSITL_BEAMFORMING_HPP
