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

#ifndef CSITL_SCENARIOS_HPP
#define CSITL_SCENARIOS_HPP

#include "beamforming.hpp"
#include "channel.hpp"
#include "fbl.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "wet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csitl
{

// ---------------------------------------------------------------- Fig. 1 --

enum class PathLossRule
{
    a, // 50 + i/2 dB
    b, // 44 + i dB
};

inline double device_path_loss_db(PathLossRule rule, int device_1based)
{
    return rule == PathLossRule::a ? 50.0 + device_1based / 2.0 : 44.0 + device_1based;
}

inline std::string to_string(PathLossRule rule) { return rule == PathLossRule::a ? "A" : "B"; }

struct Fig1Config
{
    int devices = 16;
    int antennas = 4;
    double element_spacing = 0.5;
    double los_factor_db = 3.0;
    std::vector<PathLossRule> scenarios = {PathLossRule::a, PathLossRule::b};
    std::vector<int> pilots_sweep = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    std::int64_t blocks = 5000;
    std::uint64_t seed = 1;
    /// Empty means -60 deg + (i-1) * 120/(devices-1) deg (8 deg steps for 16 devices).
    std::vector<double> device_azimuths_deg;
    double power_mw = 1.0;
    double solver_tol = 1e-6;

    std::vector<double> azimuths_rad() const
    {
        std::vector<double> out;
        if (!device_azimuths_deg.empty())
        {
            for (double d : device_azimuths_deg)
                out.push_back(deg_to_rad(d));
            return out;
        }
        for (int i = 0; i < devices; ++i)
            out.push_back(devices == 1 ? 0.0 : deg_to_rad(-60.0 + 120.0 * i / (devices - 1)));
        return out;
    }

    void validate() const
    {
        if (devices < 1)
            throw std::invalid_argument("fig1.devices must be >= 1");
        if (antennas < 1)
            throw std::invalid_argument("fig1.antennas must be >= 1");
        if (pilots_sweep.empty())
            throw std::invalid_argument("fig1.pilots_sweep must not be empty");
        for (int k : pilots_sweep)
            if (k < 1 || k > devices)
                throw std::invalid_argument("fig1.pilots_sweep values must lie in [1, devices]");
        if (scenarios.empty())
            throw std::invalid_argument("fig1.scenarios must not be empty");
        if (blocks < 1)
            throw std::invalid_argument("fig1.blocks must be >= 1");
        if (!device_azimuths_deg.empty() && static_cast<int>(device_azimuths_deg.size()) != devices)
            throw std::invalid_argument("fig1.device_azimuths_deg must have one entry per device");
        if (!(power_mw > 0.0))
            throw std::invalid_argument("fig1.power_mw must be > 0");
        if (!(solver_tol > 0.0))
            throw std::invalid_argument("fig1.solver_tol must be > 0");
        if (!(los_factor_db > -std::numeric_limits<double>::infinity()))
            throw std::invalid_argument("fig1.los_factor_db must be a number");
    }

    friend bool operator==(const Fig1Config &, const Fig1Config &) = default;
};

struct Fig1Point
{
    PathLossRule scenario = PathLossRule::a;
    int pilots = 0;
    double maxmin_mw = 0.0; // min over devices of the per-device mean RF power
    double std_error = 0.0;
    int worst_device = 0;   // 0-based
    std::int64_t nonconverged_blocks = 0;
    std::vector<double> worst_device_samples; // per block, for paired comparisons
};

/**
 * Limited-pilot max-min energy beamforming. Per coherence block every device
 * channel is drawn from RandomStream(seed, {block}) (shared by all K and both
 * path-loss scenarios), Q is solved on the K most attenuated devices'
 * instantaneous h h^H, and every device's received power h^H Q h is recorded.
 */
inline std::vector<Fig1Point> run_fig1(const Fig1Config &config, unsigned threads = 1)
{
    config.validate();
    const UlaGeometry geometry(config.antennas, config.element_spacing);
    const auto azimuths = config.azimuths_rad();
    const auto nd = static_cast<std::size_t>(config.devices);
    const auto nblocks = static_cast<std::size_t>(config.blocks);
    const std::size_t nk = config.pilots_sweep.size();
    const CMatrix identity = CMatrix::Identity(config.antennas, config.antennas);

    std::vector<Fig1Point> out;
    for (PathLossRule rule : config.scenarios)
    {
        std::vector<double> losses(nd);
        std::vector<ChannelSampler> samplers;
        for (std::size_t i = 0; i < nd; ++i)
        {
            losses[i] = device_path_loss_db(rule, static_cast<int>(i) + 1);
            samplers.emplace_back(
                RicianChannelModel::from_db(config.los_factor_db, azimuths[i], identity, losses[i]), geometry);
        }
        std::vector<std::vector<std::size_t>> trained(nk);
        for (std::size_t k = 0; k < nk; ++k)
            trained[k] = select_trained_devices(losses, static_cast<std::size_t>(config.pilots_sweep[k]));

        // power[k][device][block]
        std::vector<std::vector<std::vector<double>>> power(
            nk, std::vector<std::vector<double>>(nd, std::vector<double>(nblocks)));
        std::vector<std::vector<std::uint8_t>> failed(nk, std::vector<std::uint8_t>(nblocks, 0));

        parallel_for(nblocks, threads, [&](std::size_t blk) {
            RandomStream stream(config.seed, {static_cast<std::uint64_t>(blk)});
            std::vector<CVector> h(nd);
            for (std::size_t i = 0; i < nd; ++i)
                h[i] = samplers[i].sample(stream).coefficients;
            std::vector<CMatrix> gains;
            for (std::size_t k = 0; k < nk; ++k)
            {
                gains.clear();
                for (std::size_t i : trained[k])
                    gains.push_back(h[i] * h[i].adjoint());
                MaxMinOptions opt;
                opt.tol = config.solver_tol;
                const auto [cov, report] = maxmin_energy_covariance(gains, config.power_mw, opt);
                failed[k][blk] = report.converged ? 0 : 1;
                for (std::size_t i = 0; i < nd; ++i)
                    power[k][i][blk] = (h[i].adjoint() * cov.matrix * h[i])(0).real();
            }
        });

        for (std::size_t k = 0; k < nk; ++k)
        {
            Fig1Point pt;
            pt.scenario = rule;
            pt.pilots = config.pilots_sweep[k];
            pt.maxmin_mw = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < nd; ++i)
            {
                const McEstimate est = summarize(power[k][i], config.seed);
                if (est.mean < pt.maxmin_mw)
                {
                    pt.maxmin_mw = est.mean;
                    pt.std_error = est.std_error;
                    pt.worst_device = static_cast<int>(i);
                }
            }
            pt.worst_device_samples = power[k][static_cast<std::size_t>(pt.worst_device)];
            for (auto f : failed[k])
                pt.nonconverged_blocks += f;
            out.push_back(pt);
        }
    }
    return out;
}

// ---------------------------------------------------------------- Fig. 2 --

struct Fig2Config
{
    int antennas = 4;
    double element_spacing = 0.5;
    double per_link_snr_db = 6.0;
    std::vector<double> azimuths_deg = {0.0, 30.0, 60.0, 90.0};
    /// Empty means i/5 for user i (1-based).
    std::vector<double> correlation_params;
    std::vector<double> los_sweep_db = {0.0, 3.0, 6.0, 10.0, 13.0};
    FblConfig fbl;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    double power_mw = 1.0;
    double solver_tol = 1e-8;

    int users() const { return static_cast<int>(azimuths_deg.size()); }

    std::vector<double> correlations() const
    {
        if (!correlation_params.empty())
            return correlation_params;
        std::vector<double> out;
        for (int i = 1; i <= users(); ++i)
            out.push_back(i / 5.0);
        return out;
    }

    /// Path gain fixed at 1; noise set so that P g M / noise equals the per-link SNR.
    double noise_power_mw() const { return power_mw * antennas / db_to_linear(per_link_snr_db); }

    void validate() const
    {
        if (antennas < 1)
            throw std::invalid_argument("fig2.antennas must be >= 1");
        if (azimuths_deg.empty())
            throw std::invalid_argument("fig2.azimuths_deg must not be empty");
        if (!correlation_params.empty() && correlation_params.size() != azimuths_deg.size())
            throw std::invalid_argument("fig2.correlation_params must have one entry per user");
        for (double r : correlations())
            if (!(r >= 0.0 && r < 1.0))
                throw std::invalid_argument("fig2.correlation_params values must lie in [0, 1)");
        if (los_sweep_db.empty())
            throw std::invalid_argument("fig2.los_sweep_db must not be empty");
        fbl.validate();
        if (trials < 1)
            throw std::invalid_argument("fig2.trials must be >= 1");
        if (!(power_mw > 0.0))
            throw std::invalid_argument("fig2.power_mw must be > 0");
        if (!(solver_tol > 0.0))
            throw std::invalid_argument("fig2.solver_tol must be > 0");
    }

    friend bool operator==(const Fig2Config &, const Fig2Config &) = default;
};

struct Fig2Point
{
    double kappa_db = 0.0;
    std::optional<std::int64_t> blocklength; // nullopt: infeasible within max_blocklength
    std::vector<double> balanced_sinr;       // linear, per user
    SolverReport solver;
};

inline std::vector<RicianChannelModel> fig2_models(const Fig2Config &config, double kappa_db)
{
    std::vector<RicianChannelModel> models;
    const auto corr = config.correlations();
    for (int i = 0; i < config.users(); ++i)
        models.push_back(RicianChannelModel::from_db(kappa_db, deg_to_rad(config.azimuths_deg[i]),
                                                     exponential_correlation(config.antennas, corr[i]), 0.0));
    return models;
}

/**
 * Statistical SINR-balancing precoder and finite-blocklength latency per LoS
 * factor. Fading draws use RandomStream(seed, {trial}) for every kappa.
 */
inline std::vector<Fig2Point> run_fig2(const Fig2Config &config, unsigned threads = 1)
{
    config.validate();
    const UlaGeometry geometry(config.antennas, config.element_spacing);
    const double noise = config.noise_power_mw();
    std::vector<Fig2Point> out;
    for (double kappa_db : config.los_sweep_db)
    {
        const auto models = fig2_models(config, kappa_db);
        std::vector<CMatrix> moments;
        for (const auto &m : models)
            moments.push_back(m.second_moment(geometry));
        SinrBalancingOptions opt;
        opt.tol = config.solver_tol;
        auto [precoder, report] = sinr_balancing_precoder(moments, noise, config.power_mw, opt);

        Fig2Point pt;
        pt.kappa_db = kappa_db;
        pt.balanced_sinr = statistical_sinr(precoder, moments, noise);
        pt.solver = report;
        const auto samples =
            sample_user_sinrs(precoder, models, geometry, noise, config.trials, config.seed, threads);
        pt.blocklength = min_latency_from_samples(samples, config.fbl);
        out.push_back(std::move(pt));
    }
    return out;
}

// ---------------------------------------------------------------- Fig. 4 --

struct BeaconSpec
{
    Point position;
    double orientation_rad = 0.0;
    double tx_power_dbm = 40.0;
    int antennas = 4;
    double element_spacing = 0.5;

    friend bool operator==(const BeaconSpec &, const BeaconSpec &) = default;
};

inline std::vector<BeaconSpec> default_fig4_beacons()
{
    std::vector<BeaconSpec> out;
    for (Point p : {Point{40, 40}, Point{20, 20}, Point{20, 60}, Point{60, 20}, Point{60, 60}})
        out.push_back(BeaconSpec{p});
    return out;
}

struct Fig4Config
{
    double area_width_m = 80.0;
    double area_height_m = 80.0;
    double grid_resolution_m = 1.0;
    std::vector<BeaconSpec> beacons = default_fig4_beacons();
    LinkStatistics link;
    EhCircuitModel eh;
    std::vector<WetSchemeKind> schemes = {WetSchemeKind::aa, WetSchemeKind::sa, WetSchemeKind::aa_pi,
                                          WetSchemeKind::aa_rotated};
    double coverage_threshold_dbm = -20.0;
    double outage_threshold_dbm = -20.0;
    std::int64_t mean_trials = 2000;
    std::int64_t outage_trials = 20000;
    double rotation_step_rad = std::numbers::pi / 36.0;
    std::int64_t rotation_trials = 500;
    int rotation_sweeps = 3;
    bool sa_per_subslot = false;
    std::uint64_t seed = 1;

    void validate() const
    {
        if (!(area_width_m >= 0.0) || !(area_height_m >= 0.0))
            throw std::invalid_argument("fig4.area must be non-negative");
        if (!(grid_resolution_m > 0.0))
            throw std::invalid_argument("fig4.grid_resolution_m must be > 0");
        if (beacons.empty())
            throw std::invalid_argument("fig4.beacons must not be empty");
        for (const auto &b : beacons)
        {
            if (b.position.x < 0.0 || b.position.x > area_width_m || b.position.y < 0.0 ||
                b.position.y > area_height_m)
                throw std::invalid_argument("fig4.beacons positions must lie inside the area");
            if (b.antennas < 1)
                throw std::invalid_argument("fig4.beacons antennas must be >= 1");
            if (!std::isfinite(b.tx_power_dbm))
                throw std::invalid_argument("fig4.beacons tx_power_dbm must be finite");
            if (!(b.element_spacing > 0.0))
                throw std::invalid_argument("fig4.beacons element_spacing must be > 0");
        }
        eh.validate();
        if (!(link.correlation >= 0.0 && link.correlation < 1.0))
            throw std::invalid_argument("fig4.link.correlation must lie in [0, 1)");
        if (schemes.empty())
            throw std::invalid_argument("fig4.schemes must not be empty");
        if (mean_trials < 1 || outage_trials < 1 || rotation_trials < 1)
            throw std::invalid_argument("fig4 trial counts must be >= 1");
        if (!(rotation_step_rad > 0.0))
            throw std::invalid_argument("fig4.rotation_step_rad must be > 0");
        if (rotation_sweeps < 1)
            throw std::invalid_argument("fig4.rotation_sweeps must be >= 1");
    }

    friend bool operator==(const Fig4Config &, const Fig4Config &) = default;
};

/// Uniform grid, row-major with y outer and x inner.
struct Heatmap
{
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;
    std::vector<bool> below_resolution;
    std::string metric;
    std::string units;

    std::size_t size() const { return values.size(); }
    double x_at(std::size_t i) const { return xs[i % xs.size()]; }
    double y_at(std::size_t i) const { return ys[i / xs.size()]; }
};

inline std::vector<double> grid_axis(double extent, double step)
{
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor(extent / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(static_cast<double>(i) * step);
    return out;
}

/// Share of cells with value >= threshold.
inline double coverage_fraction(const Heatmap &map, double threshold)
{
    if (map.values.empty())
        throw std::invalid_argument("coverage_fraction: empty heatmap");
    std::size_t c = 0;
    for (double v : map.values)
        c += v >= threshold ? 1 : 0;
    return static_cast<double>(c) / static_cast<double>(map.values.size());
}

struct SchemeResult
{
    WetSchemeKind scheme = WetSchemeKind::aa;
    Heatmap mean_harvested_dbm;
    Heatmap log10_outage;
    double coverage = 0.0;
    std::vector<double> orientations; // per beacon, as evaluated
};

struct Fig4Result
{
    std::vector<SchemeResult> schemes;
    std::int64_t trials = 0;
};

inline std::vector<PowerBeacon> make_beacons(const Fig4Config &config, WetScheme scheme)
{
    std::vector<PowerBeacon> out;
    for (const auto &b : config.beacons)
        out.push_back(PowerBeacon{UlaGeometry(b.antennas, b.element_spacing, b.orientation_rad, b.position),
                                  b.tx_power_dbm, scheme});
    return out;
}

/**
 * Multi-beacon CSIT-free WET maps. For every grid point p and trial t the
 * scattered components of all beacon links are drawn once from
 * RandomStream(seed, {p, t}) and reused by every scheme, so schemes are
 * compared on common fading.
 */
inline Fig4Result run_fig4(const Fig4Config &config, unsigned threads = 1)
{
    config.validate();
    const auto xs = grid_axis(config.area_width_m, config.grid_resolution_m);
    const auto ys = grid_axis(config.area_height_m, config.grid_resolution_m);
    std::vector<Point> points;
    for (double y : ys)
        for (double x : xs)
            points.push_back({x, y});
    const std::size_t np = points.size();
    const std::size_t nb = config.beacons.size();
    const std::size_t ns = config.schemes.size();

    std::vector<std::vector<PowerBeacon>> deployments(ns);
    for (std::size_t s = 0; s < ns; ++s)
    {
        switch (config.schemes[s])
        {
        case WetSchemeKind::aa:
            deployments[s] = make_beacons(config, WetScheme::aa());
            break;
        case WetSchemeKind::aa_pi:
            deployments[s] = make_beacons(config, WetScheme::aa_pi());
            break;
        case WetSchemeKind::sa:
            deployments[s] = make_beacons(config, WetScheme::sa());
            break;
        case WetSchemeKind::aa_rotated: {
            RotationSearch search;
            search.points = points;
            search.stats = config.link;
            search.eh = config.eh;
            search.threshold_dbm = config.coverage_threshold_dbm;
            search.orientation_grid = default_orientation_grid(config.rotation_step_rad);
            search.trials = config.rotation_trials;
            search.seed = config.seed;
            search.sweeps = config.rotation_sweeps;
            search.threads = threads;
            const auto base = make_beacons(config, WetScheme::aa());
            const RotationResult rot = optimize_rotation(base, search);
            for (std::size_t b = 0; b < nb; ++b)
            {
                PowerBeacon pb = base[b];
                pb.scheme = WetScheme::aa_rotated(rot.orientations[b] - base[b].geometry.orientation());
                deployments[s].push_back(pb);
            }
            break;
        }
        }
    }

    const std::int64_t trials = std::max(config.mean_trials, config.outage_trials);
    const auto nt = static_cast<std::size_t>(trials);
    const double outage_mw = dbm_to_mw(config.outage_threshold_dbm);

    std::vector<std::vector<double>> mean_mw(ns, std::vector<double>(np));
    std::vector<std::vector<OutageEstimate>> outage(ns, std::vector<OutageEstimate>(np));

    parallel_for(np, threads, [&](std::size_t p) {
        // samplers[s][b]; scattered parts do not depend on the scheme.
        std::vector<std::vector<ChannelSampler>> samplers(ns);
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t b = 0; b < nb; ++b)
            {
                const UlaGeometry g = deployments[s][b].effective_geometry();
                samplers[s].emplace_back(link_model(g, points[p], config.link), g);
            }
        std::vector<CVector> scatter(nb);
        std::vector<ChannelRealization> h(nb);
        std::vector<std::vector<double>> harvested(ns, std::vector<double>(nt));
        for (std::size_t t = 0; t < nt; ++t)
        {
            RandomStream stream(config.seed, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(t)});
            for (std::size_t b = 0; b < nb; ++b)
                samplers[0][b].sample_scatter(stream, scatter[b]);
            for (std::size_t s = 0; s < ns; ++s)
            {
                for (std::size_t b = 0; b < nb; ++b)
                    h[b].coefficients = samplers[s][b].mean() + scatter[b];
                if (config.sa_per_subslot)
                {
                    const auto slots = subslot_rf_power(deployments[s], h);
                    double acc = 0.0;
                    for (double v : slots)
                        acc += harvest(config.eh, v);
                    harvested[s][t] = acc / static_cast<double>(slots.size());
                }
                else
                {
                    harvested[s][t] = harvest(config.eh, grid_point_rf_power(deployments[s], h));
                }
            }
        }
        for (std::size_t s = 0; s < ns; ++s)
        {
            const std::span<const double> all(harvested[s]);
            mean_mw[s][p] = summarize(all.first(static_cast<std::size_t>(config.mean_trials)), config.seed).mean;
            outage[s][p] =
                summarize_outage(all.first(static_cast<std::size_t>(config.outage_trials)), outage_mw, config.seed);
        }
    });

    Fig4Result result;
    result.trials = trials;
    const double mean_floor_dbm =
        mw_to_dbm(config.eh.efficiency * dbm_to_mw(config.eh.sensitivity_dbm) / static_cast<double>(config.mean_trials));
    for (std::size_t s = 0; s < ns; ++s)
    {
        SchemeResult sr;
        sr.scheme = config.schemes[s];
        sr.mean_harvested_dbm = {xs, ys, {}, std::vector<bool>(np, false), "mean_harvested", "dBm"};
        sr.log10_outage = {xs, ys, {}, std::vector<bool>(np, false), "log10_outage", "log10(probability)"};
        for (std::size_t p = 0; p < np; ++p)
        {
            // No harvesting trial at all: report the smallest resolvable mean instead of -inf.
            const bool none = !(mean_mw[s][p] > 0.0);
            sr.mean_harvested_dbm.values.push_back(none ? mean_floor_dbm : mw_to_dbm(mean_mw[s][p]));
            sr.mean_harvested_dbm.below_resolution[p] = none;
            sr.log10_outage.values.push_back(outage[s][p].log10_probability);
            sr.log10_outage.below_resolution[p] = outage[s][p].below_resolution;
        }
        sr.coverage = coverage_fraction(sr.mean_harvested_dbm, config.coverage_threshold_dbm);
        for (const auto &b : deployments[s])
            sr.orientations.push_back(b.effective_geometry().orientation());
        result.schemes.push_back(std::move(sr));
    }
    return result;
}

} // namespace csitl

#endif // CSITL_SCENARIOS_HPP
