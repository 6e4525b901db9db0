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

#ifndef CSITL_WET_HPP
#define CSITL_WET_HPP

#include "channel.hpp"
#include "parallel.hpp"
#include "units.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csitl
{

/// Nonlinear harvester: dead below sensitivity, linear with efficiency, flat above saturation.
struct EhCircuitModel
{
    double sensitivity_dbm = -22.0;
    double saturation_dbm = -8.0;
    double efficiency = 0.35;

    void validate() const
    {
        if (!(sensitivity_dbm < saturation_dbm))
            throw std::invalid_argument("EhCircuitModel: sensitivity must be below saturation");
        if (!(efficiency > 0.0 && efficiency <= 1.0))
            throw std::invalid_argument("EhCircuitModel: efficiency must lie in (0, 1]");
    }

    double max_output_mw() const { return efficiency * dbm_to_mw(saturation_dbm); }

    friend bool operator==(const EhCircuitModel &, const EhCircuitModel &) = default;
};

inline double harvest(const EhCircuitModel &model, double p_rf_mw)
{
    const double sensitivity = dbm_to_mw(model.sensitivity_dbm);
    const double saturation = dbm_to_mw(model.saturation_dbm);
    if (p_rf_mw < sensitivity)
        return 0.0;
    if (p_rf_mw > saturation)
        return model.efficiency * saturation;
    return model.efficiency * p_rf_mw;
}

enum class WetSchemeKind
{
    aa,         // all antennas, same signal
    aa_pi,      // all antennas, pi phase step between neighbours
    aa_rotated, // plain AA on an optimized array orientation
    sa,         // one antenna per sub-slot
};

inline std::string_view to_string(WetSchemeKind kind)
{
    switch (kind)
    {
    case WetSchemeKind::aa:
        return "AA";
    case WetSchemeKind::aa_pi:
        return "AA_PI";
    case WetSchemeKind::aa_rotated:
        return "AA_ROTATED";
    case WetSchemeKind::sa:
        return "SA";
    }
    return "?";
}

inline WetSchemeKind parse_scheme_kind(std::string_view name)
{
    if (name == "AA")
        return WetSchemeKind::aa;
    if (name == "AA_PI")
        return WetSchemeKind::aa_pi;
    if (name == "AA_ROTATED")
        return WetSchemeKind::aa_rotated;
    if (name == "SA")
        return WetSchemeKind::sa;
    throw std::invalid_argument("unknown WET scheme '" + std::string(name) + "'");
}

class WetScheme
{
  public:
    static WetScheme aa() { return WetScheme(WetSchemeKind::aa, std::nullopt); }
    static WetScheme aa_pi() { return WetScheme(WetSchemeKind::aa_pi, std::nullopt); }
    static WetScheme sa() { return WetScheme(WetSchemeKind::sa, std::nullopt); }
    /// Rotation is added to the beacon's mounting orientation.
    static WetScheme aa_rotated(double rotation) { return WetScheme(WetSchemeKind::aa_rotated, rotation); }

    WetSchemeKind kind() const { return kind_; }
    const std::optional<double> &rotation() const { return rotation_; }

    bool is_aa_family() const { return kind_ != WetSchemeKind::sa; }

    /// Phase increment between consecutive elements for AA-type schemes.
    double phase_step() const { return kind_ == WetSchemeKind::aa_pi ? std::numbers::pi : 0.0; }

  private:
    WetScheme(WetSchemeKind kind, std::optional<double> rotation) : kind_(kind), rotation_(rotation)
    {
        if ((kind == WetSchemeKind::aa_rotated) != rotation.has_value())
            throw std::invalid_argument("WetScheme: rotation is required for AA_ROTATED and only for it");
        if (rotation && !std::isfinite(*rotation))
            throw std::invalid_argument("WetScheme: rotation must be finite");
    }

    WetSchemeKind kind_;
    std::optional<double> rotation_;
};

struct PowerBeacon
{
    UlaGeometry geometry;
    double tx_power_dbm = 40.0;
    WetScheme scheme = WetScheme::aa();

    /// Geometry actually radiating, i.e. including an AA_ROTATED rotation.
    UlaGeometry effective_geometry() const
    {
        if (scheme.rotation())
            return geometry.rotated_to(geometry.orientation() + *scheme.rotation());
        return geometry;
    }

    double tx_power_mw() const { return dbm_to_mw(tx_power_dbm); }
};

/// Entry m is exp(j m delta)/sqrt(M).
inline CVector aa_weights(int m, double phase_step)
{
    if (m < 1)
        throw std::invalid_argument("aa_weights: m must be >= 1");
    CVector w(m);
    const double amp = 1.0 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i)
        w(i) = std::polar(amp, phase_step * i);
    return w;
}

/// P |h^H w|^2.
inline double rf_power_aa(const CVector &h, const CVector &w, double power_mw)
{
    if (h.size() != w.size())
        throw std::invalid_argument("rf_power_aa: dimension mismatch");
    return power_mw * std::norm(h.dot(w));
}

/// Block-averaged power when each of the M elements radiates P alone for 1/M of the block.
inline double rf_power_sa(const CVector &h, double power_mw)
{
    if (h.size() < 1)
        throw std::invalid_argument("rf_power_sa: empty channel");
    return power_mw * h.squaredNorm() / static_cast<double>(h.size());
}

/// Block-averaged RF power of one beacon under its scheme.
inline double beacon_rf_power(const PowerBeacon &beacon, const CVector &h)
{
    if (beacon.scheme.is_aa_family())
        return rf_power_aa(h, aa_weights(static_cast<int>(h.size()), beacon.scheme.phase_step()),
                           beacon.tx_power_mw());
    return rf_power_sa(h, beacon.tx_power_mw());
}

/// Independent beacon signals: per-beacon powers add.
inline double grid_point_rf_power(std::span<const PowerBeacon> beacons, std::span<const ChannelRealization> channels)
{
    if (beacons.size() != channels.size())
        throw std::invalid_argument("grid_point_rf_power: one channel realization per beacon required");
    double total = 0.0;
    for (std::size_t b = 0; b < beacons.size(); ++b)
        total += beacon_rf_power(beacons[b], channels[b].coefficients);
    return total;
}

/**
 * RF power seen in each SA sub-slot: SA beacons radiate from element
 * (slot mod M_b), AA-type beacons contribute their constant power.
 * The number of sub-slots is the largest SA array size (1 if there is none).
 */
inline std::vector<double> subslot_rf_power(std::span<const PowerBeacon> beacons,
                                            std::span<const ChannelRealization> channels)
{
    if (beacons.size() != channels.size())
        throw std::invalid_argument("subslot_rf_power: one channel realization per beacon required");
    int slots = 1;
    for (const auto &b : beacons)
        if (!b.scheme.is_aa_family())
            slots = std::max(slots, b.geometry.num_elements());
    std::vector<double> out(static_cast<std::size_t>(slots), 0.0);
    for (std::size_t b = 0; b < beacons.size(); ++b)
    {
        const CVector &h = channels[b].coefficients;
        if (beacons[b].scheme.is_aa_family())
        {
            const double p = beacon_rf_power(beacons[b], h);
            for (auto &v : out)
                v += p;
        }
        else
        {
            for (int s = 0; s < slots; ++s)
                out[static_cast<std::size_t>(s)] +=
                    beacons[b].tx_power_mw() * std::norm(h(s % static_cast<int>(h.size())));
        }
    }
    return out;
}

/// Large-scale link statistics shared by every beacon-to-point link.
struct LinkStatistics
{
    double pathloss_exponent = 3.0;
    double fixed_loss_db = 26.0;
    double los_factor_db = 10.0;
    double correlation = 0.0; // exponential correlation parameter

    friend bool operator==(const LinkStatistics &, const LinkStatistics &) = default;
};

/// Rician model of the link from an array to a point; azimuth is the bearing in the global frame.
inline RicianChannelModel link_model(const UlaGeometry &array, const Point &point, const LinkStatistics &stats)
{
    const double pl = path_loss_log_distance(distance(array.position(), point), stats.pathloss_exponent,
                                             stats.fixed_loss_db);
    return RicianChannelModel::from_db(stats.los_factor_db, bearing(array.position(), point),
                                       exponential_correlation(array.num_elements(), stats.correlation), pl);
}

struct RotationResult
{
    std::vector<double> orientations; // per beacon, absolute
    double coverage = 0.0;            // objective at the returned orientations
    int sweeps = 0;
};

/// k * step for k = 0 .. ceil(pi/step) - 1. A ULA pattern with real weights is pi-periodic.
inline std::vector<double> default_orientation_grid(double step = std::numbers::pi / 36.0)
{
    if (!(step > 0.0))
        throw std::invalid_argument("default_orientation_grid: step must be > 0");
    std::vector<double> grid;
    for (int k = 0; k * step < std::numbers::pi - 1e-12; ++k)
        grid.push_back(k * step);
    return grid;
}

struct RotationSearch
{
    std::span<const Point> points;
    LinkStatistics stats;
    EhCircuitModel eh;
    double threshold_dbm = -20.0;
    std::vector<double> orientation_grid = default_orientation_grid();
    std::int64_t trials = 500;
    std::uint64_t seed = 0;
    int sweeps = 3;
    unsigned threads = 1;
};

/**
 * Per-beacon array orientations maximizing the share of points whose average
 * harvested power reaches the threshold. Coordinate ascent: one beacon at a
 * time, exhaustive over the orientation grid, strict improvements only,
 * up to `sweeps` passes. SA beacons keep their orientation.
 *
 * Fading uses the same streams as grid evaluation: RandomStream(seed,
 * {point, trial}) with beacons drawn in order. The scattered part does not
 * depend on orientation, so only the LoS array factor is recomputed.
 */
inline RotationResult optimize_rotation(std::span<const PowerBeacon> beacons, const RotationSearch &search)
{
    search.eh.validate();
    if (search.orientation_grid.empty())
        throw std::invalid_argument("optimize_rotation: empty orientation grid");
    if (search.trials < 1)
        throw std::invalid_argument("optimize_rotation: trials must be >= 1");

    const std::size_t nb = beacons.size();
    const std::size_t np = search.points.size();
    const auto nt = static_cast<std::size_t>(search.trials);
    const double threshold_mw = dbm_to_mw(search.threshold_dbm);

    RotationResult result;
    for (const auto &b : beacons)
        result.orientations.push_back(b.effective_geometry().orientation());
    if (np == 0 || nb == 0)
        return result;

    // Orientation-independent quantities, per beacon: scattered projection s = u^H w
    // (AA types) or fixed power (SA).
    std::vector<std::vector<cd>> scatter_proj(nb);
    std::vector<std::vector<double>> power(nb, std::vector<double>(np * nt));
    std::vector<CVector> weights(nb);
    for (std::size_t b = 0; b < nb; ++b)
    {
        weights[b] = aa_weights(beacons[b].geometry.num_elements(), beacons[b].scheme.phase_step());
        if (beacons[b].scheme.is_aa_family())
            scatter_proj[b].resize(np * nt);
    }

    // LoS array-factor term for beacon b pointing at `orientation`, per point.
    auto los_term = [&](std::size_t b, double orientation, std::vector<cd> &out) {
        const UlaGeometry g = beacons[b].geometry.rotated_to(orientation);
        out.resize(np);
        for (std::size_t p = 0; p < np; ++p)
        {
            const RicianChannelModel mdl = link_model(g, search.points[p], search.stats);
            const CVector mean = std::sqrt(mdl.path_gain()) * mdl.los_weight() * steering_vector(g, mdl.azimuth());
            out[p] = mean.dot(weights[b]);
        }
    };

    parallel_for(np, search.threads, [&](std::size_t p) {
        std::vector<ChannelSampler> samplers;
        samplers.reserve(nb);
        for (std::size_t b = 0; b < nb; ++b)
        {
            const UlaGeometry g = beacons[b].effective_geometry();
            samplers.emplace_back(link_model(g, search.points[p], search.stats), g);
        }
        CVector u;
        for (std::size_t t = 0; t < nt; ++t)
        {
            RandomStream stream(search.seed, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(t)});
            for (std::size_t b = 0; b < nb; ++b)
            {
                samplers[b].sample_scatter(stream, u);
                if (beacons[b].scheme.is_aa_family())
                    scatter_proj[b][p * nt + t] = u.dot(weights[b]);
                else
                    power[b][p * nt + t] = rf_power_sa(u + samplers[b].mean(), beacons[b].tx_power_mw());
            }
        }
    });

    auto fill_power = [&](std::size_t b, const std::vector<cd> &los, std::vector<double> &out) {
        const double ptx = beacons[b].tx_power_mw();
        parallel_for(np, search.threads, [&](std::size_t p) {
            for (std::size_t t = 0; t < nt; ++t)
                out[p * nt + t] = ptx * std::norm(los[p] + scatter_proj[b][p * nt + t]);
        });
    };

    std::vector<cd> los;
    for (std::size_t b = 0; b < nb; ++b)
        if (beacons[b].scheme.is_aa_family())
        {
            los_term(b, result.orientations[b], los);
            fill_power(b, los, power[b]);
        }

    std::vector<double> rest(np * nt);
    std::vector<std::uint8_t> covered(np);
    auto coverage_with = [&](const std::vector<double> &candidate) {
        parallel_for(np, search.threads, [&](std::size_t p) {
            std::vector<double> h(nt);
            for (std::size_t t = 0; t < nt; ++t)
                h[t] = harvest(search.eh, rest[p * nt + t] + candidate[p * nt + t]);
            covered[p] = pairwise_sum(h) / static_cast<double>(nt) >= threshold_mw ? 1 : 0;
        });
        std::size_t c = 0;
        for (auto v : covered)
            c += v;
        return static_cast<double>(c) / static_cast<double>(np);
    };

    std::fill(rest.begin(), rest.end(), 0.0);
    for (std::size_t b = 1; b < nb; ++b)
        for (std::size_t i = 0; i < rest.size(); ++i)
            rest[i] += power[b][i];
    double best = coverage_with(power[0]);

    std::vector<double> candidate(np * nt);
    for (int sweep = 0; sweep < search.sweeps; ++sweep)
    {
        bool improved = false;
        for (std::size_t b = 0; b < nb; ++b)
        {
            if (!beacons[b].scheme.is_aa_family())
                continue;
            std::fill(rest.begin(), rest.end(), 0.0);
            for (std::size_t o = 0; o < nb; ++o)
                if (o != b)
                    for (std::size_t i = 0; i < rest.size(); ++i)
                        rest[i] += power[o][i];
            for (double orientation : search.orientation_grid)
            {
                los_term(b, orientation, los);
                fill_power(b, los, candidate);
                const double c = coverage_with(candidate);
                if (c > best)
                {
                    best = c;
                    result.orientations[b] = normalize_angle(orientation);
                    power[b].swap(candidate);
                    candidate.resize(np * nt);
                    improved = true;
                }
            }
        }
        result.sweeps = sweep + 1;
        if (!improved)
            break;
    }
    result.coverage = best;
    return result;
}

} // namespace csitl

#endif // CSITL_WET_HPP
