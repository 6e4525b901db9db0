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

#ifndef CSITL_CLI_OUTPUT_HPP
#define CSITL_CLI_OUTPUT_HPP

#include "../scenarios.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csitl::cli
{

/// Fixed 9-significant-digit rendering used by every CSV writer.
inline std::string fmt9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline constexpr const char *infeasible_marker = "infeasible";
inline constexpr const char *below_resolution_marker = "below_resolution";

// Schema: scenario,K,maxmin_mw,std_error
inline std::string render_fig1_csv(const std::vector<Fig1Point> &points)
{
    std::string out = "scenario,K,maxmin_mw,std_error\n";
    for (const auto &p : points)
        out += to_string(p.scenario) + "," + std::to_string(p.pilots) + "," + fmt9(p.maxmin_mw) + "," +
               fmt9(p.std_error) + "\n";
    return out;
}

// Schema: kappa_db,blocklength,balanced_sinr_db_u1..uN
inline std::string render_fig2_csv(const std::vector<Fig2Point> &points)
{
    std::size_t users = 0;
    for (const auto &p : points)
        users = std::max(users, p.balanced_sinr.size());
    std::string out = "kappa_db,blocklength";
    for (std::size_t u = 0; u < users; ++u)
        out += ",balanced_sinr_db_u" + std::to_string(u + 1);
    out += "\n";
    for (const auto &p : points)
    {
        out += fmt9(p.kappa_db) + ",";
        out += p.blocklength ? std::to_string(*p.blocklength) : std::string(infeasible_marker);
        for (double s : p.balanced_sinr)
            out += "," + fmt9(linear_to_db(s));
        out += "\n";
    }
    return out;
}

// Schema: x_m,y_m,scheme,mean_harvested_dbm,log10_outage,trials
// One row per (point, scheme), points row-major (y outer). `trials` counts the
// samples behind log10_outage. Cells with zero observed outages, or with no
// harvesting trial at all for the mean, print below_resolution.
inline std::string render_fig4_csv(const Fig4Result &result, std::int64_t outage_trials)
{
    std::string out = "x_m,y_m,scheme,mean_harvested_dbm,log10_outage,trials\n";
    if (result.schemes.empty())
        return out;
    const std::size_t np = result.schemes.front().mean_harvested_dbm.size();
    for (std::size_t p = 0; p < np; ++p)
        for (const auto &s : result.schemes)
        {
            const Heatmap &m = s.mean_harvested_dbm;
            const Heatmap &o = s.log10_outage;
            out += fmt9(m.x_at(p)) + "," + fmt9(m.y_at(p)) + "," + std::string(to_string(s.scheme)) + "," +
                   (m.below_resolution[p] ? std::string(below_resolution_marker) : fmt9(m.values[p])) + "," +
                   (o.below_resolution[p] ? std::string(below_resolution_marker) : fmt9(o.values[p])) + "," +
                   std::to_string(outage_trials) + "\n";
        }
    return out;
}

// Schema: scheme,coverage,orientations_rad (space separated, per beacon)
inline std::string render_fig4_summary_csv(const Fig4Result &result)
{
    std::string out = "scheme,coverage,orientations_rad\n";
    for (const auto &s : result.schemes)
    {
        out += std::string(to_string(s.scheme)) + "," + fmt9(s.coverage) + ",";
        for (std::size_t b = 0; b < s.orientations.size(); ++b)
            out += (b ? " " : "") + fmt9(s.orientations[b]);
        out += "\n";
    }
    return out;
}

/// Lower-case hex SHA-256.
inline std::string sha256_hex(const std::string &data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream ss;
    for (unsigned int i = 0; i < len; ++i)
        ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return ss.str();
}

/// Hash of the canonical (sorted-key) serialization, so key order in the input does not matter.
inline std::string config_hash(const nlohmann::json &config) { return sha256_hex(config.dump()); }

struct RunManifest
{
    std::string subcommand;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string tool_version;
    double wall_clock_seconds = 0.0;
    std::vector<std::string> outputs;
    std::int64_t nonconverged = 0;
    std::int64_t infeasible = 0;
    nlohmann::json config;

    nlohmann::json to_json() const
    {
        return {{"subcommand", subcommand},
                {"config_hash", config_hash},
                {"seed", seed},
                {"tool_version", tool_version},
                {"wall_clock_seconds", wall_clock_seconds},
                {"outputs", outputs},
                {"flags", {{"nonconverged", nonconverged}, {"infeasible", infeasible}}},
                {"config", config}};
    }
};

} // namespace csitl::cli

#endif // CSITL_CLI_OUTPUT_HPP
