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

#ifndef CSITL_CLI_CONFIG_HPP
#define CSITL_CLI_CONFIG_HPP

#include "../scenarios.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csitl::cli
{

using json = nlohmann::json;

class ConfigError : public std::runtime_error
{
  public:
    enum class Kind
    {
        syntax,
        validation,
        unknown_key,
        io,
    };

    ConfigError(Kind kind, const std::string &what, std::string key_path = {}, int line = 0)
        : std::runtime_error(what), kind_(kind), key_path_(std::move(key_path)), line_(line)
    {
    }

    Kind kind() const { return kind_; }
    const std::string &key_path() const { return key_path_; }
    int line() const { return line_; }

  private:
    Kind kind_;
    std::string key_path_;
    int line_;
};

namespace detail
{

// Reads typed members of a JSON object, remembering what was consumed so that
// leftovers can be reported as unknown keys.
class ObjectReader
{
  public:
    ObjectReader(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(ConfigError::Kind::validation, path_name() + ": expected an object", path_);
    }

    template <class T>
    void get(const char *key, T &out)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end())
            return;
        try
        {
            out = convert<T>(*it, key_path(key));
        }
        catch (const json::exception &e)
        {
            throw ConfigError(ConfigError::Kind::validation, key_path(key) + ": " + e.what(), key_path(key));
        }
    }

    const json *child(const char *key)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string key_path(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const
    {
        for (const auto &item : j_.items())
            if (!seen_.count(item.key()))
                throw ConfigError(ConfigError::Kind::unknown_key,
                                  "unknown key '" + key_path(item.key()) + "'", key_path(item.key()));
    }

  private:
    std::string path_name() const { return path_.empty() ? "<root>" : path_; }

    template <class T>
    static T convert(const json &v, const std::string &where)
    {
        if constexpr (std::is_same_v<T, bool>)
        {
            if (!v.is_boolean())
                throw ConfigError(ConfigError::Kind::validation, where + ": expected a boolean", where);
            return v.get<bool>();
        }
        else if constexpr (std::is_integral_v<T>)
        {
            if (!v.is_number_integer())
                throw ConfigError(ConfigError::Kind::validation, where + ": expected an integer", where);
            if constexpr (std::is_unsigned_v<T>)
                if (v.is_number_integer() && !v.is_number_unsigned())
                    throw ConfigError(ConfigError::Kind::validation, where + ": expected a non-negative integer",
                                      where);
            return v.get<T>();
        }
        else if constexpr (std::is_floating_point_v<T>)
        {
            if (!v.is_number())
                throw ConfigError(ConfigError::Kind::validation, where + ": expected a number", where);
            return v.get<T>();
        }
        else if constexpr (std::is_same_v<T, std::string>)
        {
            if (!v.is_string())
                throw ConfigError(ConfigError::Kind::validation, where + ": expected a string", where);
            return v.get<std::string>();
        }
        else
        {
            if (!v.is_array())
                throw ConfigError(ConfigError::Kind::validation, where + ": expected an array", where);
            T out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out.push_back(convert<typename T::value_type>(v[i], where + "[" + std::to_string(i) + "]"));
            return out;
        }
    }

    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class Fn>
void validated(const std::string &section, Fn &&fn)
{
    try
    {
        fn();
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const std::invalid_argument &e)
    {
        std::string msg = e.what();
        std::string key = section;
        // Messages start with the key path, e.g. "fig1.pilots_sweep values ...".
        const auto sp = msg.find(' ');
        if (msg.rfind(section + ".", 0) == 0 && sp != std::string::npos)
            key = msg.substr(0, sp);
        throw ConfigError(ConfigError::Kind::validation, msg, key);
    }
}

inline int line_of_offset(const std::string &text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

} // namespace detail

// ------------------------------------------------------------- fig1 ------

inline Fig1Config fig1_from_json(const json &j, const std::string &path = "fig1")
{
    Fig1Config c;
    detail::ObjectReader r(j, path);
    r.get("devices", c.devices);
    r.get("antennas", c.antennas);
    r.get("element_spacing", c.element_spacing);
    r.get("los_factor_db", c.los_factor_db);
    std::vector<std::string> scen;
    r.get("scenarios", scen);
    if (j.contains("scenarios"))
    {
        c.scenarios.clear();
        for (const auto &s : scen)
        {
            if (s == "A")
                c.scenarios.push_back(PathLossRule::a);
            else if (s == "B")
                c.scenarios.push_back(PathLossRule::b);
            else
                throw ConfigError(ConfigError::Kind::validation,
                                  r.key_path("scenarios") + ": unknown path-loss scenario '" + s + "'",
                                  r.key_path("scenarios"));
        }
    }
    r.get("pilots_sweep", c.pilots_sweep);
    r.get("blocks", c.blocks);
    r.get("seed", c.seed);
    r.get("device_azimuths_deg", c.device_azimuths_deg);
    r.get("power_mw", c.power_mw);
    r.get("solver_tol", c.solver_tol);
    r.finish();
    detail::validated("fig1", [&] { c.validate(); });
    return c;
}

inline json to_json(const Fig1Config &c)
{
    json scen = json::array();
    for (auto s : c.scenarios)
        scen.push_back(to_string(s));
    return {{"devices", c.devices},
            {"antennas", c.antennas},
            {"element_spacing", c.element_spacing},
            {"los_factor_db", c.los_factor_db},
            {"scenarios", scen},
            {"pilots_sweep", c.pilots_sweep},
            {"blocks", c.blocks},
            {"seed", c.seed},
            {"device_azimuths_deg", c.device_azimuths_deg},
            {"power_mw", c.power_mw},
            {"solver_tol", c.solver_tol}};
}

// ------------------------------------------------------------- fig2 ------

inline FblConfig fbl_from_json(const json &j, const std::string &path)
{
    FblConfig c;
    detail::ObjectReader r(j, path);
    r.get("payload_bits", c.payload_bits);
    r.get("target_error", c.target_error);
    r.get("max_blocklength", c.max_blocklength);
    std::string mode;
    r.get("mode", mode);
    if (j.contains("mode"))
    {
        if (mode == "averaged_error")
            c.mode = ReliabilityMode::averaged_error;
        else if (mode == "sinr_outage")
            c.mode = ReliabilityMode::sinr_outage;
        else
            throw ConfigError(ConfigError::Kind::validation, r.key_path("mode") + ": unknown mode '" + mode + "'",
                              r.key_path("mode"));
    }
    r.finish();
    return c;
}

inline Fig2Config fig2_from_json(const json &j, const std::string &path = "fig2")
{
    Fig2Config c;
    detail::ObjectReader r(j, path);
    r.get("antennas", c.antennas);
    r.get("element_spacing", c.element_spacing);
    r.get("per_link_snr_db", c.per_link_snr_db);
    r.get("azimuths_deg", c.azimuths_deg);
    r.get("correlation_params", c.correlation_params);
    r.get("los_sweep_db", c.los_sweep_db);
    if (const json *f = r.child("fbl"))
        c.fbl = fbl_from_json(*f, r.key_path("fbl"));
    r.get("trials", c.trials);
    r.get("seed", c.seed);
    r.get("power_mw", c.power_mw);
    r.get("solver_tol", c.solver_tol);
    r.finish();
    detail::validated("fig2", [&] {
        try
        {
            c.validate();
        }
        catch (const std::invalid_argument &e)
        {
            const std::string msg = e.what();
            if (msg.rfind("FblConfig: ", 0) == 0)
            {
                const std::string rest = msg.substr(11);
                throw std::invalid_argument("fig2.fbl." + rest);
            }
            throw;
        }
    });
    return c;
}

inline json to_json(const Fig2Config &c)
{
    return {{"antennas", c.antennas},
            {"element_spacing", c.element_spacing},
            {"per_link_snr_db", c.per_link_snr_db},
            {"azimuths_deg", c.azimuths_deg},
            {"correlation_params", c.correlation_params},
            {"los_sweep_db", c.los_sweep_db},
            {"fbl",
             {{"payload_bits", c.fbl.payload_bits},
              {"target_error", c.fbl.target_error},
              {"max_blocklength", c.fbl.max_blocklength},
              {"mode", c.fbl.mode == ReliabilityMode::averaged_error ? "averaged_error" : "sinr_outage"}}},
            {"trials", c.trials},
            {"seed", c.seed},
            {"power_mw", c.power_mw},
            {"solver_tol", c.solver_tol}};
}

// ------------------------------------------------------------- fig4 ------

inline Fig4Config fig4_from_json(const json &j, const std::string &path = "fig4")
{
    Fig4Config c;
    detail::ObjectReader r(j, path);
    std::vector<double> area;
    r.get("area_m", area);
    if (j.contains("area_m"))
    {
        if (area.size() != 2)
            throw ConfigError(ConfigError::Kind::validation, r.key_path("area_m") + ": expected [width, height]",
                              r.key_path("area_m"));
        c.area_width_m = area[0];
        c.area_height_m = area[1];
    }
    r.get("grid_resolution_m", c.grid_resolution_m);
    if (const json *bs = r.child("beacons"))
    {
        if (!bs->is_array())
            throw ConfigError(ConfigError::Kind::validation, r.key_path("beacons") + ": expected an array",
                              r.key_path("beacons"));
        c.beacons.clear();
        for (std::size_t i = 0; i < bs->size(); ++i)
        {
            BeaconSpec b;
            detail::ObjectReader br((*bs)[i], r.key_path("beacons") + "[" + std::to_string(i) + "]");
            br.get("x", b.position.x);
            br.get("y", b.position.y);
            br.get("orientation_rad", b.orientation_rad);
            br.get("tx_power_dbm", b.tx_power_dbm);
            br.get("antennas", b.antennas);
            br.get("element_spacing", b.element_spacing);
            br.finish();
            c.beacons.push_back(b);
        }
    }
    if (const json *l = r.child("link"))
    {
        detail::ObjectReader lr(*l, r.key_path("link"));
        lr.get("pathloss_exponent", c.link.pathloss_exponent);
        lr.get("fixed_loss_db", c.link.fixed_loss_db);
        lr.get("los_factor_db", c.link.los_factor_db);
        lr.get("correlation", c.link.correlation);
        lr.finish();
    }
    if (const json *e = r.child("eh"))
    {
        detail::ObjectReader er(*e, r.key_path("eh"));
        er.get("sensitivity_dbm", c.eh.sensitivity_dbm);
        er.get("saturation_dbm", c.eh.saturation_dbm);
        er.get("efficiency", c.eh.efficiency);
        er.finish();
    }
    std::vector<std::string> schemes;
    r.get("schemes", schemes);
    if (j.contains("schemes"))
    {
        c.schemes.clear();
        for (const auto &s : schemes)
        {
            try
            {
                c.schemes.push_back(parse_scheme_kind(s));
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(ConfigError::Kind::validation, r.key_path("schemes") + ": " + e.what(),
                                  r.key_path("schemes"));
            }
        }
    }
    r.get("coverage_threshold_dbm", c.coverage_threshold_dbm);
    r.get("outage_threshold_dbm", c.outage_threshold_dbm);
    r.get("mean_trials", c.mean_trials);
    r.get("outage_trials", c.outage_trials);
    r.get("rotation_step_rad", c.rotation_step_rad);
    r.get("rotation_trials", c.rotation_trials);
    r.get("rotation_sweeps", c.rotation_sweeps);
    r.get("sa_per_subslot", c.sa_per_subslot);
    r.get("seed", c.seed);
    r.finish();
    detail::validated("fig4", [&] {
        try
        {
            c.validate();
        }
        catch (const std::invalid_argument &e)
        {
            const std::string msg = e.what();
            if (msg.rfind("EhCircuitModel: ", 0) == 0)
                throw std::invalid_argument("fig4.eh " + msg.substr(16));
            throw;
        }
    });
    return c;
}

inline json to_json(const Fig4Config &c)
{
    json beacons = json::array();
    for (const auto &b : c.beacons)
        beacons.push_back({{"x", b.position.x},
                           {"y", b.position.y},
                           {"orientation_rad", b.orientation_rad},
                           {"tx_power_dbm", b.tx_power_dbm},
                           {"antennas", b.antennas},
                           {"element_spacing", b.element_spacing}});
    json schemes = json::array();
    for (auto s : c.schemes)
        schemes.push_back(std::string(to_string(s)));
    return {{"area_m", {c.area_width_m, c.area_height_m}},
            {"grid_resolution_m", c.grid_resolution_m},
            {"beacons", beacons},
            {"link",
             {{"pathloss_exponent", c.link.pathloss_exponent},
              {"fixed_loss_db", c.link.fixed_loss_db},
              {"los_factor_db", c.link.los_factor_db},
              {"correlation", c.link.correlation}}},
            {"eh",
             {{"sensitivity_dbm", c.eh.sensitivity_dbm},
              {"saturation_dbm", c.eh.saturation_dbm},
              {"efficiency", c.eh.efficiency}}},
            {"schemes", schemes},
            {"coverage_threshold_dbm", c.coverage_threshold_dbm},
            {"outage_threshold_dbm", c.outage_threshold_dbm},
            {"mean_trials", c.mean_trials},
            {"outage_trials", c.outage_trials},
            {"rotation_step_rad", c.rotation_step_rad},
            {"rotation_trials", c.rotation_trials},
            {"rotation_sweeps", c.rotation_sweeps},
            {"sa_per_subslot", c.sa_per_subslot},
            {"seed", c.seed}};
}

// ------------------------------------------------------------ sweep ------

/// Any subset of the three experiments; sections that are absent do not run.
struct SweepConfig
{
    std::optional<Fig1Config> fig1;
    std::optional<Fig2Config> fig2;
    std::optional<Fig4Config> fig4;

    friend bool operator==(const SweepConfig &, const SweepConfig &) = default;
};

inline SweepConfig sweep_from_json(const json &j)
{
    SweepConfig c;
    detail::ObjectReader r(j, "");
    if (const json *s = r.child("fig1"))
        c.fig1 = fig1_from_json(*s, "fig1");
    if (const json *s = r.child("fig2"))
        c.fig2 = fig2_from_json(*s, "fig2");
    if (const json *s = r.child("fig4"))
        c.fig4 = fig4_from_json(*s, "fig4");
    r.finish();
    if (!c.fig1 && !c.fig2 && !c.fig4)
        throw ConfigError(ConfigError::Kind::validation, "sweep: at least one of fig1, fig2, fig4 is required", "");
    return c;
}

inline json to_json(const SweepConfig &c)
{
    json j = json::object();
    if (c.fig1)
        j["fig1"] = to_json(*c.fig1);
    if (c.fig2)
        j["fig2"] = to_json(*c.fig2);
    if (c.fig4)
        j["fig4"] = to_json(*c.fig4);
    return j;
}

// ------------------------------------------------------------ files ------

/// Parses JSON text; syntax errors carry the 1-based line.
inline json parse_json_text(const std::string &text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        const int line = detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError(ConfigError::Kind::syntax, "syntax error at line " + std::to_string(line) + ": " + e.what(),
                          "", line);
    }
}

inline std::string read_text_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(ConfigError::Kind::io, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace csitl::cli

#endif // CSITL_CLI_CONFIG_HPP
