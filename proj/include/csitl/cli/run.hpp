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

#ifndef CSITL_CLI_RUN_HPP
#define CSITL_CLI_RUN_HPP

#include "config.hpp"
#include "output.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace csitl::cli
{

inline constexpr const char *tool_version = "1.0.0";
inline constexpr const char *out_dir_env = "CSITL_OUT_DIR";

struct RunOptions
{
    std::string subcommand;            // fig1, fig2, fig4, sweep
    std::optional<std::string> config; // path; defaults when absent
    std::optional<std::uint64_t> seed; // overrides every section's seed
    unsigned threads = 1;
    bool strict = false;
    std::string out_dir = ".";
};

struct RunOutcome
{
    int exit_code = 0;
    RunManifest manifest;
    std::vector<std::string> messages;
};

class OutputError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

namespace detail
{

// Tracks files written by one run and removes them unless committed.
class OutputSet
{
  public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
    OutputSet(const OutputSet &) = delete;
    OutputSet &operator=(const OutputSet &) = delete;

    ~OutputSet()
    {
        if (committed_)
            return;
        std::error_code ec;
        for (const auto &p : written_)
            std::filesystem::remove(p, ec);
    }

    void write(const std::string &name, const std::string &content)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw OutputError("cannot create output directory '" + dir_.string() + "': " + ec.message());
        const auto path = dir_ / name;
        const auto tmp = dir_ / (name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw OutputError("cannot write '" + tmp.string() + "'");
            out << content;
            out.close();
            if (!out)
                throw OutputError("write failed for '" + tmp.string() + "'");
        }
        written_.push_back(tmp);
        std::filesystem::rename(tmp, path, ec);
        if (ec)
            throw OutputError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
        written_.back() = path;
        names_.push_back(name);
    }

    void commit() { committed_ = true; }
    const std::vector<std::string> &names() const { return names_; }

  private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    std::vector<std::string> names_;
    bool committed_ = false;
};

} // namespace detail

/// Loads the config for a subcommand from JSON text, applies the seed override.
inline SweepConfig load_config(const std::string &subcommand, const std::optional<std::string> &text,
                               std::optional<std::uint64_t> seed)
{
    const json j = text ? parse_json_text(*text) : json::object();
    SweepConfig c;
    if (subcommand == "fig1")
        c.fig1 = fig1_from_json(j);
    else if (subcommand == "fig2")
        c.fig2 = fig2_from_json(j);
    else if (subcommand == "fig4")
        c.fig4 = fig4_from_json(j);
    else if (subcommand == "sweep")
        c = sweep_from_json(j);
    else
        throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
    if (seed)
    {
        if (c.fig1)
            c.fig1->seed = *seed;
        if (c.fig2)
            c.fig2->seed = *seed;
        if (c.fig4)
            c.fig4->seed = *seed;
    }
    return c;
}

inline json canonical_config(const std::string &subcommand, const SweepConfig &c)
{
    if (subcommand == "fig1")
        return to_json(*c.fig1);
    if (subcommand == "fig2")
        return to_json(*c.fig2);
    if (subcommand == "fig4")
        return to_json(*c.fig4);
    return to_json(c);
}

/**
 * Runs one subcommand and writes <name>.csv files plus manifest.json into
 * opt.out_dir. Any exception removes the files written so far and propagates.
 */
inline RunOutcome run(const RunOptions &opt)
{
    const auto start = std::chrono::steady_clock::now();
    const std::optional<std::string> text = opt.config ? std::optional(read_text_file(*opt.config)) : std::nullopt;
    const SweepConfig cfg = load_config(opt.subcommand, text, opt.seed);

    RunOutcome outcome;
    RunManifest &man = outcome.manifest;
    man.subcommand = opt.subcommand;
    man.config = canonical_config(opt.subcommand, cfg);
    man.config_hash = config_hash(man.config);
    man.tool_version = tool_version;
    man.seed = cfg.fig1 ? cfg.fig1->seed : cfg.fig2 ? cfg.fig2->seed : cfg.fig4->seed;

    detail::OutputSet files(opt.out_dir);
    if (cfg.fig1)
    {
        const auto pts = run_fig1(*cfg.fig1, opt.threads);
        for (const auto &p : pts)
            if (p.nonconverged_blocks > 0)
            {
                man.nonconverged += p.nonconverged_blocks;
                outcome.messages.push_back("fig1: " + std::to_string(p.nonconverged_blocks) +
                                           " non-converged solves at scenario " + to_string(p.scenario) +
                                           ", K=" + std::to_string(p.pilots));
            }
        files.write("fig1.csv", render_fig1_csv(pts));
    }
    if (cfg.fig2)
    {
        const auto pts = run_fig2(*cfg.fig2, opt.threads);
        for (const auto &p : pts)
        {
            if (!p.blocklength)
            {
                ++man.infeasible;
                outcome.messages.push_back("fig2: infeasible at kappa_db=" + fmt9(p.kappa_db));
            }
            if (!p.solver.converged)
            {
                ++man.nonconverged;
                outcome.messages.push_back("fig2: precoder did not converge at kappa_db=" + fmt9(p.kappa_db));
            }
        }
        files.write("fig2.csv", render_fig2_csv(pts));
    }
    if (cfg.fig4)
    {
        const auto res = run_fig4(*cfg.fig4, opt.threads);
        files.write("fig4.csv", render_fig4_csv(res, cfg.fig4->outage_trials));
        files.write("fig4_coverage.csv", render_fig4_summary_csv(res));
    }

    man.outputs = files.names();
    man.outputs.push_back("manifest.json");
    man.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    files.write("manifest.json", man.to_json().dump(2) + "\n");
    files.commit();

    if (opt.strict && (man.nonconverged > 0 || man.infeasible > 0))
        outcome.exit_code = 3;
    return outcome;
}

} // namespace csitl::cli

#endif // CSITL_CLI_RUN_HPP
