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

#include <csitl/cli/run.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"csitl - CSIT-limited link-level simulator"};
    app.require_subcommand(1);

    csitl::cli::RunOptions opt;
    if (const char *env = std::getenv(csitl::cli::out_dir_env))
        opt.out_dir = env;

    std::string config;
    std::uint64_t seed = 0;
    for (const char *name : {"fig1", "fig2", "fig4", "sweep"})
    {
        auto *sub = app.add_subcommand(name, std::string("run the ") + name + " pipeline");
        sub->add_option("config", config, "JSON config file (defaults when omitted)");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--strict", opt.strict, "exit non-zero on non-convergence or infeasible points");
        sub->add_option("--out-dir", opt.out_dir, "output directory (env CSITL_OUT_DIR)");
    }

    CLI11_PARSE(app, argc, argv);

    for (auto *sub : app.get_subcommands())
    {
        opt.subcommand = sub->get_name();
        if (sub->count("config"))
            opt.config = config;
        if (sub->count("--seed"))
            opt.seed = seed;
    }

    try
    {
        const auto outcome = csitl::cli::run(opt);
        for (const auto &m : outcome.messages)
            std::cerr << "warning: " << m << "\n";
        for (const auto &f : outcome.manifest.outputs)
            std::cout << opt.out_dir << "/" << f << "\n";
        return outcome.exit_code;
    }
    catch (const csitl::cli::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
