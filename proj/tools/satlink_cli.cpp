// SPDX-License-Identifier: Apache-2.0
//
// satlink: MIMO land-mobile satellite link simulation library
// Copyright (C) 2026 The satlink authors
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
//
// Command line front end. Every subcommand reads a scenario file, runs one experiment and writes
// the result table as CSV to --out (or to stdout when --out is omitted, with the summary on stderr).

#include "satlink/errors.hpp"
#include "satlink/parallel.hpp"
#include "satlink/runner.hpp"
#include "satlink/scenario.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace
{
    using namespace satlink;

    struct CommonArgs
    {
        std::string scenario;
        std::optional<std::uint64_t> seed;
        std::string out;
        std::optional<std::size_t> workers;
        std::optional<std::size_t> realizations;
        std::optional<std::uint64_t> bits;
        std::string snr;
    };

    void add_common(CLI::App *cmd, CommonArgs &args, bool monte_carlo)
    {
        cmd->add_option("--scenario", args.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", args.out, "CSV output path (stdout if omitted)");
        if (!monte_carlo)
            return;
        cmd->add_option("--seed", args.seed, "Override the scenario seed");
        cmd->add_option("--workers", args.workers, "Worker threads (default: machine parallelism)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--realizations", args.realizations, "Channel realizations per SNR")->check(CLI::PositiveNumber);
        cmd->add_option("--bits", args.bits, "Simulated bits per SNR");
        cmd->add_option("--snr", args.snr, "SNR list in dB, \"a,b,c\" or \"start:step:stop\"");
    }

    std::size_t resolve_workers(const CommonArgs &args)
    {
        if (const char *env = std::getenv("SATLINK_WORKERS"); env && *env)
        {
            std::size_t n = 0;
            std::istringstream in(env);
            if (!(in >> n) || n == 0 || !in.eof())
                throw InvalidParams(std::string("SATLINK_WORKERS must be a positive integer, got '") + env + "'.");
            return n;
        }
        return args.workers.value_or(default_worker_count());
    }

    ScenarioConfig load(const CommonArgs &args)
    {
        auto cfg = parse_scenario(args.scenario);
        if (args.seed)
            cfg.seed = *args.seed;
        if (args.realizations)
            cfg.num_realizations = *args.realizations;
        if (args.bits)
            cfg.num_bits = *args.bits;
        cfg.validate();
        return cfg;
    }

    std::vector<double> snr_points(const ScenarioConfig &cfg, const CommonArgs &args)
    {
        return args.snr.empty() ? cfg.evaluation_snr_db() : parse_snr_list(args.snr);
    }

    void finish(const ResultTable &table, const CommonArgs &args, const std::string &summary)
    {
        if (args.out.empty())
        {
            std::cerr << summary;
            std::cout << format_csv(table);
        }
        else
        {
            emit_csv(table, args.out);
            std::cout << summary << "wrote " << table.rows.size() << " rows to " << args.out << "\n";
        }
    }

    std::string fmt(const char *pattern, auto... values)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, pattern, values...);
        return buf;
    }

    std::string scenario_line(const ScenarioConfig &cfg)
    {
        const auto d = cfg.dims();
        return fmt("scenario %s: %zu satellite(s) x %zu port(s), %zu receive antenna(s), model %s, seed %llu\n",
                   cfg.config_hash.c_str(), d.num_satellites, d.polarizations, d.num_rx, to_string(cfg.model).c_str(),
                   static_cast<unsigned long long>(cfg.seed));
    }

    void cmd_geometry(const CommonArgs &args)
    {
        const auto cfg = parse_scenario(args.scenario);
        const auto table = run_geometry(cfg);
        std::string summary = scenario_line(cfg);
        for (std::size_t r = 0; r < table.rows.size(); ++r)
            summary += fmt("  rx %lld -> sat %lld: %.3f km\n", static_cast<long long>(table.number(r, "rx")),
                           static_cast<long long>(table.number(r, "satellite")),
                           table.number(r, "slant_range_m") / 1e3);
        summary += "  range spread: " + table.meta("range_spread_m") + " m\n";
        if (cfg.link_budget)
            summary += fmt("  link-budget SNR: %.4f dB\n", link_budget_snr_db(*cfg.link_budget));
        finish(table, args, summary);
    }

    void cmd_link_budget(const CommonArgs &args)
    {
        const auto cfg = parse_scenario(args.scenario);
        const auto table = run_link_budget(cfg);
        const std::string summary =
            scenario_line(cfg) +
            fmt("  EIRP %.2f dBW + G/T %.2f dB/K - k %.2f dBW/K/Hz - B %.2f dBHz = SNR %.4f dB\n",
                table.number(0, "eirp_dbw"), table.number(0, "gt_dbk"), table.number(0, "boltzmann_db"),
                table.number(0, "bandwidth_dbhz"), table.number(0, "snr_db"));
        finish(table, args, summary);
    }

    void cmd_capacity_sweep(const CommonArgs &args)
    {
        const auto cfg = load(args);
        const auto snr = snr_points(cfg, args);
        const auto t0 = std::chrono::steady_clock::now();
        const auto table = run_capacity_sweep(cfg, snr, {resolve_workers(args)});
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::string summary = scenario_line(cfg) + fmt("  %zu rows in %.2f s\n", table.rows.size(), secs);
        summary += "  snr_db   TxM     mean      std\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r)
            summary += fmt("  %6.2f  %2lldx%-2lld  %7.3f  %7.3f\n", table.number(r, "snr_db"),
                           static_cast<long long>(table.number(r, "T")), static_cast<long long>(table.number(r, "M")),
                           table.number(r, "mean_capacity"), table.number(r, "std_capacity"));
        finish(table, args, summary);
    }

    void cmd_capacity_ccdf(const CommonArgs &args)
    {
        const auto cfg = load(args);
        const auto snr = snr_points(cfg, args);
        const auto table = run_ccdf(cfg, snr, {resolve_workers(args)});

        std::string summary = scenario_line(cfg);
        std::map<double, std::pair<double, double>> median; // snr -> (threshold at P ~ 0.5, distance)
        for (std::size_t r = 0; r < table.rows.size(); ++r)
        {
            const double s = table.number(r, "snr_db"), p = table.number(r, "exceedance_probability");
            auto [it, fresh] = median.try_emplace(s, table.number(r, "capacity_threshold"), std::abs(p - 0.5));
            if (!fresh && std::abs(p - 0.5) < it->second.second)
                it->second = {table.number(r, "capacity_threshold"), std::abs(p - 0.5)};
        }
        for (const auto &[s, m] : median)
            summary += fmt("  %6.2f dB: median capacity ~ %.3f bps/Hz\n", s, m.first);
        finish(table, args, summary);
    }

    void cmd_ber_sweep(const CommonArgs &args, const std::vector<std::string> &method_names)
    {
        const auto cfg = load(args);
        const auto snr = snr_points(cfg, args);
        std::set<BerMethod> methods;
        for (const auto &m : method_names)
        {
            if (m == "closed_form")
                methods.insert(BerMethod::ClosedForm);
            else if (m == "monte_carlo")
                methods.insert(BerMethod::MonteCarlo);
            else
                throw InvalidParams("Unknown BER method '" + m + "'.");
        }
        const auto table = run_ber_sweep(cfg, snr, methods, {resolve_workers(args)});

        std::string summary = scenario_line(cfg) + "  modulation " + cfg.modulation.name() + "\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r)
            summary += fmt("  %6.2f dB  %-9s %-11s %.6e\n", table.number(r, "snr_db"), table.text(r, "model").c_str(),
                           table.text(r, "method").c_str(), table.number(r, "ber"));
        finish(table, args, summary);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"satlink: MIMO land-mobile satellite link simulator"};
    app.set_version_flag("--version", std::string(satlink::tool_version));
    app.require_subcommand(1);

    CommonArgs geometry_args, budget_args, sweep_args, ccdf_args, ber_args;
    std::vector<std::string> ber_methods{"closed_form", "monte_carlo"};

    auto *geometry = app.add_subcommand("geometry", "Slant ranges and link SNR of a scenario");
    add_common(geometry, geometry_args, false);
    auto *budget = app.add_subcommand("link-budget", "SNR from the scenario's link budget");
    add_common(budget, budget_args, false);
    auto *sweep = app.add_subcommand("capacity-sweep", "Ergodic capacity versus SNR");
    add_common(sweep, sweep_args, true);
    auto *ccdf = app.add_subcommand("capacity-ccdf", "Capacity CCDF at each SNR");
    add_common(ccdf, ccdf_args, true);
    auto *ber = app.add_subcommand("ber-sweep", "Zero-forcing M-PSK bit error rate versus SNR");
    add_common(ber, ber_args, true);
    ber->add_option("--methods", ber_methods, "closed_form and/or monte_carlo")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*geometry)
            cmd_geometry(geometry_args);
        else if (*budget)
            cmd_link_budget(budget_args);
        else if (*sweep)
            cmd_capacity_sweep(sweep_args);
        else if (*ccdf)
            cmd_capacity_ccdf(ccdf_args);
        else if (*ber)
            cmd_ber_sweep(ber_args, ber_methods);
    }
    catch (const satlink::ParseError &e)
    {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    catch (const satlink::ValidationError &e)
    {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
