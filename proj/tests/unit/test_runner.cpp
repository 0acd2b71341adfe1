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

#include <catch_amalgamated.hpp>

#include "satlink/errors.hpp"
#include "satlink/runner.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

using namespace satlink;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    const std::string scenario_dir = SATLINK_SCENARIO_DIR;

    ScenarioConfig load(const std::string &name, std::size_t realizations = 200)
    {
        auto cfg = parse_scenario(scenario_dir + "/" + name);
        cfg.num_realizations = realizations;
        return cfg;
    }
}

TEST_CASE("Runner - CSV round trip")
{
    ResultTable t({"name", "count", "value"});
    t.set_meta("tool", "satlink");
    t.set_meta("note", "line one\nline two \\ end");
    t.add_row({std::string("a,b \"quoted\""), std::int64_t{42}, 0.1});
    t.add_row({std::string(""), std::int64_t{-7}, 1e300});
    t.add_row({std::string("x"), std::int64_t{0}, 3.0});
    t.add_row({std::string("y"), std::int64_t{1}, std::numeric_limits<double>::infinity()});
    t.add_row({std::string("z"), std::int64_t{2}, -std::numeric_limits<double>::infinity()});
    t.add_row({std::string("w"), std::int64_t{3}, 5e-324});

    const auto text = format_csv(t);
    const auto back = parse_csv(text);
    CHECK(back == t);
    CHECK(format_csv(back) == text);
    CHECK(std::get<double>(back.rows[0][2]) == 0.1);
    CHECK(back.meta("note") == "line one\nline two \\ end");
    CHECK(back.meta("missing").empty());

    // NaN does not compare equal, so check it separately
    ResultTable n({"v"});
    n.add_row({std::numeric_limits<double>::quiet_NaN()});
    CHECK(std::isnan(parse_csv(format_csv(n)).number(0, "v")));

    CHECK(format_double(3.0) == "3.0");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-2.5e-7).find('e') != std::string::npos);
}

TEST_CASE("Runner - Table contract")
{
    ResultTable t({"a", "b"});
    CHECK_THROWS_AS(t.add_row({1.0}), DimensionMismatch);
    CHECK_THROWS_AS(t.add_row({1.0, 2.0, 3.0}), DimensionMismatch);
    CHECK_THROWS_AS(t.column_index("c"), IndexError);

    // Header only
    const auto back = parse_csv(format_csv(t));
    CHECK(back.columns == t.columns);
    CHECK(back.rows.empty());

    CHECK_THROWS_AS(parse_csv(""), ParseError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_csv("a\n\"open\n"), ParseError);

    const auto dir = std::filesystem::temp_directory_path() / "satlink_runner_test";
    std::filesystem::create_directories(dir);
    t.add_row({std::int64_t{1}, std::string("s")});
    emit_csv(t, (dir / "t.csv").string());
    CHECK(read_csv((dir / "t.csv").string()) == t);
    CHECK_THROWS_AS(read_csv((dir / "absent.csv").string()), IoError);
    CHECK_THROWS_AS(emit_csv(t, (dir / "no_such_dir" / "t.csv").string()), IoError);
}

TEST_CASE("Runner - Capacity sweep")
{
    const auto cfg = load("fig2.scenario", 300);
    const double snr[] = {0.0, 10.0, 20.0};
    const auto t = run_capacity_sweep(cfg, snr);
    CHECK(t.columns == std::vector<std::string>{"snr_db", "N", "M", "T", "mean_capacity", "std_capacity",
                                                "n_realizations"});
    REQUIRE(t.rows.size() == 5 * 3);
    CHECK(t.meta("command") == "capacity-sweep");
    CHECK(t.meta("config_hash") == cfg.config_hash);
    CHECK(t.meta("seed") == std::to_string(cfg.seed));
    CHECK(t.meta("tool_version") == tool_version);

    for (std::size_t r = 0; r < t.rows.size(); ++r)
    {
        CHECK(t.number(r, "n_realizations") == 300.0);
        CHECK(t.number(r, "mean_capacity") > 0.0);
        if (r % 3 != 0)
            CHECK(t.number(r, "mean_capacity") > t.number(r - 1, "mean_capacity"));
    }
    // 8x8 row: four dual-polarized satellites
    CHECK(t.number(12, "N") == 4.0);
    CHECK(t.number(12, "T") == 8.0);
    CHECK(t.number(12, "M") == 8.0);

    SECTION("Seed determinism")
    {
        const auto again = run_capacity_sweep(cfg, snr, {3});
        CHECK(format_csv(again) == format_csv(t));
        auto other = cfg;
        other.seed += 1;
        CHECK(format_csv(run_capacity_sweep(other, snr)) != format_csv(t));
    }
    SECTION("Free-space capacity does not fluctuate")
    {
        const auto fs = run_capacity_sweep(load("fig5.scenario", 20), snr);
        for (std::size_t r = 0; r < fs.rows.size(); ++r)
            CHECK(fs.number(r, "std_capacity") == 0.0);
    }
}

TEST_CASE("Runner - CCDF")
{
    const auto cfg = load("fig3.scenario", 500);
    const double snr[] = {0.0, 20.0};
    const auto t = run_ccdf(cfg, snr);
    const std::size_t points = cfg.ccdf_points;
    REQUIRE(t.rows.size() == 2 * points);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t i = 1; i < points; ++i)
        {
            const auto r = s * points + i;
            CHECK(t.number(r, "capacity_threshold") > t.number(r - 1, "capacity_threshold"));
            CHECK(t.number(r, "exceedance_probability") <= t.number(r - 1, "exceedance_probability"));
        }
    // Shared grid: the higher SNR dominates pointwise
    for (std::size_t i = 0; i < points; ++i)
    {
        CHECK(t.number(i, "capacity_threshold") == t.number(points + i, "capacity_threshold"));
        CHECK(t.number(points + i, "exceedance_probability") >= t.number(i, "exceedance_probability"));
    }

    SECTION("Deterministic channel gives a step")
    {
        const auto fs = load("fig6.scenario", 100);
        const double one[] = {10.0};
        const auto c = run_ccdf(fs, one);
        for (std::size_t r = 0; r < c.rows.size(); ++r)
        {
            const double p = c.number(r, "exceedance_probability");
            CHECK((p == 0.0 || p == 1.0));
        }
        CHECK(c.number(0, "exceedance_probability") == 1.0);
        CHECK(c.number(c.rows.size() - 1, "exceedance_probability") == 0.0);
    }
}

TEST_CASE("Runner - BER sweep")
{
    auto cfg = load("fig7.scenario");
    cfg.num_bits = 20000;
    const double snr[] = {0.0, 10.0, 20.0};
    const auto t = run_ber_sweep(cfg, snr, {BerMethod::ClosedForm, BerMethod::MonteCarlo});
    CHECK(t.columns == std::vector<std::string>{"snr_db", "model", "method", "ber", "num_bits", "num_errors"});
    REQUIRE(t.rows.size() == 3 * 3 + 3);

    std::size_t closed = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
    {
        const auto ber = t.number(r, "ber");
        CHECK(ber >= 0.0);
        CHECK(ber <= 1.0);
        if (t.text(r, "method") == "closed_form")
        {
            ++closed;
            CHECK(t.text(r, "model") == "rayleigh");
        }
        else
            CHECK(ber == t.number(r, "num_errors") / t.number(r, "num_bits"));
    }
    CHECK(closed == 3);

    // Closed-form rows do not depend on the seed
    auto reseeded = cfg;
    reseeded.seed = 12345;
    const auto cf1 = run_ber_sweep(cfg, snr, {BerMethod::ClosedForm});
    const auto cf2 = run_ber_sweep(reseeded, snr, {BerMethod::ClosedForm});
    CHECK(cf1.rows == cf2.rows);
    CHECK_THAT(cf1.number(1, "ber"), WithinRel(0.023268705377203842, 1e-12));

    // Same seed, same CSV
    CHECK(format_csv(run_ber_sweep(cfg, snr, {BerMethod::MonteCarlo})) ==
          format_csv(run_ber_sweep(cfg, snr, {BerMethod::MonteCarlo}, {2})));
}

TEST_CASE("Runner - Rayleigh BER sanity")
{
    auto cfg = parse_scenario_text("model = rayleigh\npolarizations = 1\nnum_rx = 1\nsnr_db = 10\nbits = 4000000\n");
    const double snr[] = {10.0};
    const auto t = run_ber_sweep(cfg, snr, {BerMethod::MonteCarlo});
    REQUIRE(t.rows.size() == 1);
    const double ref = 0.023268705377203842;
    const double se = std::sqrt(ref * (1.0 - ref) / t.number(0, "num_bits"));
    CHECK(std::abs(t.number(0, "ber") - ref) < 3.0 * se);
}

TEST_CASE("Runner - Geometry and link budget")
{
    const auto cfg = load("table1.scenario");
    const auto g = run_geometry(cfg);
    REQUIRE(g.rows.size() == 2);
    // Antennas sit 34.1 km either side of the array center
    for (std::size_t r = 0; r < 2; ++r)
        CHECK_THAT(g.number(r, "slant_range_m"), WithinAbs(38179923.80, 3000.0));
    CHECK(std::stod(g.meta("range_spread_m")) < 3000.0);

    const auto lb = run_link_budget(load("link_budget.scenario"));
    REQUIRE(lb.rows.size() == 1);
    CHECK_THAT(lb.number(0, "snr_db"), WithinAbs(16.0, 1e-9));
    CHECK_THAT(lb.number(0, "snr_linear"), WithinRel(std::pow(10.0, 1.6), 1e-12));
    CHECK_THROWS_AS(run_link_budget(cfg), ValidationError);
}
