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

#include "../oracles.hpp"
#include "satlink/channel.hpp"
#include "satlink/errors.hpp"
#include "satlink/geometry.hpp"
#include "satlink/statistics.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace satlink;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    double mean_power(const ClusterModelParams &p, const ArrayDims &dims, std::size_t n, std::uint64_t seed,
                      Eigen::Index row = 0, Eigen::Index col = 0)
    {
        RngStream rng(seed, 0);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += std::norm(cluster_channel_matrix(rng, p, dims).entries(row, col));
        return acc / static_cast<double>(n);
    }
}

TEST_CASE("Channel - Power and delay profiles")
{
    const auto p = exponential_power_profile(6, 0.5);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        sum += p[i];
        if (i > 0)
            CHECK_THAT(p[i] / p[i - 1], WithinRel(std::exp(-0.5), 1e-12));
    }
    CHECK_THAT(sum, WithinAbs(1.0, 1e-12));

    const auto d = uniform_delay_profile(4, 50e-9);
    CHECK(d == std::vector<double>{0.0, 50e-9, 100e-9, 150e-9});
    CHECK_THROWS_AS(exponential_power_profile(0, 0.5), InvalidParams);
}

TEST_CASE("Channel - Cluster parameter validation")
{
    ClusterModelParams p;
    CHECK_NOTHROW(p.validate());

    auto bad = p;
    bad.ricean_k = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);

    bad = p;
    bad.cluster_powers = {0.5, 0.4, 0.05, 0.02, 0.02, 0.02};
    CHECK_THROWS_AS(bad.validate(), InvalidParams);

    bad = p;
    bad.cluster_powers.pop_back();
    CHECK_THROWS_AS(bad.validate(), InvalidParams);

    bad = p;
    bad.rays_per_cluster = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);

    bad = p;
    bad.sat_spacing_m = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);

    RngStream rng(1, 0);
    CHECK_THROWS_AS(cluster_channel_matrix(rng, p, {0, 2, 2}), InvalidParams);
}

TEST_CASE("Channel - Cluster model LOS limit")
{
    auto p = ClusterModelParams::with_profile(6, 0.5, 50e-9);
    p.ricean_k = std::numeric_limits<double>::infinity();
    const ArrayDims dims{2, 2, 3};

    RngStream a(1, 0), b(99, 3);
    const auto h1 = cluster_channel_matrix(a, p, dims);
    const auto h2 = cluster_channel_matrix(b, p, dims);
    REQUIRE(h1.num_rx() == 3);
    REQUIRE(h1.num_tx() == 4);
    CHECK(h1.entries == h2.entries);
    for (Eigen::Index i = 0; i < h1.entries.size(); ++i)
        CHECK_THAT(std::abs(h1.entries(i)), WithinRel(1.0, 1e-12));

    // Pure LOS with broadside angles: every entry has the same phase
    p.los_aoa_deg = 0.0;
    p.los_aod_deg = 0.0;
    const auto h3 = cluster_channel_matrix(a, p, dims);
    for (Eigen::Index i = 1; i < h3.entries.size(); ++i)
        CHECK_THAT(std::abs(h3.entries(i) - h3.entries(0)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("Channel - Cluster model Rayleigh limit")
{
    // K = 0 and one scattering cluster of 20 rays: each entry is a sum of 20 random-phase rays
    auto p = ClusterModelParams::with_profile(2, 0.5, 50e-9);
    p.ricean_k = 0.0;
    p.rays_per_cluster = 20;
    const ArrayDims dims{1, 1, 1};

    RngStream rng(21, 0);
    std::vector<double> env(100000);
    for (auto &e : env)
        e = std::abs(cluster_channel_matrix(rng, p, dims).entries(0, 0));
    CHECK(ks_statistic(env, [](double r) { return oracle::rayleigh_cdf(r, 0.5); }) < 0.02);
}

TEST_CASE("Channel - Cluster model power budget")
{
    const ArrayDims dims{2, 2, 2};
    auto p = ClusterModelParams::with_profile(6, 0.5, 50e-9);
    p.path_loss = 0.25;

    for (double k : {0.0, 1.0, 10.0, 100.0})
    {
        p.ricean_k = k;
        CHECK_THAT(p.mean_entry_power(), WithinRel(0.25, 1e-12));
        CHECK_THAT(mean_power(p, dims, 100000, 7, 1, 3), WithinRel(0.25, 0.02));
    }

    // Non-isotropic patterns scale the power by their average gains
    p.ricean_k = 0.0;
    p.rx_pattern = [](double a) { return 1.0 + 0.5 * std::cos(a); };
    CHECK_THAT(mean_power(p, dims, 100000, 8), WithinRel(p.mean_entry_power(), 0.02));
}

TEST_CASE("Channel - Cluster model Doppler and time evolution")
{
    auto p = ClusterModelParams::with_profile(6, 0.5, 50e-9);
    p.ricean_k = std::numeric_limits<double>::infinity();
    p.mobile_speed_mps = 30.0;
    p.motion_direction_rad = 0.0;
    p.los_aoa_deg = 0.0;
    const ArrayDims dims{1, 1, 1};
    RngStream rng(1, 0);

    // LOS Doppler shift f_d = v / lambda * cos(direction - aoa)
    const double dt = 1e-4;
    const auto h0 = cluster_channel_matrix(rng, p, dims, 0.0).entries(0, 0);
    const auto h1 = cluster_channel_matrix(rng, p, dims, dt).entries(0, 0);
    const double expected = -2.0 * std::numbers::pi * p.mobile_speed_mps / p.wavelength_m * dt;
    CHECK_THAT(std::remainder(std::arg(h1 / h0) - expected, 2.0 * std::numbers::pi), WithinAbs(0.0, 1e-9));
}

TEST_CASE("Channel - Free-space model")
{
    const FreeSpaceParams fp{14e9, 0.0, false, 1.0};

    SECTION("Path gain magnitude")
    {
        const auto h = freespace_channel_matrix({{38180e3}}, fp);
        CHECK_THAT(std::abs(h.entries(0, 0)), WithinRel(4.4632e-11, 1e-4));
        // With the rounded speed of light 2.998e8 m/s the gain is 4.46332e-11; the library uses the exact value
        CHECK_THAT(std::abs(h.entries(0, 0)), WithinRel(4.46332e-11, 2e-4));
    }
    SECTION("Phase is periodic in the wavelength")
    {
        const double lambda = speed_of_light / 14e9;
        const double r0 = 38180e3;
        const auto h = freespace_channel_matrix({{r0, r0 + lambda}}, fp);
        // r0 + lambda is rounded to a 7.45e-9 m grid, about 1e-6 rad of phase
        CHECK_THAT(std::remainder(std::arg(h.entries(0, 0)) - std::arg(h.entries(0, 1)), 2.0 * std::numbers::pi),
                   WithinAbs(0.0, 5e-6));
    }
    SECTION("Constant-gain approximation")
    {
        const FreeSpaceParams cg{14e9, 0.3, true, 1.0};
        const auto h = freespace_channel_matrix({{38e6, 38.001e6}, {38.002e6, 38.0015e6}}, cg);
        for (Eigen::Index i = 0; i < h.entries.size(); ++i)
            CHECK(std::abs(h.entries(i)) == Catch::Approx(1.0).epsilon(1e-15));
    }
    SECTION("Deterministic")
    {
        const std::vector<std::vector<double>> r{{38179923.8, 38179925.1}, {38179001.2, 38180044.9}};
        CHECK(freespace_channel_matrix(r, fp).entries == freespace_channel_matrix(r, fp).entries);
    }
    SECTION("Plane-wave phase gradient")
    {
        // Far-field ranges of a collinear, equally spaced array; ranges are exact binary fractions
        const double r0 = 38179923.8125, step = 0.0078125;
        std::vector<std::vector<double>> r(8, std::vector<double>(1));
        for (std::size_t m = 0; m < r.size(); ++m)
            r[m][0] = r0 + step * static_cast<double>(m);
        const auto h = freespace_channel_matrix(r, fp);
        const double d0 = std::arg(h.entries(1, 0) / h.entries(0, 0));
        for (Eigen::Index m = 2; m < h.entries.rows(); ++m)
        {
            const double dm = std::arg(h.entries(m, 0) / h.entries(m - 1, 0));
            CHECK_THAT(std::remainder(dm - d0, 2.0 * std::numbers::pi), WithinAbs(0.0, 1e-6));
        }
    }
    SECTION("Errors")
    {
        CHECK_THROWS_AS(freespace_channel_matrix({{0.0}}, fp), DomainError);
        CHECK_THROWS_AS(freespace_channel_matrix({{-5.0}}, fp), DomainError);
        CHECK_THROWS_AS(freespace_channel_matrix({}, fp), DimensionMismatch);
        CHECK_THROWS_AS(freespace_channel_matrix({{1.0}}, FreeSpaceParams{0.0, 0.0, false, 1.0}), InvalidParams);
        CHECK_THROWS_AS(freespace_channel_matrix({{1.0}}, FreeSpaceParams{14e9, 0.0, true, 0.0}), InvalidParams);
    }
}

TEST_CASE("Channel - Free-space Table I geometry")
{
    const auto sats = geo_satellite_positions({2, 13.0, 6.0, Formation::Linear});
    const auto rx = ground_array_positions({47.8, 11.1, 0.0}, 2, 68.2e3);
    const auto h = freespace_channel_matrix(slant_range_matrix(rx, sats), {});
    REQUIRE(h.num_rx() == 2);
    REQUIRE(h.num_tx() == 2);
    for (Eigen::Index i = 0; i < h.entries.size(); ++i)
        CHECK_THAT(std::abs(h.entries(i)), WithinRel(4.4632e-11, 1e-3));
}

TEST_CASE("Channel - Loo model")
{
    const LooParams p;
    RngStream rng(31, 0);

    double power = 0.0;
    std::complex<double> cross = 0.0;
    double p00 = 0.0, p01 = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
    {
        const auto h = loo_channel_matrix(rng, p, 2, 2);
        power += std::norm(h.entries(0, 0));
        if (i < 100000)
        {
            cross += h.entries(0, 0) * std::conj(h.entries(1, 1));
            p00 += std::norm(h.entries(0, 0));
            p01 += std::norm(h.entries(1, 1));
        }
    }
    const double analytic = std::exp(2.0 * p.lognormal_mean + 2.0 * p.lognormal_var) + 2.0 * p.scatter_power;
    CHECK_THAT(power / n, WithinRel(analytic, 0.01));
    CHECK_THAT(loo_mean_entry_power(p), WithinRel(analytic, 1e-15));
    CHECK(std::abs(cross) / std::sqrt(p00 * p01) < 0.01);

    CHECK_THROWS_AS(loo_channel_matrix(rng, p, 0, 2), InvalidParams);
    CHECK_THROWS_AS(loo_channel_matrix(rng, {0.0, -1.0, 0.1}, 2, 2), InvalidParams);
}

TEST_CASE("Channel - Multi-satellite composition")
{
    RngStream rng(41, 0);
    const auto a = rayleigh_channel_matrix(rng, 3, 2);
    const auto b = rayleigh_channel_matrix(rng, 3, 2);

    CHECK(ms_mra_channel({a}, {}, 14e9).entries == a.entries);

    const auto plain = ms_mra_channel({a, b}, {{0.0}}, 14e9);
    REQUIRE(plain.num_tx() == 4);
    CHECK(plain.entries.leftCols(2) == a.entries);
    CHECK(plain.entries.rightCols(2) == b.entries);

    const double fc = 14e9;
    const auto half = ms_mra_channel({a, b}, {{1.0 / (2.0 * fc)}}, fc);
    CHECK(half.entries.leftCols(2) == a.entries);
    CHECK((half.entries.rightCols(2) + b.entries).norm() < 1e-12);

    CHECK_THROWS_AS(ms_mra_channel({}, {}, fc), DimensionMismatch);
    CHECK_THROWS_AS(ms_mra_channel({a, b}, {}, fc), DimensionMismatch);
    CHECK_THROWS_AS(ms_mra_channel({a, rayleigh_channel_matrix(rng, 2, 2)}, {{0.0}}, fc), DimensionMismatch);

    const auto joined = apply_satellite_delays(plain, 2, {{1.0 / (2.0 * fc)}}, fc);
    CHECK((joined.entries - half.entries).norm() < 1e-12);
    CHECK_THROWS_AS(apply_satellite_delays(plain, 3, {{0.0}}, fc), DimensionMismatch);
}

TEST_CASE("Channel - Normalized sources and matrix validation")
{
    ChannelSource src;
    src.mean_entry_power = 4.0;
    src.draw = [](RngStream &) { return ChannelMatrix(Eigen::MatrixXcd::Constant(2, 2, {2.0, 0.0})); };
    RngStream rng(1, 0);
    const auto n = normalized(src);
    CHECK(n.mean_entry_power == 1.0);
    CHECK(n.draw(rng).entries == Eigen::MatrixXcd::Constant(2, 2, {1.0, 0.0}));

    src.mean_entry_power = 0.0;
    CHECK_THROWS_AS(normalized(src), NumericalError);

    ChannelMatrix bad(2, 2);
    bad.entries(0, 1) = {std::nan(""), 0.0};
    CHECK_THROWS_AS(bad.validate(), NumericalError);
    CHECK_THROWS_AS(ChannelMatrix().validate(), DimensionMismatch);
}
