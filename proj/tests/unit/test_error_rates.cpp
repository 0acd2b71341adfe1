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

#include "satlink/error_rates.hpp"
#include "satlink/errors.hpp"
#include "satlink/geometry.hpp"

#include <bit>
#include <cmath>

using namespace satlink;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    ChannelSource rayleigh_source(std::size_t rx, std::size_t tx)
    {
        ChannelSource s;
        s.dims = {1, tx, rx};
        s.draw = [rx, tx](RngStream &rng) { return rayleigh_channel_matrix(rng, rx, tx); };
        return s;
    }

    double binomial_se(double p, std::uint64_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }
}

TEST_CASE("Error rates - Gray-coded PSK constellations")
{
    for (std::size_t m : {2u, 4u, 8u, 16u, 64u})
    {
        const ModulationScheme s(m);
        CHECK(s.size() == m);
        CHECK(s.bits_per_symbol() == static_cast<std::size_t>(std::countr_zero(m)));

        double energy = 0.0;
        for (std::size_t k = 0; k < m; ++k)
        {
            energy += std::norm(s.point(k));
            // Neighbors differ in exactly one bit
            const auto next = s.label((k + 1) % m);
            CHECK(std::popcount(s.label(k) ^ next) == 1);
            // Modulate / demodulate round trip, also after a small rotation
            CHECK(s.demodulate(s.modulate(s.label(k))) == s.label(k));
            CHECK(s.demodulate(s.point(k) * std::polar(0.8, 0.4 * std::numbers::pi / static_cast<double>(m))) == s.label(k));
        }
        CHECK_THAT(energy / static_cast<double>(m), WithinAbs(1.0, 1e-14));
    }

    CHECK(ModulationScheme::from_name("BPSK").size() == 2);
    CHECK(ModulationScheme::from_name("qpsk").size() == 4);
    CHECK(ModulationScheme::from_name("8psk").size() == 8);
    CHECK(ModulationScheme(16).name() == "16psk");
    CHECK_THROWS_AS(ModulationScheme(3), InvalidParams);
    CHECK_THROWS_AS(ModulationScheme(1), InvalidParams);
    CHECK_THROWS_AS(ModulationScheme::from_name("16qam"), InvalidParams);
}

TEST_CASE("Error rates - AWGN symbol error approximation")
{
    const ModulationScheme bpsk(2), qpsk(4);
    CHECK(mpsk_awgn_error_prob(10.0, 0.0, bpsk) == 0.5);
    CHECK(mpsk_awgn_error_prob(1e6, 1e6, bpsk) == 0.0);
    CHECK_THAT(mpsk_awgn_error_prob(10.0, 1.0, qpsk), WithinRel(7.82701129001274838e-4, 1e-13));

    CHECK(mpsk_num_terms(2) == 1);
    CHECK(mpsk_num_terms(4) == 1);
    CHECK(mpsk_num_terms(8) == 2);
    CHECK(mpsk_num_terms(64) == 2);
}

TEST_CASE("Error rates - mu_k")
{
    CHECK_THAT(mu_k(1, 10.0, 2), WithinRel(std::sqrt(10.0 / 11.0), 1e-15));
    CHECK_THAT(mu_k(1, 0.95346, 2), WithinRel(std::sqrt(0.95346 / 1.95346), 1e-15));
    CHECK(mu_k(1, 0.0, 2) == 0.0);
    CHECK(mu_k(1, 1e-300, 2) < 1e-100);
    CHECK(mu_k(1, 1e300, 2) < 1.0 + 1e-15);
    for (double s = 1e-3; s < 1e6; s *= 3.7)
    {
        const double v = mu_k(2, s, 8);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    CHECK_THROWS_AS(mu_k(0, 10.0, 2), IndexError);
    CHECK_THROWS_AS(mu_k(2, 10.0, 4), IndexError);
    CHECK_THROWS_AS(mu_k(3, 10.0, 8), IndexError);
}

TEST_CASE("Error rates - Closed-form ZF BER")
{
    // Reference values from adaptive quadrature of the AWGN error probability against the
    // Gamma(U, 1) density (50-digit arithmetic), not from the closed form
    struct Ref
    {
        std::size_t m, u;
        double sigma, ber;
    };
    const Ref refs[] = {
        {2, 1, 1.0, 0.14644660940672624},    {2, 1, 10.0, 0.023268705377203842},
        {2, 1, 100.0, 0.0024814048950054322}, {2, 2, 1.0, 0.058058261758407797},
        {2, 2, 10.0, 0.0015991010761676533},  {2, 2, 100.0, 1.8441552901498663e-5},
        {2, 3, 1.0, 0.024912631390288382},    {2, 3, 10.0, 1.2162805564245859e-4},
        {2, 3, 100.0, 1.5222115320212732e-7}, {4, 1, 1.0, 0.21132486540518712},
        {4, 1, 10.0, 0.043564535412361572},   {4, 1, 100.0, 0.0049262285116628454},
        {4, 2, 1.0, 0.11509982054024949},     {4, 2, 10.0, 0.0055282466967250365},
        {4, 2, 100.0, 7.256408530659881e-5},  {4, 3, 1.0, 0.066987298107780677},
        {4, 3, 10.0, 7.7371060727046951e-4},  {4, 3, 100.0, 1.1866672719481244e-6},
        {8, 1, 1.0, 0.32133163703918657},     {8, 1, 10.0, 0.094340844826363581},
        {8, 1, 100.0, 0.012764797964605629},
    };
    for (const auto &r : refs)
        CHECK_THAT(zf_mpsk_ber_closed_form(r.sigma, ModulationScheme(r.m), {r.u}), WithinRel(r.ber, 1e-12));

    // U = 1 BPSK reduces to (1 - mu) / 2
    CHECK_THAT(zf_mpsk_ber_closed_form(10.0, ModulationScheme(2), {1}),
               WithinRel(0.5 * (1.0 - std::sqrt(10.0 / 11.0)), 1e-12));

    // Limits, monotonicity in SNR and diversity
    CHECK(zf_mpsk_ber_closed_form(1e300, ModulationScheme(4), {2}) < 1e-200);
    for (std::size_t m : {2u, 4u, 8u})
        for (std::size_t u = 1; u <= 4; ++u)
        {
            double prev = 1.0;
            for (double s = 1e-2; s < 1e5; s *= 1.5)
            {
                const double b = zf_mpsk_ber_closed_form(s, ModulationScheme(m), {u});
                REQUIRE(b >= 0.0);
                REQUIRE(b <= prev);
                REQUIRE(zf_mpsk_ber_closed_form(s, ModulationScheme(m), {u + 1}) <= b);
                prev = b;
            }
        }

    // Gray QPSK at twice the symbol SNR equals BPSK
    for (double s = 0.1; s < 1e4; s *= 2.3)
        for (std::size_t u = 1; u <= 3; ++u)
            CHECK_THAT(zf_mpsk_ber_closed_form(2.0 * s, ModulationScheme(4), {u}),
                       WithinAbs(zf_mpsk_ber_closed_form(s, ModulationScheme(2), {u}), 1e-12));
}

TEST_CASE("Error rates - Diversity order")
{
    CHECK(DiversityOrder::from_dims(2, 2).u == 1);
    CHECK(DiversityOrder::from_dims(4, 2).u == 3);
    CHECK(DiversityOrder::from_dims(1, 1).u == 1);
    CHECK_THROWS_AS(DiversityOrder::from_dims(1, 2), InvalidParams);
    CHECK_THROWS_AS(DiversityOrder::from_dims(0, 0), InvalidParams);
}

TEST_CASE("Error rates - Monte Carlo link against the closed form")
{
    SECTION("1x1 Rayleigh BPSK at 10 dB")
    {
        const auto p = mc_link_ber(rayleigh_source(1, 1), ModulationScheme(2), 10.0, 10000000, RngStream(1, 0));
        CHECK(p.num_bits == 10000000);
        CHECK(p.ber == static_cast<double>(p.num_errors) / static_cast<double>(p.num_bits));
        CHECK(std::abs(p.ber - 0.023268705377203842) < 3.0 * binomial_se(0.023268705377203842, p.num_bits));
    }
    SECTION("2x4 Rayleigh QPSK at 10 dB")
    {
        const double ref = 7.7371060727046951e-4;
        const auto p = mc_link_ber(rayleigh_source(4, 2), ModulationScheme(4), 10.0, 10000000, RngStream(2, 0));
        CHECK(std::abs(p.ber - ref) < 3.0 * binomial_se(ref, p.num_bits));
    }
}

TEST_CASE("Error rates - Monte Carlo link behavior")
{
    const auto src = rayleigh_source(3, 2);
    const double snr[] = {0.0, 5.0, 10.0};

    SECTION("Noise-free link is error-free")
    {
        const auto p = mc_link_ber(src, ModulationScheme(8), 200.0, 30000, RngStream(3, 0));
        CHECK(p.num_errors == 0);
        CHECK(p.ber == 0.0);
    }
    SECTION("Bit count rounds up to whole symbol epochs")
    {
        const auto p = mc_link_ber(src, ModulationScheme(4), 10.0, 10001, RngStream(3, 0));
        CHECK(p.num_bits == 10004);
    }
    SECTION("Monotone in SNR and independent of worker count")
    {
        const auto a = mc_link_ber(src, ModulationScheme(2), snr, 200000, RngStream(4, 0), {1});
        const auto b = mc_link_ber(src, ModulationScheme(2), snr, 200000, RngStream(4, 0), {4});
        REQUIRE(a.points.size() == 3);
        CHECK(a.method == BerMethod::MonteCarlo);
        for (std::size_t i = 0; i < 3; ++i)
        {
            CHECK(a.points[i].num_errors == b.points[i].num_errors);
            if (i > 0)
                CHECK(a.points[i].ber <= a.points[i - 1].ber);
        }
    }
    SECTION("Errors")
    {
        CHECK_THROWS_AS(mc_link_ber(src, ModulationScheme(2), 10.0, 9999, RngStream(1, 0)), InsufficientBits);
        CHECK_THROWS_AS(mc_link_ber(rayleigh_source(1, 2), ModulationScheme(2), 10.0, 10000, RngStream(1, 0)),
                        InvalidParams);
    }
}

TEST_CASE("Error rates - Singular channel handling")
{
    ChannelSource singular;
    singular.dims = {1, 2, 2};
    singular.deterministic = true;
    singular.draw = [](RngStream &) { return ChannelMatrix(Eigen::MatrixXcd::Ones(2, 2)); };
    CHECK_THROWS_AS(mc_link_ber(singular, ModulationScheme(2), 10.0, 10000, RngStream(1, 0)), SingularChannel);

    // A fading source that is singular a third of the time gets redrawn
    ChannelSource flaky;
    flaky.dims = {1, 2, 2};
    flaky.draw = [](RngStream &rng)
    {
        if (rng.uniform() < 1.0 / 3.0)
            return ChannelMatrix(Eigen::MatrixXcd::Zero(2, 2));
        return rayleigh_channel_matrix(rng, 2, 2);
    };
    const double snr[] = {10.0};
    const auto curve = mc_link_ber(flaky, ModulationScheme(2), snr, 20000, RngStream(2, 0));
    CHECK(curve.singular_redraws > 0);
    CHECK(curve.points[0].num_bits == 20000);

    ChannelSource always_zero = flaky;
    always_zero.draw = [](RngStream &) { return ChannelMatrix(Eigen::MatrixXcd::Zero(2, 2)); };
    CHECK_THROWS_AS(mc_link_ber(always_zero, ModulationScheme(2), snr, 10000, RngStream(1, 0), {1, 50}),
                    SingularChannel);
}

TEST_CASE("Error rates - Closed-form curves")
{
    const double snr[] = {0.0, 10.0, 20.0};
    const auto c = closed_form_ber_curve(snr, ModulationScheme(2), {1});
    CHECK(c.method == BerMethod::ClosedForm);
    REQUIRE(c.points.size() == 3);
    CHECK_THAT(c.points[1].ber, WithinRel(0.023268705377203842, 1e-12));
    CHECK(to_string(BerMethod::ClosedForm) == "closed_form");
    CHECK(to_string(BerMethod::MonteCarlo) == "monte_carlo");
}
