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

#include "satlink/geometry.hpp"
#include "satlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace
{
    constexpr double deg2rad = std::numbers::pi / 180.0;
    constexpr double rad2deg = 180.0 / std::numbers::pi;
}

namespace satlink
{
    GeodeticPosition GeodeticPosition::normalized() const
    {
        if (!std::isfinite(latitude_deg) || latitude_deg < -90.0 || latitude_deg > 90.0)
            throw DomainError("Latitude must be within [-90, 90] degrees, got " + std::to_string(latitude_deg));
        if (!std::isfinite(longitude_deg))
            throw DomainError("Longitude must be finite.");
        if (!std::isfinite(altitude_m) || altitude_m < 0.0)
            throw DomainError("Altitude cannot be negative.");

        GeodeticPosition out = *this;
        double lon = std::fmod(longitude_deg + 180.0, 360.0);
        if (lon < 0.0)
            lon += 360.0;
        out.longitude_deg = lon - 180.0;
        if (out.longitude_deg == -180.0 && longitude_deg > 0.0)
            out.longitude_deg = 180.0;
        return out;
    }

    double EcefPosition::norm() const
    {
        return std::sqrt(x_m * x_m + y_m * y_m + z_m * z_m);
    }

    EcefPosition ecef_from_geodetic(const GeodeticPosition &pos, double earth_radius)
    {
        if (!(earth_radius > 0.0))
            throw DomainError("Earth radius must be positive.");
        const auto p = pos.normalized();
        const double r = earth_radius + p.altitude_m;
        const double lat = p.latitude_deg * deg2rad, lon = p.longitude_deg * deg2rad;
        return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
    }

    GeodeticPosition geodetic_from_ecef(const EcefPosition &pos, double earth_radius)
    {
        const double r = pos.norm();
        GeodeticPosition out;
        out.altitude_m = r - earth_radius;
        if (r == 0.0)
            return out;
        out.latitude_deg = std::asin(std::clamp(pos.z_m / r, -1.0, 1.0)) * rad2deg;
        out.longitude_deg = std::atan2(pos.y_m, pos.x_m) * rad2deg;
        return out;
    }

    std::vector<EcefPosition> geo_satellite_positions(const ConstellationLayout &layout)
    {
        if (layout.num_satellites == 0)
            throw InvalidParams("Number of satellites must be at least 1.");
        if (!(layout.intersatellite_spacing_m > 0.0) || !std::isfinite(layout.intersatellite_spacing_m))
            throw InvalidParams("Intersatellite spacing must be positive.");

        const double n = static_cast<double>(layout.num_satellites);
        if (n * layout.intersatellite_spacing_m > 0.5 * std::numbers::pi * geo_radius_m)
            throw SpacingTooLarge("Formation spans more than a quarter of the GEO orbit.");

        // Arc step whose chord equals the requested spacing
        const double step = 2.0 * std::asin(layout.intersatellite_spacing_m / (2.0 * geo_radius_m));
        const double center = layout.reference_longitude_deg * deg2rad;

        std::vector<EcefPosition> out;
        out.reserve(layout.num_satellites);
        for (std::size_t i = 0; i < layout.num_satellites; ++i)
        {
            const double lon = center + (static_cast<double>(i) - 0.5 * (n - 1.0)) * step;
            out.push_back({geo_radius_m * std::cos(lon), geo_radius_m * std::sin(lon), 0.0});
        }
        return out;
    }

    double slant_range(const EcefPosition &a, const EcefPosition &b)
    {
        return (a - b).norm();
    }

    std::vector<EcefPosition> ground_array_positions(const GeodeticPosition &center, std::size_t num_rx,
                                                     double spacing_m, double earth_radius)
    {
        if (num_rx == 0)
            throw InvalidParams("Number of receive antennas must be at least 1.");
        if (!(spacing_m >= 0.0) || !std::isfinite(spacing_m))
            throw InvalidParams("Receive antenna spacing cannot be negative.");

        const auto c = ecef_from_geodetic(center, earth_radius);
        const double lon = center.normalized().longitude_deg * deg2rad;
        const EcefPosition east{-std::sin(lon), std::cos(lon), 0.0};

        std::vector<EcefPosition> out;
        out.reserve(num_rx);
        const double mid = 0.5 * (static_cast<double>(num_rx) - 1.0);
        for (std::size_t m = 0; m < num_rx; ++m)
            out.push_back(c + east * ((static_cast<double>(m) - mid) * spacing_m));
        return out;
    }

    std::vector<std::vector<double>> slant_range_matrix(const std::vector<EcefPosition> &rx,
                                                        const std::vector<EcefPosition> &sats)
    {
        std::vector<std::vector<double>> r(rx.size(), std::vector<double>(sats.size()));
        for (std::size_t i = 0; i < rx.size(); ++i)
            for (std::size_t j = 0; j < sats.size(); ++j)
                r[i][j] = slant_range(sats[j], rx[i]);
        return r;
    }

    double scaled_intersatellite_spacing(double base_spacing_2x2_m, std::size_t num_rx)
    {
        if (num_rx == 0)
            throw InvalidParams("Number of receive antennas must be at least 1.");
        if (!(base_spacing_2x2_m > 0.0))
            throw InvalidParams("Base intersatellite spacing must be positive.");
        return base_spacing_2x2_m * 2.0 / static_cast<double>(num_rx);
    }

    double link_budget_snr_db(const LinkBudget &b)
    {
        const double snr = b.eirp_dbw + b.figure_of_merit_dbk - b.boltzmann_db - b.bandwidth_dbhz;
        if (!std::isfinite(snr))
            throw DomainError("Link budget yields a non-finite SNR.");
        return snr;
    }

    double snr_db_to_linear(double snr_db)
    {
        if (!std::isfinite(snr_db))
            throw DomainError("SNR must be finite.");
        return std::pow(10.0, snr_db / 10.0);
    }

    double snr_linear_to_db(double rho)
    {
        if (!(rho > 0.0))
            throw DomainError("Linear SNR must be positive.");
        return 10.0 * std::log10(rho);
    }
}
