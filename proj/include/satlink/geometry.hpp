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

#ifndef SATLINK_GEOMETRY_HPP
#define SATLINK_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace satlink
{
    inline constexpr double earth_radius_m = 6371.0e3;      // Spherical Earth
    inline constexpr double geo_radius_m = 42164.0e3;       // Geostationary orbit radius
    inline constexpr double speed_of_light = 299792458.0;   // m/s
    inline constexpr double boltzmann_dbw_per_k_hz = -228.6; // 10*log10(k_B)

    struct GeodeticPosition
    {
        double latitude_deg = 0.0;  // [-90, 90]
        double longitude_deg = 0.0; // [-180, 180]
        double altitude_m = 0.0;    // >= 0

        // Throws DomainError when latitude or altitude is out of range.
        // Longitude is wrapped into [-180, 180].
        GeodeticPosition normalized() const;
    };

    struct EcefPosition
    {
        double x_m = 0.0;
        double y_m = 0.0;
        double z_m = 0.0;

        double norm() const;
        EcefPosition operator+(const EcefPosition &o) const { return {x_m + o.x_m, y_m + o.y_m, z_m + o.z_m}; }
        EcefPosition operator-(const EcefPosition &o) const { return {x_m - o.x_m, y_m - o.y_m, z_m - o.z_m}; }
        EcefPosition operator*(double s) const { return {x_m * s, y_m * s, z_m * s}; }
    };

    enum class Formation
    {
        Linear
    };

    struct ConstellationLayout
    {
        std::size_t num_satellites = 1;
        double reference_longitude_deg = 0.0;
        double intersatellite_spacing_m = 6.0;
        Formation formation = Formation::Linear;
    };

    struct LinkBudget
    {
        double eirp_dbw = 0.0;
        double figure_of_merit_dbk = 0.0; // G/T
        double boltzmann_db = boltzmann_dbw_per_k_hz;
        double bandwidth_dbhz = 0.0;
    };

    EcefPosition ecef_from_geodetic(const GeodeticPosition &pos, double earth_radius = earth_radius_m);

    // Inverse of ecef_from_geodetic on the same sphere
    GeodeticPosition geodetic_from_ecef(const EcefPosition &pos, double earth_radius = earth_radius_m);

    // Satellites sit on the GEO circle in the equatorial plane, centered on the reference
    // longitude, with adjacent satellites one intersatellite spacing apart along the arc.
    // Throws InvalidParams for N = 0 or a non-positive spacing, and SpacingTooLarge when the
    // formation spans more than a quarter orbit.
    std::vector<EcefPosition> geo_satellite_positions(const ConstellationLayout &layout);

    double slant_range(const EcefPosition &a, const EcefPosition &b);

    // Receive antennas on a straight east-pointing baseline through the ground station,
    // centered on it, spaced by spacing_m in the local tangent plane.
    std::vector<EcefPosition> ground_array_positions(const GeodeticPosition &center, std::size_t num_rx,
                                                     double spacing_m, double earth_radius = earth_radius_m);

    // Matrix of slant ranges, rows = receive antennas, columns = satellites
    std::vector<std::vector<double>> slant_range_matrix(const std::vector<EcefPosition> &rx,
                                                        const std::vector<EcefPosition> &sats);

    // Intersatellite spacing for an M-antenna ground station given the 2x2 design spacing
    double scaled_intersatellite_spacing(double base_spacing_2x2_m, std::size_t num_rx);

    double link_budget_snr_db(const LinkBudget &budget);

    double snr_db_to_linear(double snr_db);
    double snr_linear_to_db(double rho);
}

#endif
