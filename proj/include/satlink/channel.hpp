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

#ifndef SATLINK_CHANNEL_HPP
#define SATLINK_CHANNEL_HPP

#include "satlink/statistics.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace satlink
{
    // Narrowband MIMO channel. Rows are receive antennas, columns are transmit ports.
    // With N satellites and P polarizations per satellite, column n*P + j is port j of satellite n.
    struct ChannelMatrix
    {
        Eigen::MatrixXcd entries;

        ChannelMatrix() = default;
        explicit ChannelMatrix(Eigen::MatrixXcd h) : entries(std::move(h)) {}
        ChannelMatrix(std::size_t num_rx, std::size_t num_tx)
            : entries(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(num_rx), static_cast<Eigen::Index>(num_tx))) {}

        std::size_t num_rx() const { return static_cast<std::size_t>(entries.rows()); }
        std::size_t num_tx() const { return static_cast<std::size_t>(entries.cols()); }

        // Throws NumericalError on non-finite entries, DimensionMismatch on an empty matrix
        void validate() const;
    };

    // Antenna layout of a generated channel
    struct ArrayDims
    {
        std::size_t num_satellites = 1;
        std::size_t polarizations = 2; // transmit ports per satellite
        std::size_t num_rx = 2;

        std::size_t num_tx() const { return num_satellites * polarizations; }
    };

    using PatternFn = std::function<double(double angle_rad)>;

    inline double isotropic_pattern(double) { return 1.0; }

    // P_p ~ exp(-(p-1) * decay), normalized to sum 1
    std::vector<double> exponential_power_profile(std::size_t num_clusters, double decay);
    std::vector<double> uniform_delay_profile(std::size_t num_clusters, double delay_step_s);

    // Cluster-based spatial model: Ricean sum of a deterministic LOS path and P-1 scattering
    // clusters of R rays each, flattened to one coefficient per antenna pair.
    struct ClusterModelParams
    {
        double ricean_k = 100.0; // linear; +inf gives a pure LOS channel
        std::size_t num_clusters = 6;
        std::size_t rays_per_cluster = 20;
        std::vector<double> cluster_powers = exponential_power_profile(6, 0.5); // index 0 is the LOS cluster
        std::vector<double> cluster_delays_s = uniform_delay_profile(6, 50e-9);

        double iono_power_loss_phase = 0.0; // rad, LOS compensation phase
        double shadow_coeff = 1.0;          // linear, per ray
        double path_loss = 1.0;             // linear
        PatternFn tx_pattern = isotropic_pattern;
        PatternFn rx_pattern = isotropic_pattern;

        double los_aod_deg = 0.0;
        double los_aoa_deg = 0.0;
        double aod_sector_deg = 10.0; // cluster-center AOD drawn uniformly in this sector around the LOS
        double aod_spread_deg = 2.0;  // per-ray Laplacian spreads (standard deviation)
        double aoa_spread_deg = 20.0;

        double sat_spacing_m = 6.0;
        double ground_spacing_m = 68.2e3;
        double wavelength_m = 299792458.0 / 14.0e9;

        double mobile_speed_mps = 0.0;
        double motion_direction_rad = 0.0;
        double iono_angle_offset_rad = 0.0;

        // Exponentially decaying powers P_p ~ exp(-(p-1) * decay) and delays (p-1) * delay_step_s
        static ClusterModelParams with_profile(std::size_t num_clusters, double decay, double delay_step_s);

        void validate() const;

        // Analytic E|h|^2 of one entry
        double mean_entry_power() const;
    };

    struct FreeSpaceParams
    {
        double carrier_hz = 14.0e9;
        double carrier_phase_rad = 0.0;
        bool use_constant_gain_approx = false;
        double constant_gain = 1.0;

        void validate() const;
    };

    struct SatelliteDelays
    {
        std::vector<double> relative_delays_s; // satellites 2..N; satellite 1 is the reference
    };

    // Entry (m, port) at time t. Rays, angles and per-port scattering phases are drawn from rng.
    ChannelMatrix cluster_channel_matrix(RngStream &rng, const ClusterModelParams &params, const ArrayDims &dims,
                                         double t = 0.0);

    // ranges: rows = receive antennas, columns = transmit ports (r_ij in meters)
    ChannelMatrix freespace_channel_matrix(const std::vector<std::vector<double>> &ranges, const FreeSpaceParams &params);

    // Lognormal shadowed LOS (uniform phase) plus CN(0, 2 c_o) diffuse part, independent entries
    ChannelMatrix loo_channel_matrix(RngStream &rng, const LooParams &params, std::size_t num_rx, std::size_t num_tx);

    double loo_mean_entry_power(const LooParams &params);

    // CN(0, 1) entries
    ChannelMatrix rayleigh_channel_matrix(RngStream &rng, std::size_t num_rx, std::size_t num_tx);

    // [H_s1, H_s2 e^{-j 2 pi f_c tau_2}, ...]. Throws DimensionMismatch.
    ChannelMatrix ms_mra_channel(const std::vector<ChannelMatrix> &per_satellite, const SatelliteDelays &delays,
                                 double carrier_hz);

    // Splits into per-satellite blocks of `ports` columns, applies delays, re-joins
    ChannelMatrix apply_satellite_delays(const ChannelMatrix &h, std::size_t ports, const SatelliteDelays &delays,
                                         double carrier_hz);

    // A realization source plus what the evaluators need to know about it
    struct ChannelSource
    {
        std::function<ChannelMatrix(RngStream &)> draw;
        double mean_entry_power = 1.0;
        bool deterministic = false;
        ArrayDims dims;
    };

    // Same source, entries scaled to unit average power
    ChannelSource normalized(ChannelSource src);
}

#endif
