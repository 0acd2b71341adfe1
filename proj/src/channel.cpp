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

#include "satlink/channel.hpp"
#include "satlink/errors.hpp"
#include "satlink/geometry.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

namespace
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double deg2rad = std::numbers::pi / 180.0;
    using cd = std::complex<double>;

    // e^{j 2 pi d / lambda}, reducing d modulo lambda first so that large ranges keep their phase precision
    cd path_phasor(double d, double wavelength)
    {
        return std::polar(1.0, two_pi * std::fmod(d, wavelength) / wavelength);
    }

    struct Ray
    {
        double aod;       // rad
        double aoa;       // rad
        double amplitude; // sqrt of the gain product
    };
}

namespace satlink
{
    void ChannelMatrix::validate() const
    {
        if (entries.rows() == 0 || entries.cols() == 0)
            throw DimensionMismatch("Channel matrix is empty.");
        if (!entries.allFinite())
            throw NumericalError("Channel matrix has non-finite entries.");
    }

    std::vector<double> exponential_power_profile(std::size_t num_clusters, double decay)
    {
        if (num_clusters == 0)
            throw InvalidParams("At least one cluster is required.");
        std::vector<double> p(num_clusters);
        for (std::size_t i = 0; i < num_clusters; ++i)
            p[i] = std::exp(-decay * static_cast<double>(i));
        const double total = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto &v : p)
            v /= total;
        return p;
    }

    std::vector<double> uniform_delay_profile(std::size_t num_clusters, double delay_step_s)
    {
        std::vector<double> d(num_clusters);
        for (std::size_t i = 0; i < num_clusters; ++i)
            d[i] = delay_step_s * static_cast<double>(i);
        return d;
    }

    ClusterModelParams ClusterModelParams::with_profile(std::size_t num_clusters, double decay, double delay_step_s)
    {
        ClusterModelParams p;
        p.num_clusters = num_clusters;
        p.cluster_powers = exponential_power_profile(num_clusters, decay);
        p.cluster_delays_s = uniform_delay_profile(num_clusters, delay_step_s);
        return p;
    }

    void ClusterModelParams::validate() const
    {
        if (!(ricean_k >= 0.0))
            throw InvalidParams("Ricean K-factor cannot be negative.");
        if (num_clusters == 0 || rays_per_cluster == 0)
            throw InvalidParams("Cluster and ray counts must be at least 1.");
        if (cluster_powers.size() != num_clusters || cluster_delays_s.size() != num_clusters)
            throw InvalidParams("Cluster power and delay lists must have num_clusters entries.");
        double total = 0.0;
        for (double v : cluster_powers)
        {
            if (!(v >= 0.0))
                throw InvalidParams("Cluster powers cannot be negative.");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw InvalidParams("Cluster powers must sum to 1, got " + std::to_string(total));
        for (std::size_t i = 1; i < num_clusters; ++i)
            if (cluster_delays_s[i] < cluster_delays_s[i - 1])
                throw InvalidParams("Cluster delays must be ascending.");
        if (num_clusters > 1 && 1.0 - cluster_powers[0] <= 0.0)
            throw InvalidParams("Scattering clusters carry no power.");
        if (!(shadow_coeff >= 0.0) || !(path_loss >= 0.0))
            throw InvalidParams("Shadowing and path loss coefficients cannot be negative.");
        if (!(sat_spacing_m >= 0.0) || !(ground_spacing_m >= 0.0) || !(mobile_speed_mps >= 0.0))
            throw InvalidParams("Spacings and speeds cannot be negative.");
        if (!(wavelength_m > 0.0))
            throw InvalidParams("Wavelength must be positive.");
        if (!(aod_spread_deg >= 0.0) || !(aoa_spread_deg >= 0.0) || !(aod_sector_deg >= 0.0))
            throw InvalidParams("Angular spreads cannot be negative.");
        if (!tx_pattern || !rx_pattern)
            throw InvalidParams("Antenna patterns must be set.");
    }

    double ClusterModelParams::mean_entry_power() const
    {
        validate();
        const double los_gain = rx_pattern(los_aoa_deg * deg2rad) * tx_pattern(los_aod_deg * deg2rad);

        // Average pattern gain of the scattered rays: AOA uniform on the circle, AOD uniform in the sector.
        // The per-ray Laplacian offsets are ignored here, which is exact for isotropic patterns.
        constexpr int grid = 3600;
        double g_rx = 0.0, g_tx = 0.0;
        for (int i = 0; i < grid; ++i)
        {
            const double u = (static_cast<double>(i) + 0.5) / grid;
            g_rx += rx_pattern(-std::numbers::pi + two_pi * u);
            g_tx += tx_pattern((los_aod_deg + (u - 0.5) * aod_sector_deg) * deg2rad);
        }
        const double nlos_gain = (g_rx / grid) * (g_tx / grid);

        const double w_los = std::isinf(ricean_k) ? 1.0 : ricean_k / (ricean_k + 1.0);
        const double nlos = num_clusters > 1 ? (1.0 - w_los) * nlos_gain : 0.0;
        return shadow_coeff * path_loss * (w_los * los_gain + nlos);
    }

    void FreeSpaceParams::validate() const
    {
        if (!(carrier_hz > 0.0))
            throw InvalidParams("Carrier frequency must be positive.");
        if (use_constant_gain_approx && !(constant_gain > 0.0))
            throw InvalidParams("Constant gain must be positive.");
    }

    ChannelMatrix cluster_channel_matrix(RngStream &rng, const ClusterModelParams &params, const ArrayDims &dims,
                                         double t)
    {
        params.validate();
        if (dims.num_satellites == 0 || dims.polarizations == 0 || dims.num_rx == 0)
            throw InvalidParams("Array dimensions must be positive.");

        const std::size_t n_rx = dims.num_rx, n_sat = dims.num_satellites, n_pol = dims.polarizations;
        const std::size_t n_tx = dims.num_tx();
        const double carrier = speed_of_light / params.wavelength_m;
        const double pwr = params.shadow_coeff * params.path_loss;

        const bool los_only = std::isinf(params.ricean_k);
        const double w_los = los_only ? 1.0 : std::sqrt(params.ricean_k / (params.ricean_k + 1.0));
        const double w_nlos = los_only ? 0.0 : std::sqrt(1.0 / (params.ricean_k + 1.0));

        // Phase of one path at (satellite n, antenna m): array offsets plus the Doppler term
        auto path = [&](double aod, double aoa, std::size_t n, std::size_t m)
        {
            const double geo = static_cast<double>(n) * params.sat_spacing_m * std::sin(aod) +
                               static_cast<double>(m) * params.ground_spacing_m * std::sin(aoa + params.iono_angle_offset_rad);
            const double doppler = params.mobile_speed_mps * t * std::cos(params.motion_direction_rad - aoa);
            return path_phasor(geo - doppler, params.wavelength_m);
        };

        ChannelMatrix h(n_rx, n_tx);

        // LOS path uses the cluster-1 angles; its phase is deterministic
        {
            const double aod = params.los_aod_deg * deg2rad, aoa = params.los_aoa_deg * deg2rad;
            const double amp = w_los * std::sqrt(pwr * params.rx_pattern(aoa) * params.tx_pattern(aod));
            const cd iono = std::polar(1.0, params.iono_power_loss_phase);
            for (std::size_t n = 0; n < n_sat; ++n)
                for (std::size_t m = 0; m < n_rx; ++m)
                {
                    const cd v = amp * iono * path(aod, aoa, n, m);
                    for (std::size_t j = 0; j < n_pol; ++j)
                        h.entries(m, n * n_pol + j) = v;
                }
        }

        if (w_nlos == 0.0 || params.num_clusters < 2)
            return h;

        const double nlos_total = 1.0 - params.cluster_powers[0];
        const double aod_scale = params.aod_spread_deg * deg2rad / std::numbers::sqrt2;
        const double aoa_scale = params.aoa_spread_deg * deg2rad / std::numbers::sqrt2;
        const std::size_t n_rays = params.rays_per_cluster;

        std::vector<Ray> rays(n_rays);
        std::vector<cd> port_phase(n_rays * n_tx);

        for (std::size_t p = 1; p < params.num_clusters; ++p)
        {
            const double center_aod = (params.los_aod_deg + rng.uniform(-0.5, 0.5) * params.aod_sector_deg) * deg2rad;
            const double center_aoa = rng.uniform(-std::numbers::pi, std::numbers::pi);
            for (auto &r : rays)
            {
                r.aod = center_aod + rng.laplace(aod_scale);
                r.aoa = center_aoa + rng.laplace(aoa_scale);
                r.amplitude = std::sqrt(pwr * params.rx_pattern(r.aoa) * params.tx_pattern(r.aod));
            }
            // Independent scattering phase per ray and transmit port; this is what decorrelates the
            // co-located polarizations of one satellite.
            for (auto &v : port_phase)
                v = std::polar(1.0, rng.uniform(0.0, two_pi));

            const double cluster_amp = w_nlos * std::sqrt(params.cluster_powers[p] / nlos_total / static_cast<double>(n_rays));
            const cd delay = std::polar(1.0, -two_pi * std::fmod(carrier * params.cluster_delays_s[p], 1.0));

            for (std::size_t n = 0; n < n_sat; ++n)
                for (std::size_t m = 0; m < n_rx; ++m)
                    for (std::size_t r = 0; r < n_rays; ++r)
                    {
                        const cd base = cluster_amp * rays[r].amplitude * delay * path(rays[r].aod, rays[r].aoa, n, m);
                        for (std::size_t j = 0; j < n_pol; ++j)
                        {
                            const std::size_t col = n * n_pol + j;
                            h.entries(m, col) += base * port_phase[r * n_tx + col];
                        }
                    }
        }
        return h;
    }

    ChannelMatrix freespace_channel_matrix(const std::vector<std::vector<double>> &ranges, const FreeSpaceParams &params)
    {
        params.validate();
        if (ranges.empty() || ranges.front().empty())
            throw DimensionMismatch("Range matrix is empty.");
        const std::size_t n_rx = ranges.size(), n_tx = ranges.front().size();
        const double wavelength = speed_of_light / params.carrier_hz;
        const double k0 = two_pi / speed_of_light;
        const cd carrier = std::polar(1.0, params.carrier_phase_rad);

        ChannelMatrix h(n_rx, n_tx);
        for (std::size_t i = 0; i < n_rx; ++i)
        {
            if (ranges[i].size() != n_tx)
                throw DimensionMismatch("Range matrix rows differ in length.");
            for (std::size_t j = 0; j < n_tx; ++j)
            {
                const double r = ranges[i][j];
                if (!(r > 0.0) || !std::isfinite(r))
                    throw DomainError("Slant ranges must be positive.");
                const double mag = params.use_constant_gain_approx ? params.constant_gain
                                                                   : 1.0 / (2.0 * k0 * params.carrier_hz * r);
                h.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    mag * carrier * std::conj(path_phasor(r, wavelength));
            }
        }
        return h;
    }

    ChannelMatrix loo_channel_matrix(RngStream &rng, const LooParams &params, std::size_t num_rx, std::size_t num_tx)
    {
        params.validate();
        if (num_rx == 0 || num_tx == 0)
            throw InvalidParams("Channel dimensions must be positive.");
        const double s = std::sqrt(params.lognormal_var);
        ChannelMatrix h(num_rx, num_tx);
        for (Eigen::Index j = 0; j < h.entries.cols(); ++j)
            for (Eigen::Index i = 0; i < h.entries.rows(); ++i)
            {
                const double a = std::exp(params.lognormal_mean + s * rng.normal());
                const cd shadowed = std::polar(a, rng.uniform(0.0, two_pi));
                h.entries(i, j) = shadowed + rng.complex_normal(2.0 * params.scatter_power);
            }
        return h;
    }

    double loo_mean_entry_power(const LooParams &params)
    {
        params.validate();
        return std::exp(2.0 * params.lognormal_mean + 2.0 * params.lognormal_var) + 2.0 * params.scatter_power;
    }

    ChannelMatrix rayleigh_channel_matrix(RngStream &rng, std::size_t num_rx, std::size_t num_tx)
    {
        if (num_rx == 0 || num_tx == 0)
            throw InvalidParams("Channel dimensions must be positive.");
        ChannelMatrix h(num_rx, num_tx);
        for (Eigen::Index j = 0; j < h.entries.cols(); ++j)
            for (Eigen::Index i = 0; i < h.entries.rows(); ++i)
                h.entries(i, j) = rng.complex_normal(1.0);
        return h;
    }

    ChannelMatrix ms_mra_channel(const std::vector<ChannelMatrix> &per_satellite, const SatelliteDelays &delays,
                                 double carrier_hz)
    {
        if (per_satellite.empty())
            throw DimensionMismatch("At least one satellite block is required.");
        if (delays.relative_delays_s.size() != per_satellite.size() - 1)
            throw DimensionMismatch("Expected " + std::to_string(per_satellite.size() - 1) + " relative delays, got " +
                                    std::to_string(delays.relative_delays_s.size()));
        for (double tau : delays.relative_delays_s)
            if (!(tau >= 0.0) || !std::isfinite(tau))
                throw InvalidParams("Relative delays must be non-negative.");

        const Eigen::Index rows = per_satellite.front().entries.rows();
        Eigen::Index cols = 0;
        for (const auto &b : per_satellite)
        {
            if (b.entries.rows() != rows)
                throw DimensionMismatch("Satellite blocks differ in the number of receive antennas.");
            cols += b.entries.cols();
        }

        ChannelMatrix out;
        out.entries.resize(rows, cols);
        Eigen::Index col = 0;
        for (std::size_t n = 0; n < per_satellite.size(); ++n)
        {
            const auto &b = per_satellite[n].entries;
            if (n == 0)
                out.entries.middleCols(col, b.cols()) = b;
            else
            {
                // Phase of f_c * tau modulo one cycle
                const double cycles = std::fmod(carrier_hz * delays.relative_delays_s[n - 1], 1.0);
                out.entries.middleCols(col, b.cols()) = b * std::polar(1.0, -two_pi * cycles);
            }
            col += b.cols();
        }
        return out;
    }

    ChannelMatrix apply_satellite_delays(const ChannelMatrix &h, std::size_t ports, const SatelliteDelays &delays,
                                         double carrier_hz)
    {
        if (ports == 0 || h.num_tx() % ports != 0)
            throw DimensionMismatch("Transmit ports do not split evenly into satellites.");
        const std::size_t n_sat = h.num_tx() / ports;
        std::vector<ChannelMatrix> blocks;
        blocks.reserve(n_sat);
        for (std::size_t n = 0; n < n_sat; ++n)
            blocks.emplace_back(h.entries.middleCols(static_cast<Eigen::Index>(n * ports), static_cast<Eigen::Index>(ports)));
        return ms_mra_channel(blocks, delays, carrier_hz);
    }

    ChannelSource normalized(ChannelSource src)
    {
        if (!(src.mean_entry_power > 0.0) || !std::isfinite(src.mean_entry_power))
            throw NumericalError("Cannot normalize a channel with zero mean power.");
        if (src.mean_entry_power == 1.0)
            return src;
        const double scale = 1.0 / std::sqrt(src.mean_entry_power);
        auto inner = std::move(src.draw);
        src.draw = [inner = std::move(inner), scale](RngStream &rng)
        {
            auto h = inner(rng);
            h.entries *= scale;
            return h;
        };
        src.mean_entry_power = 1.0;
        return src;
    }
}
