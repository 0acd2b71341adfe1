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

#ifndef SATLINK_SCENARIO_HPP
#define SATLINK_SCENARIO_HPP

#include "satlink/channel.hpp"
#include "satlink/error_rates.hpp"
#include "satlink/geometry.hpp"
#include "satlink/statistics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace satlink
{
    enum class ModelKind
    {
        Cluster,
        FreeSpace,
        Loo,
        Rayleigh, // i.i.d. CN(0,1) reference channel
    };

    std::string to_string(ModelKind m);
    ModelKind model_from_string(const std::string &name); // throws InvalidParams

    // One antenna configuration of a capacity sweep, written "TxM": T transmit ports, M receive antennas
    struct ArrayConfig
    {
        std::size_t num_tx = 2;
        std::size_t num_rx = 2;
    };

    struct ScenarioConfig
    {
        ConstellationLayout constellation{1, 13.0, 6.0, Formation::Linear};
        bool scale_spacing_with_rx = true; // intersatellite spacing = base * 2 / M
        std::size_t polarizations = 2;

        GeodeticPosition ground_station{47.8, 11.1, 0.0};
        std::size_t num_rx = 2;
        double ground_spacing_m = 68.2e3;
        double carrier_hz = 14.0e9;

        std::optional<LinkBudget> link_budget;
        std::vector<double> snr_db;

        ModelKind model = ModelKind::Cluster;
        ClusterModelParams cluster;
        double cluster_time_s = 0.0;
        LooParams loo;
        FreeSpaceParams freespace;
        bool normalize_freespace = true;

        ModulationScheme modulation{2};
        std::uint64_t seed = 1;
        std::size_t num_realizations = 10000;
        std::uint64_t num_bits = 1000000;
        SatelliteDelays satellite_delays;

        bool normalize_by_tx = false;
        std::vector<ArrayConfig> sweep_arrays; // empty: the scenario's own array
        std::vector<ModelKind> ber_models;     // empty: the scenario's model
        std::size_t ccdf_points = 50;

        std::string config_hash; // FNV-1a of the canonical key/value text, hex

        // SNR list to evaluate: the explicit list, or the single link-budget SNR
        std::vector<double> evaluation_snr_db() const;

        // Throws ValidationError naming the offending field
        void validate() const;

        ArrayDims dims() const { return {constellation.num_satellites, polarizations, num_rx}; }

        // Satellites and transmit ports per satellite realizing a sweep entry
        ArrayDims dims_for(const ArrayConfig &a) const;

        double effective_intersatellite_spacing(std::size_t num_rx) const;
    };

    // Flat "key = value" text, '#' starts a comment. Lists are comma separated; SNR lists also accept
    // "start:step:stop". Unknown or repeated keys are parse errors.
    ScenarioConfig parse_scenario_text(const std::string &text);
    ScenarioConfig parse_scenario(const std::string &path);

    // "a, b, c" or "start:step:stop"; throws InvalidParams
    std::vector<double> parse_snr_list(const std::string &text);

    // Channel generator for the scenario's model realizing `dims`. Fading models are normalized to
    // unit average entry power; the free-space model is normalized unless disabled.
    ChannelSource make_channel_source(const ScenarioConfig &cfg, ModelKind model, const ArrayDims &dims);
    ChannelSource make_channel_source(const ScenarioConfig &cfg);

    // Slant ranges between every receive antenna and satellite of `dims`
    std::vector<std::vector<double>> scenario_slant_ranges(const ScenarioConfig &cfg, const ArrayDims &dims);
}

#endif
