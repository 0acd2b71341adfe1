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

#include "satlink/scenario.hpp"
#include "satlink/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace
{
    using namespace satlink;

    // Raised by value converters; becomes a ParseError pointing at the value
    struct BadValue
    {
        std::string message;
    };

    std::string trim(const std::string &s)
    {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::string lower(std::string s)
    {
        for (auto &c : s)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    }

    double to_double(const std::string &v)
    {
        double out = 0.0;
        const auto *first = v.data(), *last = v.data() + v.size();
        if (!v.empty() && *first == '+')
            ++first;
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last)
            throw BadValue{"expected a number, got '" + v + "'"};
        return out;
    }

    std::uint64_t to_u64(const std::string &v)
    {
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size())
        {
            // Allow integral values written in exponent form, e.g. 1e6
            double d = 0.0;
            try
            {
                d = to_double(v);
            }
            catch (const BadValue &)
            {
                throw BadValue{"expected a non-negative integer, got '" + v + "'"};
            }
            if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19)
                throw BadValue{"expected a non-negative integer, got '" + v + "'"};
            return static_cast<std::uint64_t>(d);
        }
        return out;
    }

    std::size_t to_size(const std::string &v)
    {
        return static_cast<std::size_t>(to_u64(v));
    }

    bool to_bool(const std::string &v)
    {
        const auto l = lower(v);
        if (l == "true" || l == "yes" || l == "on" || l == "1")
            return true;
        if (l == "false" || l == "no" || l == "off" || l == "0")
            return false;
        throw BadValue{"expected true or false, got '" + v + "'"};
    }

    std::vector<std::string> split_list(const std::string &v)
    {
        std::vector<std::string> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            item = trim(item);
            if (item.empty())
                throw BadValue{"empty list element"};
            out.push_back(item);
        }
        if (out.empty())
            throw BadValue{"empty list"};
        return out;
    }

    std::vector<double> to_double_list(const std::string &v)
    {
        std::vector<double> out;
        for (const auto &item : split_list(v))
            out.push_back(to_double(item));
        return out;
    }

    // "a, b, c" or "start:step:stop" (inclusive)
    std::vector<double> to_snr_list(const std::string &v)
    {
        if (v.find(':') == std::string::npos)
            return to_double_list(v);
        std::vector<std::string> parts;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ':'))
            parts.push_back(trim(item));
        if (parts.size() != 3)
            throw BadValue{"range must be start:step:stop"};
        const double start = to_double(parts[0]), step = to_double(parts[1]), stop = to_double(parts[2]);
        if (!(step > 0.0) || stop < start)
            throw BadValue{"range needs a positive step and stop >= start"};
        std::vector<double> out;
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
            out.push_back(start + step * static_cast<double>(i));
        return out;
    }

    ArrayConfig to_array_config(const std::string &v)
    {
        const auto l = lower(v);
        const auto x = l.find('x');
        if (x == std::string::npos)
            throw BadValue{"array must be written TxM, got '" + v + "'"};
        const auto t = to_size(trim(l.substr(0, x))), m = to_size(trim(l.substr(x + 1)));
        if (t == 0 || m == 0)
            throw BadValue{"array dimensions must be positive"};
        return {t, m};
    }

    std::uint64_t fnv1a(const std::string &s)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    constexpr double deg2rad = std::numbers::pi / 180.0;

    struct ClusterProfile
    {
        std::optional<std::size_t> num_clusters;
        double decay = 0.5;
        double delay_step_s = 50e-9;
        std::optional<std::vector<double>> powers;
        std::optional<std::vector<double>> delays;
    };

    using Handler = std::function<void(const std::string &, ScenarioConfig &, ClusterProfile &)>;

    const std::map<std::string, Handler> &handlers()
    {
        static const std::map<std::string, Handler> table = {
            {"orbit", [](const std::string &v, ScenarioConfig &, ClusterProfile &)
             {
                 const auto l = lower(v);
                 if (l != "geostationary" && l != "geo")
                     throw BadValue{"only geostationary orbits are supported"};
             }},
            {"sat_longitude_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.constellation.reference_longitude_deg = to_double(v); }},
            {"num_satellites", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.constellation.num_satellites = to_size(v); }},
            {"intersat_spacing_m", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.constellation.intersatellite_spacing_m = to_double(v); }},
            {"intersat_spacing_rule", [](const std::string &v, ScenarioConfig &c, ClusterProfile &)
             {
                 const auto l = lower(v);
                 if (l == "scaled")
                     c.scale_spacing_with_rx = true;
                 else if (l == "fixed")
                     c.scale_spacing_with_rx = false;
                 else
                     throw BadValue{"expected 'scaled' or 'fixed'"};
             }},
            {"polarizations", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.polarizations = to_size(v); }},
            {"carrier_hz", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.carrier_hz = to_double(v); }},
            {"ground_lat_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.ground_station.latitude_deg = to_double(v); }},
            {"ground_lon_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.ground_station.longitude_deg = to_double(v); }},
            {"ground_alt_m", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.ground_station.altitude_m = to_double(v); }},
            {"num_rx", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.num_rx = to_size(v); }},
            {"rx_spacing_m", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.ground_spacing_m = to_double(v); }},
            {"model", [](const std::string &v, ScenarioConfig &c, ClusterProfile &)
             {
                 try
                 {
                     c.model = model_from_string(v);
                 }
                 catch (const InvalidParams &e)
                 {
                     throw BadValue{e.what()};
                 }
             }},
            {"modulation", [](const std::string &v, ScenarioConfig &c, ClusterProfile &)
             {
                 try
                 {
                     c.modulation = ModulationScheme::from_name(v);
                 }
                 catch (const InvalidParams &e)
                 {
                     throw BadValue{e.what()};
                 }
             }},
            {"seed", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.seed = to_u64(v); }},
            {"realizations", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.num_realizations = to_size(v); }},
            {"bits", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.num_bits = to_u64(v); }},
            {"snr_db", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.snr_db = to_snr_list(v); }},
            {"satellite_delays_s", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.satellite_delays.relative_delays_s = to_double_list(v); }},
            {"link.eirp_dbw", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.link_budget.emplace(c.link_budget.value_or(LinkBudget{})).eirp_dbw = to_double(v); }},
            {"link.gt_dbk", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.link_budget.emplace(c.link_budget.value_or(LinkBudget{})).figure_of_merit_dbk = to_double(v); }},
            {"link.boltzmann_db", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.link_budget.emplace(c.link_budget.value_or(LinkBudget{})).boltzmann_db = to_double(v); }},
            {"link.bandwidth_dbhz", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.link_budget.emplace(c.link_budget.value_or(LinkBudget{})).bandwidth_dbhz = to_double(v); }},
            {"capacity.normalize_by_tx", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.normalize_by_tx = to_bool(v); }},
            {"sweep.arrays", [](const std::string &v, ScenarioConfig &c, ClusterProfile &)
             {
                 c.sweep_arrays.clear();
                 for (const auto &item : split_list(v))
                     c.sweep_arrays.push_back(to_array_config(item));
             }},
            {"ber.models", [](const std::string &v, ScenarioConfig &c, ClusterProfile &)
             {
                 c.ber_models.clear();
                 for (const auto &item : split_list(v))
                 {
                     try
                     {
                         c.ber_models.push_back(model_from_string(item));
                     }
                     catch (const InvalidParams &e)
                     {
                         throw BadValue{e.what()};
                     }
                 }
             }},
            {"ccdf.points", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.ccdf_points = to_size(v); }},
            {"cluster.k_factor", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.ricean_k = to_double(v); }},
            {"cluster.num_clusters", [](const std::string &v, ScenarioConfig &, ClusterProfile &p) { p.num_clusters = to_size(v); }},
            {"cluster.rays", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.rays_per_cluster = to_size(v); }},
            {"cluster.power_decay", [](const std::string &v, ScenarioConfig &, ClusterProfile &p) { p.decay = to_double(v); }},
            {"cluster.delay_step_s", [](const std::string &v, ScenarioConfig &, ClusterProfile &p) { p.delay_step_s = to_double(v); }},
            {"cluster.powers", [](const std::string &v, ScenarioConfig &, ClusterProfile &p) { p.powers = to_double_list(v); }},
            {"cluster.delays_s", [](const std::string &v, ScenarioConfig &, ClusterProfile &p) { p.delays = to_double_list(v); }},
            {"cluster.aoa_spread_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.aoa_spread_deg = to_double(v); }},
            {"cluster.aod_spread_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.aod_spread_deg = to_double(v); }},
            {"cluster.aod_sector_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.aod_sector_deg = to_double(v); }},
            {"cluster.los_aoa_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.los_aoa_deg = to_double(v); }},
            {"cluster.los_aod_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.los_aod_deg = to_double(v); }},
            {"cluster.iono_phase_rad", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.iono_power_loss_phase = to_double(v); }},
            {"cluster.iono_angle_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.iono_angle_offset_rad = to_double(v) * deg2rad; }},
            {"cluster.shadow_coeff", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.shadow_coeff = to_double(v); }},
            {"cluster.path_loss", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.path_loss = to_double(v); }},
            {"cluster.speed_mps", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.mobile_speed_mps = to_double(v); }},
            {"cluster.motion_dir_deg", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster.motion_direction_rad = to_double(v) * deg2rad; }},
            {"cluster.time_s", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.cluster_time_s = to_double(v); }},
            {"loo.mu", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.loo.lognormal_mean = to_double(v); }},
            {"loo.sigma2", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.loo.lognormal_var = to_double(v); }},
            {"loo.c0", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.loo.scatter_power = to_double(v); }},
            {"freespace.constant_gain", [](const std::string &v, ScenarioConfig &c, ClusterProfile &)
             {
                 c.freespace.constant_gain = to_double(v);
                 c.freespace.use_constant_gain_approx = true;
             }},
            {"freespace.use_constant_gain", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.freespace.use_constant_gain_approx = to_bool(v); }},
            {"freespace.carrier_phase_rad", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.freespace.carrier_phase_rad = to_double(v); }},
            {"freespace.normalize", [](const std::string &v, ScenarioConfig &c, ClusterProfile &) { c.normalize_freespace = to_bool(v); }},
        };
        return table;
    }

    void finish_cluster_profile(ScenarioConfig &cfg, const ClusterProfile &p)
    {
        const std::size_t n = p.num_clusters.value_or(p.powers ? p.powers->size() : cfg.cluster.num_clusters);
        if (n == 0)
            throw ValidationError("cluster.num_clusters", "must be at least 1");
        if (!(p.decay >= 0.0))
            throw ValidationError("cluster.power_decay", "cannot be negative");
        if (!(p.delay_step_s >= 0.0))
            throw ValidationError("cluster.delay_step_s", "cannot be negative");
        cfg.cluster.num_clusters = n;
        cfg.cluster.cluster_powers = p.powers.value_or(exponential_power_profile(n, p.decay));
        cfg.cluster.cluster_delays_s = p.delays.value_or(uniform_delay_profile(n, p.delay_step_s));
        if (cfg.cluster.cluster_powers.size() != n)
            throw ValidationError("cluster.powers", "needs one entry per cluster");
        if (cfg.cluster.cluster_delays_s.size() != n)
            throw ValidationError("cluster.delays_s", "needs one entry per cluster");
    }
}

namespace satlink
{
    std::string to_string(ModelKind m)
    {
        switch (m)
        {
        case ModelKind::Cluster:
            return "cluster";
        case ModelKind::FreeSpace:
            return "freespace";
        case ModelKind::Loo:
            return "loo";
        case ModelKind::Rayleigh:
            return "rayleigh";
        }
        return "unknown";
    }

    ModelKind model_from_string(const std::string &name)
    {
        const auto l = lower(trim(name));
        if (l == "cluster")
            return ModelKind::Cluster;
        if (l == "freespace" || l == "free_space" || l == "los")
            return ModelKind::FreeSpace;
        if (l == "loo")
            return ModelKind::Loo;
        if (l == "rayleigh")
            return ModelKind::Rayleigh;
        throw InvalidParams("Unknown channel model '" + name + "'.");
    }

    std::vector<double> ScenarioConfig::evaluation_snr_db() const
    {
        if (link_budget)
            return {link_budget_snr_db(*link_budget)};
        return snr_db;
    }

    double ScenarioConfig::effective_intersatellite_spacing(std::size_t m) const
    {
        if (!scale_spacing_with_rx)
            return constellation.intersatellite_spacing_m;
        return scaled_intersatellite_spacing(constellation.intersatellite_spacing_m, m);
    }

    ArrayDims ScenarioConfig::dims_for(const ArrayConfig &a) const
    {
        if (a.num_tx <= polarizations)
            return {1, a.num_tx, a.num_rx};
        if (a.num_tx % polarizations != 0)
            throw ValidationError("sweep.arrays", std::to_string(a.num_tx) + " ports do not split into satellites with " +
                                                      std::to_string(polarizations) + " polarizations");
        return {a.num_tx / polarizations, polarizations, a.num_rx};
    }

    void ScenarioConfig::validate() const
    {
        if (constellation.num_satellites == 0)
            throw ValidationError("num_satellites", "must be at least 1");
        if (!(constellation.intersatellite_spacing_m > 0.0))
            throw ValidationError("intersat_spacing_m", "must be positive");
        if (polarizations != 1 && polarizations != 2)
            throw ValidationError("polarizations", "must be 1 or 2");
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw ValidationError("carrier_hz", "must be positive");
        if (ground_station.latitude_deg < -90.0 || ground_station.latitude_deg > 90.0 || !std::isfinite(ground_station.latitude_deg))
            throw ValidationError("ground_lat_deg", "must be within [-90, 90]");
        if (!std::isfinite(ground_station.longitude_deg))
            throw ValidationError("ground_lon_deg", "must be finite");
        if (!(ground_station.altitude_m >= 0.0))
            throw ValidationError("ground_alt_m", "cannot be negative");
        if (num_rx == 0)
            throw ValidationError("num_rx", "must be at least 1");
        if (!(ground_spacing_m >= 0.0) || !std::isfinite(ground_spacing_m))
            throw ValidationError("rx_spacing_m", "cannot be negative");

        if (link_budget && !snr_db.empty())
            throw ValidationError("snr_db", "give either an SNR list or a link budget, not both");
        if (!link_budget && snr_db.empty())
            throw ValidationError("snr_db", "an SNR list or a link budget is required");
        for (double s : snr_db)
            if (!std::isfinite(s))
                throw ValidationError("snr_db", "values must be finite");
        if (link_budget)
        {
            try
            {
                link_budget_snr_db(*link_budget);
            }
            catch (const std::exception &e)
            {
                throw ValidationError("link", e.what());
            }
        }

        if (num_realizations == 0)
            throw ValidationError("realizations", "must be at least 1");
        if (ccdf_points == 0)
            throw ValidationError("ccdf.points", "must be at least 1");
        for (double tau : satellite_delays.relative_delays_s)
            if (!(tau >= 0.0) || !std::isfinite(tau))
                throw ValidationError("satellite_delays_s", "delays must be non-negative");
        if (!satellite_delays.relative_delays_s.empty() &&
            satellite_delays.relative_delays_s.size() != constellation.num_satellites - 1)
            throw ValidationError("satellite_delays_s", "needs num_satellites - 1 entries");

        try
        {
            geo_satellite_positions({constellation.num_satellites, constellation.reference_longitude_deg,
                                     effective_intersatellite_spacing(num_rx), constellation.formation});
        }
        catch (const std::exception &e)
        {
            throw ValidationError("intersat_spacing_m", e.what());
        }

        try
        {
            cluster.validate();
        }
        catch (const std::exception &e)
        {
            throw ValidationError("cluster", e.what());
        }
        if (!std::isfinite(cluster_time_s))
            throw ValidationError("cluster.time_s", "must be finite");
        try
        {
            loo.validate();
        }
        catch (const std::exception &e)
        {
            throw ValidationError("loo", e.what());
        }
        try
        {
            freespace.validate();
        }
        catch (const std::exception &e)
        {
            throw ValidationError("freespace", e.what());
        }

        for (const auto &a : sweep_arrays)
            dims_for(a);
    }

    ScenarioConfig parse_scenario_text(const std::string &text)
    {
        ScenarioConfig cfg;
        ClusterProfile profile;
        std::set<std::string> seen;
        std::map<std::string, std::string> canonical;

        std::istringstream in(text);
        std::string raw;
        std::size_t line_no = 0;
        while (std::getline(in, raw))
        {
            ++line_no;
            std::string line = raw;
            for (std::size_t i = 0; i < line.size(); ++i)
                if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]))))
                {
                    line.resize(i);
                    break;
                }
            if (trim(line).empty())
                continue;

            const auto eq = line.find('=');
            const auto first = line.find_first_not_of(" \t") + 1;
            if (eq == std::string::npos)
                throw ParseError(line_no, first, "expected 'key = value'");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ParseError(line_no, first, "missing key");
            const auto value_col = line.find_first_not_of(" \t", eq + 1);
            const std::size_t vcol = value_col == std::string::npos ? eq + 2 : value_col + 1;
            if (value.empty())
                throw ParseError(line_no, vcol, "missing value for '" + key + "'");

            const auto it = handlers().find(key);
            if (it == handlers().end())
                throw ParseError(line_no, first, "unknown key '" + key + "'");
            if (!seen.insert(key).second)
                throw ParseError(line_no, first, "duplicate key '" + key + "'");
            try
            {
                it->second(value, cfg, profile);
            }
            catch (const BadValue &e)
            {
                throw ParseError(line_no, vcol, key + ": " + e.message);
            }
            canonical[key] = value;
        }
        if (seen.empty())
            throw ParseError(line_no == 0 ? 1 : line_no, 1, "scenario is empty");

        finish_cluster_profile(cfg, profile);
        cfg.cluster.wavelength_m = speed_of_light / cfg.carrier_hz;
        cfg.cluster.ground_spacing_m = cfg.ground_spacing_m;
        cfg.freespace.carrier_hz = cfg.carrier_hz;

        std::string canon;
        for (const auto &[k, v] : canonical)
            canon += k + "=" + v + "\n";
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
        cfg.config_hash = hex;

        cfg.validate();
        return cfg;
    }

    ScenarioConfig parse_scenario(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw IoError("Cannot open scenario file '" + path + "'.");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_scenario_text(ss.str());
    }

    std::vector<double> parse_snr_list(const std::string &text)
    {
        try
        {
            return to_snr_list(trim(text));
        }
        catch (const BadValue &e)
        {
            throw InvalidParams(e.message);
        }
    }

    std::vector<std::vector<double>> scenario_slant_ranges(const ScenarioConfig &cfg, const ArrayDims &dims)
    {
        const auto sats = geo_satellite_positions({dims.num_satellites, cfg.constellation.reference_longitude_deg,
                                                   cfg.effective_intersatellite_spacing(dims.num_rx),
                                                   cfg.constellation.formation});
        const auto rx = ground_array_positions(cfg.ground_station, dims.num_rx, cfg.ground_spacing_m);
        return slant_range_matrix(rx, sats);
    }

    ChannelSource make_channel_source(const ScenarioConfig &cfg, ModelKind model, const ArrayDims &dims)
    {
        ChannelSource src;
        src.dims = dims;
        const std::size_t n_sat = dims.num_satellites, n_pol = dims.polarizations;

        SatelliteDelays delays;
        delays.relative_delays_s.assign(n_sat - 1, 0.0);
        for (std::size_t i = 0; i + 1 < n_sat && i < cfg.satellite_delays.relative_delays_s.size(); ++i)
            delays.relative_delays_s[i] = cfg.satellite_delays.relative_delays_s[i];
        const bool has_delays = std::any_of(delays.relative_delays_s.begin(), delays.relative_delays_s.end(),
                                            [](double t) { return t != 0.0; });
        const double fc = cfg.carrier_hz;

        switch (model)
        {
        case ModelKind::Cluster:
        {
            auto p = cfg.cluster;
            p.wavelength_m = speed_of_light / fc;
            p.sat_spacing_m = cfg.effective_intersatellite_spacing(dims.num_rx);
            p.ground_spacing_m = cfg.ground_spacing_m;
            p.validate();
            src.mean_entry_power = p.mean_entry_power();
            src.deterministic = std::isinf(p.ricean_k) || p.num_clusters == 1;
            const double t = cfg.cluster_time_s;
            src.draw = [p, dims, t, delays, has_delays, fc, n_pol](RngStream &rng)
            {
                auto h = cluster_channel_matrix(rng, p, dims, t);
                return has_delays ? apply_satellite_delays(h, n_pol, delays, fc) : h;
            };
            return normalized(std::move(src));
        }
        case ModelKind::Loo:
        {
            const auto lp = cfg.loo;
            lp.validate();
            src.mean_entry_power = loo_mean_entry_power(lp);
            src.draw = [lp, dims, delays, fc, n_sat, n_pol](RngStream &rng)
            {
                std::vector<ChannelMatrix> blocks;
                blocks.reserve(n_sat);
                for (std::size_t n = 0; n < n_sat; ++n)
                    blocks.push_back(loo_channel_matrix(rng, lp, dims.num_rx, n_pol));
                return ms_mra_channel(blocks, delays, fc);
            };
            return normalized(std::move(src));
        }
        case ModelKind::Rayleigh:
        {
            src.mean_entry_power = 1.0;
            src.draw = [dims](RngStream &rng) { return rayleigh_channel_matrix(rng, dims.num_rx, dims.num_tx()); };
            return src;
        }
        case ModelKind::FreeSpace:
        {
            const auto per_sat = scenario_slant_ranges(cfg, dims);
            std::vector<std::vector<double>> ranges(dims.num_rx, std::vector<double>(dims.num_tx()));
            for (std::size_t m = 0; m < dims.num_rx; ++m)
                for (std::size_t n = 0; n < n_sat; ++n)
                    for (std::size_t j = 0; j < n_pol; ++j)
                        ranges[m][n * n_pol + j] = per_sat[m][n];
            const auto h = freespace_channel_matrix(ranges, cfg.freespace);
            src.mean_entry_power = h.entries.cwiseAbs2().mean();
            src.deterministic = true;
            src.draw = [h](RngStream &) { return h; };
            return cfg.normalize_freespace ? normalized(std::move(src)) : src;
        }
        }
        throw InvalidParams("Unknown channel model.");
    }

    ChannelSource make_channel_source(const ScenarioConfig &cfg)
    {
        return make_channel_source(cfg, cfg.model, cfg.dims());
    }
}
