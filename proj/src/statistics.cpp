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

#include "satlink/statistics.hpp"
#include "satlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace
{
    std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    void require_nonempty(std::span<const double> samples)
    {
        if (samples.empty())
            throw satlink::EmptyInput("Sample set is empty.");
    }
}

namespace satlink
{
    RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id)
    {
        // Substreams: seed the engine with a 4-word mix of (seed, stream_id)
        std::uint64_t s = splitmix64(seed) ^ splitmix64(stream_id * 0xD1B54A32D192ED03ULL + 1);
        std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                          static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
        engine_.seed(seq);
    }

    double RngStream::uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double RngStream::uniform(double a, double b)
    {
        return a + (b - a) * uniform();
    }

    double RngStream::normal()
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return cached_normal_;
        }
        // Box-Muller; 1 - u keeps the log argument in (0, 1]
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_normal_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    double RngStream::laplace(double scale)
    {
        const double u = uniform() - 0.5;
        const double mag = -scale * std::log1p(-2.0 * std::abs(u));
        return u < 0.0 ? -mag : mag;
    }

    std::complex<double> RngStream::complex_normal(double variance)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    void LooParams::validate() const
    {
        if (!std::isfinite(lognormal_mean))
            throw InvalidParams("Loo lognormal mean must be finite.");
        if (!(lognormal_var > 0.0) || !std::isfinite(lognormal_var))
            throw InvalidParams("Loo lognormal variance must be positive.");
        if (!(scatter_power > 0.0) || !std::isfinite(scatter_power))
            throw InvalidParams("Loo scatter power c_o must be positive.");
    }

    std::vector<std::complex<double>> sample_complex_gaussian(RngStream &rng, double variance, std::size_t count)
    {
        if (!(variance > 0.0))
            throw InvalidParams("Variance must be positive.");
        std::vector<std::complex<double>> out(count);
        for (auto &v : out)
            v = rng.complex_normal(variance);
        return out;
    }

    std::vector<double> sample_rayleigh_envelope(RngStream &rng, double scatter_power, std::size_t count)
    {
        if (!(scatter_power > 0.0))
            throw InvalidParams("Scatter power must be positive.");
        std::vector<double> out(count);
        for (auto &v : out)
            v = std::abs(rng.complex_normal(2.0 * scatter_power));
        return out;
    }

    std::vector<double> sample_lognormal_envelope(RngStream &rng, double mu, double sigma2, std::size_t count)
    {
        if (!(sigma2 > 0.0))
            throw InvalidParams("Lognormal variance must be positive.");
        const double s = std::sqrt(sigma2);
        std::vector<double> out(count);
        for (auto &v : out)
            v = std::exp(mu + s * rng.normal());
        return out;
    }

    std::vector<double> sample_loo_envelope(RngStream &rng, const LooParams &params, std::size_t count)
    {
        params.validate();
        const double s = std::sqrt(params.lognormal_var);
        std::vector<double> out(count);
        for (auto &v : out)
        {
            const double a = std::exp(params.lognormal_mean + s * rng.normal());
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            v = std::abs(std::polar(a, phase) + rng.complex_normal(2.0 * params.scatter_power));
        }
        return out;
    }

    double loo_rayleigh_branch(double r, double scatter_power)
    {
        return r / scatter_power * std::exp(-r * r / (2.0 * scatter_power));
    }

    double loo_lognormal_branch(double r, double mu, double sigma2)
    {
        if (r <= 0.0)
            return 0.0;
        const double d = std::log(r) - mu;
        return std::exp(-d * d / (2.0 * sigma2)) / (r * std::sqrt(2.0 * std::numbers::pi * sigma2));
    }

    double loo_pdf(double r, const LooParams &params)
    {
        if (r < 0.0 || std::isnan(r))
            throw DomainError("Envelope value must be non-negative.");
        params.validate();
        if (r <= std::sqrt(params.scatter_power))
            return loo_rayleigh_branch(r, params.scatter_power);
        return loo_lognormal_branch(r, params.lognormal_mean, params.lognormal_var);
    }

    EmpiricalCcdf empirical_ccdf_at(std::span<const double> samples, std::span<const double> thresholds)
    {
        require_nonempty(samples);
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const double n = static_cast<double>(sorted.size());

        EmpiricalCcdf out;
        out.thresholds.assign(thresholds.begin(), thresholds.end());
        out.exceed_prob.reserve(thresholds.size());
        for (double t : thresholds)
        {
            const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
            out.exceed_prob.push_back(static_cast<double>(above) / n);
        }
        return out;
    }

    EmpiricalCcdf empirical_ccdf(std::span<const double> samples, std::size_t num_points)
    {
        require_nonempty(samples);
        if (num_points == 0)
            throw InvalidParams("CCDF needs at least one threshold.");
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());

        std::vector<double> thresholds(num_points);
        if (num_points == 1)
            thresholds[0] = *lo;
        else
        {
            const double step = (*hi - *lo) / static_cast<double>(num_points - 1);
            for (std::size_t i = 0; i < num_points; ++i)
                thresholds[i] = *lo + step * static_cast<double>(i);
            thresholds.back() = *hi;
        }
        return empirical_ccdf_at(samples, thresholds);
    }

    double ks_statistic(std::span<const double> samples, const std::function<double(double)> &cdf)
    {
        require_nonempty(samples);
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const double n = static_cast<double>(sorted.size());

        double d = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            const double f = std::clamp(cdf(sorted[i]), 0.0, 1.0);
            d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
        }
        return std::min(d, 1.0);
    }

    double q_function(double z)
    {
        return 0.5 * std::erfc(z / std::numbers::sqrt2);
    }
}
