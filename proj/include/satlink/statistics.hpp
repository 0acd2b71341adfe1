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

#ifndef SATLINK_STATISTICS_HPP
#define SATLINK_STATISTICS_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace satlink
{
    // Seeded random stream. The engine is std::mt19937_64, whose output sequence is fixed by the
    // standard; all distribution transforms are implemented here, so (seed, stream_id) reproduces
    // bitwise-identical samples on every conforming platform.
    class RngStream
    {
    public:
        RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0);

        std::uint64_t seed() const noexcept { return seed_; }
        std::uint64_t stream_id() const noexcept { return stream_id_; }

        std::uint64_t next_u64() { return engine_(); }

        double uniform();                 // [0, 1)
        double uniform(double a, double b); // [a, b)
        double normal();                  // N(0, 1)
        double laplace(double scale);     // zero-mean Laplacian with the given scale b (std = b*sqrt(2))
        std::complex<double> complex_normal(double variance); // CN(0, variance)

    private:
        std::uint64_t seed_;
        std::uint64_t stream_id_;
        std::mt19937_64 engine_;
        double cached_normal_ = 0.0;
        bool has_cached_ = false;
    };

    struct LooParams
    {
        double lognormal_mean = -0.115; // mu of ln(envelope)
        double lognormal_var = 0.161;   // sigma_r^2 of ln(envelope)
        double scatter_power = 0.158;   // c_o, per-component variance of the diffuse part

        void validate() const;
    };

    struct EmpiricalCcdf
    {
        std::vector<double> thresholds;  // ascending
        std::vector<double> exceed_prob; // P(X > threshold)
    };

    std::vector<std::complex<double>> sample_complex_gaussian(RngStream &rng, double variance, std::size_t count);

    // |CN(0, 2 c_o)|, i.e. Rayleigh with scale sqrt(c_o)
    std::vector<double> sample_rayleigh_envelope(RngStream &rng, double scatter_power, std::size_t count);

    std::vector<double> sample_lognormal_envelope(RngStream &rng, double mu, double sigma2, std::size_t count);

    // Envelope of a lognormal-shadowed LOS phasor plus a Rayleigh diffuse component
    std::vector<double> sample_loo_envelope(RngStream &rng, const LooParams &params, std::size_t count);

    // Piecewise envelope density: the Rayleigh form for r <= sqrt(c_o) and the lognormal form above.
    // Throws DomainError for r < 0.
    double loo_pdf(double r, const LooParams &params);

    // The two regimes of loo_pdf, each a proper density on [0, inf)
    double loo_rayleigh_branch(double r, double scatter_power);
    double loo_lognormal_branch(double r, double mu, double sigma2);

    // exceed_prob[i] = fraction of samples strictly greater than thresholds[i]; num_points thresholds
    // evenly spanning [min, max]. Throws EmptyInput.
    EmpiricalCcdf empirical_ccdf(std::span<const double> samples, std::size_t num_points);

    // Exceedance at caller-chosen thresholds (must be ascending)
    EmpiricalCcdf empirical_ccdf_at(std::span<const double> samples, std::span<const double> thresholds);

    // Kolmogorov-Smirnov distance between the sample EDF and an analytic CDF. Throws EmptyInput.
    double ks_statistic(std::span<const double> samples, const std::function<double(double)> &cdf);

    // Standard normal upper tail, Q(z) = erfc(z / sqrt 2) / 2
    double q_function(double z);
}

#endif
