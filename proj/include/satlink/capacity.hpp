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

#ifndef SATLINK_CAPACITY_HPP
#define SATLINK_CAPACITY_HPP

#include "satlink/channel.hpp"
#include "satlink/statistics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace satlink
{
    struct CapacitySample
    {
        double snr_db = 0.0;
        double capacity_bps_hz = 0.0;
    };

    struct CapacityPoint
    {
        double snr_db = 0.0;
        double mean_capacity = 0.0;
        double std_capacity = 0.0; // sample standard deviation, 0 for a single realization
        std::size_t num_realizations = 0;
    };

    struct CapacityCurve
    {
        std::vector<CapacityPoint> points;
    };

    enum class GramSide
    {
        Receive,  // I_M + rho H H^H
        Transmit, // I_T + rho H^H H
    };

    // log2 det(I + rho * Gram) from a Cholesky factorization of the Hermitian-symmetrized matrix.
    // Throws NumericalError if the factorization fails.
    double log2_det_identity_plus_gram(const Eigen::MatrixXcd &h, double rho, GramSide side);

    // log2 det(I_M + rho' H H^H) with rho' = rho, or rho / T when normalize_by_tx is set.
    // The smaller of the two Gram matrices is factorized.
    double instantaneous_capacity(const ChannelMatrix &h, double rho, bool normalize_by_tx = false);

    struct CapacityOptions
    {
        bool normalize_by_tx = false;
        std::size_t workers = 1;
    };

    // Capacity of num_realizations channel draws at every SNR. The same draws are reused across SNR
    // points. Result is indexed [snr][realization].
    std::vector<std::vector<double>> capacity_samples(const ChannelSource &model, std::span<const double> snr_db,
                                                      std::size_t num_realizations, const RngStream &rng,
                                                      const CapacityOptions &opts = {});

    CapacityPoint summarize_capacity(double snr_db, std::span<const double> samples);

    // Mean and standard deviation per SNR; throws InvalidParams for an unsorted SNR list or zero realizations
    CapacityCurve ergodic_capacity(const ChannelSource &model, std::span<const double> snr_db,
                                   std::size_t num_realizations, const RngStream &rng, const CapacityOptions &opts = {});

    // Empirical CCDF of the capacity at one SNR; needs at least 100 realizations
    EmpiricalCcdf capacity_ccdf(const ChannelSource &model, double snr_db, std::size_t num_realizations,
                                const RngStream &rng, std::size_t num_points = 100, const CapacityOptions &opts = {});
}

#endif
