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

#include "satlink/capacity.hpp"
#include "satlink/errors.hpp"
#include "satlink/geometry.hpp"
#include "satlink/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace
{
    constexpr std::size_t realizations_per_block = 256;
}

namespace satlink
{
    double log2_det_identity_plus_gram(const Eigen::MatrixXcd &h, double rho, GramSide side)
    {
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw DomainError("Linear SNR must be positive and finite.");
        if (!h.allFinite())
            throw NumericalError("Channel matrix has non-finite entries.");

        Eigen::MatrixXcd a = side == GramSide::Receive ? Eigen::MatrixXcd(h * h.adjoint())
                                                       : Eigen::MatrixXcd(h.adjoint() * h);
        a *= rho;
        a.diagonal().array() += 1.0;
        // Remove rounding asymmetry before factorizing
        a = (0.5 * (a + a.adjoint())).eval();

        Eigen::LLT<Eigen::MatrixXcd> llt(a);
        if (llt.info() != Eigen::Success)
            throw NumericalError("I + rho*Gram is not positive definite.");

        double log_det = 0.0;
        const auto &l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < l.rows(); ++i)
            log_det += std::log(l(i, i).real());
        return 2.0 * log_det / std::numbers::ln2;
    }

    double instantaneous_capacity(const ChannelMatrix &h, double rho, bool normalize_by_tx)
    {
        if (h.num_rx() == 0 || h.num_tx() == 0)
            throw DimensionMismatch("Channel matrix is empty.");
        const double eff = normalize_by_tx ? rho / static_cast<double>(h.num_tx()) : rho;
        const auto side = h.num_rx() <= h.num_tx() ? GramSide::Receive : GramSide::Transmit;
        return std::max(0.0, log2_det_identity_plus_gram(h.entries, eff, side));
    }

    std::vector<std::vector<double>> capacity_samples(const ChannelSource &model, std::span<const double> snr_db,
                                                      std::size_t num_realizations, const RngStream &rng,
                                                      const CapacityOptions &opts)
    {
        if (num_realizations == 0)
            throw InvalidParams("At least one realization is required.");
        if (!model.draw)
            throw InvalidParams("Channel model has no generator.");

        std::vector<double> rho(snr_db.size());
        std::transform(snr_db.begin(), snr_db.end(), rho.begin(), snr_db_to_linear);

        std::vector<std::vector<double>> out(snr_db.size(), std::vector<double>(num_realizations));
        const std::size_t num_blocks = (num_realizations + realizations_per_block - 1) / realizations_per_block;

        parallel_blocks(num_blocks, opts.workers, [&](std::size_t b)
        {
            auto stream = block_stream(rng, b);
            const std::size_t first = b * realizations_per_block;
            const std::size_t last = std::min(first + realizations_per_block, num_realizations);
            for (std::size_t i = first; i < last; ++i)
            {
                const auto h = model.draw(stream);
                for (std::size_t s = 0; s < rho.size(); ++s)
                    out[s][i] = instantaneous_capacity(h, rho[s], opts.normalize_by_tx);
            }
        });
        return out;
    }

    CapacityPoint summarize_capacity(double snr_db, std::span<const double> samples)
    {
        if (samples.empty())
            throw EmptyInput("No capacity samples.");
        CapacityPoint p;
        p.snr_db = snr_db;
        p.num_realizations = samples.size();

        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        if (*lo == *hi)
        {
            p.mean_capacity = *lo;
            p.std_capacity = 0.0;
            return p;
        }

        double sum = 0.0;
        for (double v : samples)
            sum += v;
        const double n = static_cast<double>(samples.size());
        p.mean_capacity = sum / n;
        double ss = 0.0;
        for (double v : samples)
            ss += (v - p.mean_capacity) * (v - p.mean_capacity);
        p.std_capacity = std::sqrt(ss / (n - 1.0));
        return p;
    }

    CapacityCurve ergodic_capacity(const ChannelSource &model, std::span<const double> snr_db,
                                   std::size_t num_realizations, const RngStream &rng, const CapacityOptions &opts)
    {
        if (snr_db.empty())
            throw InvalidParams("SNR list is empty.");
        for (std::size_t i = 1; i < snr_db.size(); ++i)
            if (!(snr_db[i] > snr_db[i - 1]))
                throw InvalidParams("SNR values must be strictly ascending.");

        const auto samples = capacity_samples(model, snr_db, num_realizations, rng, opts);
        CapacityCurve curve;
        for (std::size_t s = 0; s < snr_db.size(); ++s)
            curve.points.push_back(summarize_capacity(snr_db[s], samples[s]));
        return curve;
    }

    EmpiricalCcdf capacity_ccdf(const ChannelSource &model, double snr_db, std::size_t num_realizations,
                                const RngStream &rng, std::size_t num_points, const CapacityOptions &opts)
    {
        if (num_realizations < 100)
            throw InvalidParams("A capacity CCDF needs at least 100 realizations.");
        const double snr[] = {snr_db};
        const auto samples = capacity_samples(model, snr, num_realizations, rng, opts);
        return empirical_ccdf(samples.front(), num_points);
    }
}
