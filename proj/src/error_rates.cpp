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

#include "satlink/error_rates.hpp"
#include "satlink/errors.hpp"
#include "satlink/geometry.hpp"
#include "satlink/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>

namespace
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr std::size_t epochs_per_block = 1024;
    constexpr double singular_rcond = 1e-12;

    // sin^2((2k-1) pi / M)
    double angle_factor(std::size_t k, std::size_t m)
    {
        const double s = std::sin(static_cast<double>(2 * k - 1) * std::numbers::pi / static_cast<double>(m));
        return s * s;
    }

    double gamma_factor(std::size_t m)
    {
        return 2.0 / std::max(std::log2(static_cast<double>(m)), 2.0);
    }
}

namespace satlink
{
    ModulationScheme::ModulationScheme(std::size_t constellation_size)
        : m_(constellation_size), bits_(0), offset_(0.0)
    {
        if (m_ < 2 || !std::has_single_bit(m_) || m_ > (std::size_t{1} << 16))
            throw InvalidParams("Constellation size must be a power of two between 2 and 65536.");
        bits_ = static_cast<std::size_t>(std::countr_zero(m_));
        offset_ = m_ == 2 ? 0.0 : std::numbers::pi / static_cast<double>(m_);

        labels_.resize(m_);
        by_label_.resize(m_);
        for (std::size_t k = 0; k < m_; ++k)
        {
            labels_[k] = static_cast<std::uint32_t>(k ^ (k >> 1));
            by_label_[labels_[k]] = std::polar(1.0, two_pi * static_cast<double>(k) / static_cast<double>(m_) + offset_);
        }
    }

    ModulationScheme ModulationScheme::from_name(const std::string &name)
    {
        std::string n;
        for (char c : name)
            n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (n == "bpsk")
            return ModulationScheme(2);
        if (n == "qpsk")
            return ModulationScheme(4);
        if (n.size() > 3 && n.ends_with("psk"))
        {
            const auto digits = n.substr(0, n.size() - 3);
            if (std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
                digits.size() <= 5)
                return ModulationScheme(std::stoul(digits));
        }
        throw InvalidParams("Unknown modulation '" + name + "'.");
    }

    std::string ModulationScheme::name() const
    {
        if (m_ == 2)
            return "bpsk";
        if (m_ == 4)
            return "qpsk";
        return std::to_string(m_) + "psk";
    }

    std::uint32_t ModulationScheme::label(std::size_t index) const
    {
        return labels_.at(index);
    }

    std::complex<double> ModulationScheme::point(std::size_t index) const
    {
        return by_label_[labels_.at(index)];
    }

    std::complex<double> ModulationScheme::modulate(std::uint32_t label) const
    {
        return by_label_.at(label);
    }

    std::uint32_t ModulationScheme::demodulate(std::complex<double> y) const
    {
        if (m_ == 2)
            return y.real() >= 0.0 ? 0u : 1u;
        const double a = (std::arg(y) - offset_) * static_cast<double>(m_) / two_pi;
        auto idx = static_cast<long long>(std::llround(a)) % static_cast<long long>(m_);
        if (idx < 0)
            idx += static_cast<long long>(m_);
        return labels_[static_cast<std::size_t>(idx)];
    }

    DiversityOrder DiversityOrder::from_dims(std::size_t num_rx, std::size_t num_tx)
    {
        if (num_rx == 0 || num_tx == 0)
            throw InvalidParams("Antenna counts must be positive.");
        if (num_rx < num_tx)
            throw InvalidParams("Zero forcing needs at least as many receive antennas as transmit streams.");
        return {num_rx - num_tx + 1};
    }

    std::size_t mpsk_num_terms(std::size_t constellation_size)
    {
        return std::min<std::size_t>(2, (constellation_size + 3) / 4);
    }

    double mpsk_awgn_error_prob(double snr_per_symbol, double chi2_value, const ModulationScheme &scheme)
    {
        if (!(snr_per_symbol >= 0.0) || !(chi2_value >= 0.0))
            throw DomainError("SNR and fading variable must be non-negative.");
        const std::size_t m = scheme.size();
        const double arg = std::sqrt(2.0 * snr_per_symbol * chi2_value);
        double sum = 0.0;
        for (std::size_t k = 1; k <= mpsk_num_terms(m); ++k)
            sum += q_function(arg * std::sqrt(angle_factor(k, m)));
        return gamma_factor(m) * sum;
    }

    double mu_k(std::size_t k, double snr_per_symbol, std::size_t constellation_size)
    {
        if (k < 1 || k > mpsk_num_terms(constellation_size))
            throw IndexError("mu_k index " + std::to_string(k) + " out of range.");
        if (!(snr_per_symbol >= 0.0))
            throw DomainError("SNR per symbol cannot be negative.");
        if (std::isinf(snr_per_symbol))
            return 1.0;
        const double a = angle_factor(k, constellation_size) * snr_per_symbol;
        return std::sqrt(a / (1.0 + a));
    }

    double zf_mpsk_ber_closed_form(double snr_per_symbol, const ModulationScheme &scheme, DiversityOrder diversity)
    {
        if (!(snr_per_symbol >= 0.0))
            throw DomainError("SNR per symbol cannot be negative.");
        if (diversity.u < 1)
            throw InvalidParams("Diversity order must be at least 1.");

        const std::size_t m = scheme.size();
        const auto u = static_cast<int>(diversity.u);
        double total = 0.0;
        for (std::size_t k = 1; k <= mpsk_num_terms(m); ++k)
        {
            const double a = angle_factor(k, m) * snr_per_symbol;
            const double mu = mu_k(k, snr_per_symbol, m);
            // 1 - mu without cancellation: 1 / ((1 + a)(1 + mu))
            const double lower = 0.5 / ((1.0 + a) * (1.0 + mu));
            const double upper = 0.5 * (1.0 + mu);

            double inner = 0.0, binom = 1.0, upper_pow = 1.0;
            for (int l = 0; l < u; ++l)
            {
                inner += binom * upper_pow;
                binom = binom * static_cast<double>(u + l) / static_cast<double>(l + 1); // C(U+l, l+1)
                upper_pow *= upper;
            }
            total += std::pow(lower, u) * inner;
        }
        return gamma_factor(m) * total;
    }

    std::string to_string(BerMethod m)
    {
        return m == BerMethod::ClosedForm ? "closed_form" : "monte_carlo";
    }

    BerCurve closed_form_ber_curve(std::span<const double> snr_db, const ModulationScheme &scheme,
                                   DiversityOrder diversity)
    {
        BerCurve curve;
        curve.method = BerMethod::ClosedForm;
        for (double s : snr_db)
            curve.points.push_back({s, zf_mpsk_ber_closed_form(snr_db_to_linear(s), scheme, diversity), 0, 0});
        return curve;
    }

    BerCurve mc_link_ber(const ChannelSource &model, const ModulationScheme &scheme, std::span<const double> snr_db,
                         std::uint64_t num_bits, const RngStream &rng, const LinkOptions &opts)
    {
        if (num_bits < 10000)
            throw InsufficientBits("Monte Carlo BER needs at least 1e4 bits.");
        if (!model.draw)
            throw InvalidParams("Channel model has no generator.");
        const std::size_t n_rx = model.dims.num_rx, n_tx = model.dims.num_tx();
        DiversityOrder::from_dims(n_rx, n_tx);

        const std::size_t bps = scheme.bits_per_symbol();
        const std::uint64_t bits_per_epoch = n_tx * bps;
        const std::uint64_t num_epochs = (num_bits + bits_per_epoch - 1) / bits_per_epoch;
        const std::size_t num_blocks = static_cast<std::size_t>((num_epochs + epochs_per_block - 1) / epochs_per_block);

        std::vector<double> noise_scale(snr_db.size());
        for (std::size_t s = 0; s < snr_db.size(); ++s)
            noise_scale[s] = 1.0 / std::sqrt(snr_db_to_linear(snr_db[s]));

        std::vector<std::vector<std::uint64_t>> errors(num_blocks, std::vector<std::uint64_t>(snr_db.size(), 0));
        std::vector<std::uint64_t> redraws(num_blocks, 0);

        parallel_blocks(num_blocks, opts.workers, [&](std::size_t b)
        {
            auto stream = block_stream(rng, b);
            const std::uint64_t first = static_cast<std::uint64_t>(b) * epochs_per_block;
            const std::uint64_t last = std::min<std::uint64_t>(first + epochs_per_block, num_epochs);

            std::vector<std::uint32_t> labels(n_tx);
            Eigen::VectorXcd x(static_cast<Eigen::Index>(n_tx)), n0(static_cast<Eigen::Index>(n_rx));
            Eigen::LLT<Eigen::MatrixXcd> llt;
            Eigen::MatrixXcd h;

            for (std::uint64_t e = first; e < last; ++e)
            {
                for (std::size_t consecutive = 0;; ++consecutive)
                {
                    h = model.draw(stream).entries;
                    if (static_cast<std::size_t>(h.rows()) != n_rx || static_cast<std::size_t>(h.cols()) != n_tx)
                        throw DimensionMismatch("Generated channel does not match the declared dimensions.");
                    llt.compute(h.adjoint() * h);
                    if (llt.info() == Eigen::Success && llt.rcond() > singular_rcond)
                        break;
                    ++redraws[b];
                    if (model.deterministic || consecutive + 1 >= opts.max_redraws)
                        throw SingularChannel("Channel realization is singular; zero forcing is undefined.");
                }

                for (std::size_t t = 0; t < n_tx; ++t)
                {
                    labels[t] = static_cast<std::uint32_t>(stream.next_u64() >> (64 - bps));
                    x(static_cast<Eigen::Index>(t)) = scheme.modulate(labels[t]);
                }
                for (Eigen::Index i = 0; i < n0.size(); ++i)
                    n0(i) = stream.complex_normal(1.0);

                // ZF output is x + (H^H H)^{-1} H^H n, with n = n0 / sqrt(rho)
                const Eigen::VectorXcd z = llt.solve(h.adjoint() * n0);
                for (std::size_t s = 0; s < noise_scale.size(); ++s)
                {
                    std::uint64_t err = 0;
                    for (std::size_t t = 0; t < n_tx; ++t)
                    {
                        const auto ti = static_cast<Eigen::Index>(t);
                        const auto detected = scheme.demodulate(x(ti) + z(ti) * noise_scale[s]);
                        err += static_cast<std::uint64_t>(std::popcount(detected ^ labels[t]));
                    }
                    errors[b][s] += err;
                }
            }
        });

        BerCurve curve;
        curve.method = BerMethod::MonteCarlo;
        const std::uint64_t total_bits = num_epochs * bits_per_epoch;
        for (std::size_t s = 0; s < snr_db.size(); ++s)
        {
            std::uint64_t e = 0;
            for (std::size_t b = 0; b < num_blocks; ++b)
                e += errors[b][s];
            curve.points.push_back({snr_db[s], static_cast<double>(e) / static_cast<double>(total_bits), total_bits, e});
        }
        for (auto r : redraws)
            curve.singular_redraws += r;
        return curve;
    }

    BerPoint mc_link_ber(const ChannelSource &model, const ModulationScheme &scheme, double snr_db,
                         std::uint64_t num_bits, const RngStream &rng, const LinkOptions &opts)
    {
        const double snr[] = {snr_db};
        return mc_link_ber(model, scheme, snr, num_bits, rng, opts).points.front();
    }
}
