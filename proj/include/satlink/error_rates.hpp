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

#ifndef SATLINK_ERROR_RATES_HPP
#define SATLINK_ERROR_RATES_HPP

#include "satlink/channel.hpp"
#include "satlink/statistics.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace satlink
{
    // Gray-coded M-PSK on the unit circle. Symbol index k sits at angle 2 pi k / M + offset and
    // carries the label k ^ (k >> 1). The offset is 0 for BPSK and pi / M otherwise, which makes
    // gray QPSK two independent BPSK rails.
    class ModulationScheme
    {
    public:
        // Throws InvalidParams unless M is a power of two >= 2
        explicit ModulationScheme(std::size_t constellation_size = 2);

        static ModulationScheme from_name(const std::string &name); // "bpsk", "qpsk", "8psk", "16psk", ...
        std::string name() const;

        std::size_t size() const noexcept { return m_; }
        std::size_t bits_per_symbol() const noexcept { return bits_; }
        double phase_offset() const noexcept { return offset_; }

        std::uint32_t label(std::size_t index) const; // gray label of constellation point `index`
        std::complex<double> point(std::size_t index) const;
        std::complex<double> modulate(std::uint32_t label) const;
        std::uint32_t demodulate(std::complex<double> y) const; // nearest point, returns its label

    private:
        std::size_t m_;
        std::size_t bits_;
        double offset_;
        std::vector<std::complex<double>> by_label_;
        std::vector<std::uint32_t> labels_;
    };

    // U = num_rx - num_tx + 1, the diversity order of each stream after zero forcing
    struct DiversityOrder
    {
        std::size_t u = 1;

        // Throws InvalidParams when num_rx < num_tx or either is zero
        static DiversityOrder from_dims(std::size_t num_rx, std::size_t num_tx);
    };

    // Number of terms in the error-probability sums: min(2, ceil(M / 4))
    std::size_t mpsk_num_terms(std::size_t constellation_size);

    // Error probability of M-PSK in AWGN for SNR per symbol sigma scaled by the fading variable x
    double mpsk_awgn_error_prob(double snr_per_symbol, double chi2_value, const ModulationScheme &scheme);

    // mu_k for k in [1, min(2, ceil(M/4))]; throws IndexError otherwise
    double mu_k(std::size_t k, double snr_per_symbol, std::size_t constellation_size);

    // Closed-form average of mpsk_awgn_error_prob over a Gamma(U, 1) fading variable (zero forcing in
    // i.i.d. Rayleigh fading). The inner binomial sum runs over l = 0 .. U-1.
    double zf_mpsk_ber_closed_form(double snr_per_symbol, const ModulationScheme &scheme, DiversityOrder diversity);

    enum class BerMethod
    {
        ClosedForm,
        MonteCarlo,
    };

    std::string to_string(BerMethod m);

    struct BerPoint
    {
        double snr_db = 0.0;
        double ber = 0.0;
        std::uint64_t num_bits = 0;
        std::uint64_t num_errors = 0; // 0 for closed-form points
    };

    struct BerCurve
    {
        std::vector<BerPoint> points;
        BerMethod method = BerMethod::ClosedForm;
        std::uint64_t singular_redraws = 0; // Monte Carlo only
    };

    struct LinkOptions
    {
        std::size_t workers = 1;
        std::size_t max_redraws = 1000; // consecutive singular draws before giving up
    };

    // Baseband link: gray M-PSK on every transmit port, y = H x + n with CN(0, 1/rho) noise on each
    // receive antenna, zero-forcing equalization, per-stream hard demapping. Channel draws, bits and
    // noise are shared across the SNR points. Throws InsufficientBits below 1e4 bits,
    // InvalidParams when num_rx < num_tx, and SingularChannel when redraws are exhausted.
    BerCurve mc_link_ber(const ChannelSource &model, const ModulationScheme &scheme, std::span<const double> snr_db,
                         std::uint64_t num_bits, const RngStream &rng, const LinkOptions &opts = {});

    BerPoint mc_link_ber(const ChannelSource &model, const ModulationScheme &scheme, double snr_db,
                         std::uint64_t num_bits, const RngStream &rng, const LinkOptions &opts = {});

    BerCurve closed_form_ber_curve(std::span<const double> snr_db, const ModulationScheme &scheme,
                                   DiversityOrder diversity);
}

#endif
