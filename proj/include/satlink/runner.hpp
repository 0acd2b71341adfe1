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

#ifndef SATLINK_RUNNER_HPP
#define SATLINK_RUNNER_HPP

#include "satlink/error_rates.hpp"
#include "satlink/scenario.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace satlink
{
    inline constexpr const char *tool_version = "1.0.0";

    using TableCell = std::variant<double, std::int64_t, std::string>;

    // Column headers, rows of cells and an ordered key/value metadata block
    struct ResultTable
    {
        std::vector<std::string> columns;
        std::vector<std::vector<TableCell>> rows;
        std::vector<std::pair<std::string, std::string>> metadata;

        ResultTable() = default;
        explicit ResultTable(std::vector<std::string> headers) : columns(std::move(headers)) {}

        // Throws DimensionMismatch unless the row has one cell per column
        void add_row(std::vector<TableCell> row);

        std::size_t column_index(const std::string &name) const; // throws IndexError
        double number(std::size_t row, const std::string &column) const;
        std::string text(std::size_t row, const std::string &column) const;

        void set_meta(const std::string &key, const std::string &value);
        std::string meta(const std::string &key) const; // empty if absent

        bool operator==(const ResultTable &) const = default;
    };

    struct RunOptions
    {
        std::size_t workers = 1;
    };

    // One row per (array, SNR): snr_db, N, M, T, mean_capacity, std_capacity, n_realizations
    ResultTable run_capacity_sweep(const ScenarioConfig &cfg, std::span<const double> snr_db, const RunOptions &opts = {});

    // Rows: snr_db, capacity_threshold, exceedance_probability, on a threshold grid shared by all SNRs
    ResultTable run_ccdf(const ScenarioConfig &cfg, std::span<const double> snr_db, const RunOptions &opts = {});

    // Rows: snr_db, model, method, ber, num_bits, num_errors. Closed-form rows refer to i.i.d.
    // Rayleigh fading and are labelled with that model.
    ResultTable run_ber_sweep(const ScenarioConfig &cfg, std::span<const double> snr_db,
                              const std::set<BerMethod> &methods, const RunOptions &opts = {});

    // Receive antenna / satellite positions and their slant ranges
    ResultTable run_geometry(const ScenarioConfig &cfg);

    // Link-budget terms and resulting SNR; throws ValidationError without a link budget
    ResultTable run_link_budget(const ScenarioConfig &cfg);

    // CSV text: '#' metadata lines, header, rows. Strings are always quoted, integers are bare digits,
    // floating-point cells carry 17 significant digits and always a '.', 'e', "inf" or "nan".
    std::string format_csv(const ResultTable &table);
    ResultTable parse_csv(const std::string &text); // throws ParseError

    void emit_csv(const ResultTable &table, const std::string &path); // throws IoError
    ResultTable read_csv(const std::string &path);

    std::string format_double(double v);
}

#endif
