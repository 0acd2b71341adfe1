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

#include "satlink/runner.hpp"
#include "satlink/capacity.hpp"
#include "satlink/errors.hpp"
#include "satlink/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace satlink
{
    std::size_t default_worker_count()
    {
        const auto n = std::thread::hardware_concurrency();
        return n == 0 ? 1 : static_cast<std::size_t>(n);
    }
}

namespace
{
    using namespace satlink;

    // Stream ids of the experiment families under the scenario seed
    constexpr std::uint64_t capacity_stream_base = 0x100;
    constexpr std::uint64_t ccdf_stream = 0x200;
    constexpr std::uint64_t ber_stream_base = 0x300;

    void add_common_metadata(ResultTable &t, const ScenarioConfig &cfg, const std::string &command)
    {
        t.set_meta("tool", "satlink");
        t.set_meta("tool_version", tool_version);
        t.set_meta("command", command);
        t.set_meta("config_hash", cfg.config_hash);
        t.set_meta("seed", std::to_string(cfg.seed));
    }

    std::string escape_meta(const std::string &s)
    {
        std::string out;
        for (char c : s)
        {
            if (c == '\\')
                out += "\\\\";
            else if (c == '\n')
                out += "\\n";
            else if (c == '\r')
                out += "\\r";
            else
                out += c;
        }
        return out;
    }

    std::string unescape_meta(const std::string &s)
    {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            if (s[i] == '\\' && i + 1 < s.size())
            {
                const char n = s[++i];
                out += n == 'n' ? '\n' : n == 'r' ? '\r' : n;
            }
            else
                out += s[i];
        }
        return out;
    }

    std::string quote(const std::string &s)
    {
        std::string out = "\"";
        for (char c : s)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        return out + "\"";
    }

    bool needs_quotes(const std::string &s)
    {
        return s.empty() || s.find_first_of(",\"\r\n") != std::string::npos;
    }

    struct RawField
    {
        std::string text;
        bool quoted = false;
    };

    // RFC-4180 record splitter; quoted fields may span lines
    std::vector<std::vector<RawField>> split_records(const std::string &text, std::size_t first_line)
    {
        std::vector<std::vector<RawField>> records;
        std::vector<RawField> record;
        RawField field;
        bool in_quotes = false, field_started = false;
        std::size_t line = first_line, col = 1;

        auto end_field = [&]
        {
            record.push_back(std::move(field));
            field = {};
            field_started = false;
        };
        auto end_record = [&]
        {
            end_field();
            records.push_back(std::move(record));
            record.clear();
        };

        for (std::size_t i = 0; i < text.size(); ++i, ++col)
        {
            const char c = text[i];
            if (in_quotes)
            {
                if (c == '"')
                {
                    if (i + 1 < text.size() && text[i + 1] == '"')
                    {
                        field.text += '"';
                        ++i;
                        ++col;
                    }
                    else
                        in_quotes = false;
                }
                else
                {
                    field.text += c;
                    if (c == '\n')
                        ++line, col = 0;
                }
                continue;
            }
            if (c == '"')
            {
                if (field_started)
                    throw ParseError(line, col, "quote inside an unquoted field");
                in_quotes = true;
                field.quoted = true;
                field_started = true;
            }
            else if (c == ',')
                end_field();
            else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                continue;
            else if (c == '\n')
            {
                end_record();
                ++line;
                col = 0;
            }
            else
            {
                if (field.quoted)
                    throw ParseError(line, col, "text after a closing quote");
                field.text += c;
                field_started = true;
            }
        }
        if (in_quotes)
            throw ParseError(line, col, "unterminated quoted field");
        if (field_started || !record.empty())
            end_record();
        return records;
    }

    TableCell parse_cell(const RawField &f, std::size_t line)
    {
        if (f.quoted)
            return f.text;
        const auto &s = f.text;
        if (s.empty())
            throw ParseError(line, 1, "empty unquoted cell");
        if (s.find_first_not_of("-0123456789") == std::string::npos)
        {
            std::int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw ParseError(line, 1, "bad integer cell '" + s + "'");
            return v;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ParseError(line, 1, "bad numeric cell '" + s + "'");
        return v;
    }

    std::string format_cell(const TableCell &cell)
    {
        if (const auto *d = std::get_if<double>(&cell))
            return format_double(*d);
        if (const auto *i = std::get_if<std::int64_t>(&cell))
            return std::to_string(*i);
        return quote(std::get<std::string>(cell));
    }

    std::vector<double> checked_snrs(std::span<const double> snr_db)
    {
        if (snr_db.empty())
            throw InvalidParams("SNR list is empty.");
        for (double s : snr_db)
            if (!std::isfinite(s))
                throw DomainError("SNR values must be finite.");
        return {snr_db.begin(), snr_db.end()};
    }

    std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }
}

namespace satlink
{
    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
        std::string s(buf, ptr);
        if (s.find_first_of(".e") == std::string::npos)
            s += ".0";
        return s;
    }

    // ResultTable

    void ResultTable::add_row(std::vector<TableCell> row)
    {
        if (row.size() != columns.size())
            throw DimensionMismatch("Row has " + std::to_string(row.size()) + " cells, table has " +
                                    std::to_string(columns.size()) + " columns.");
        rows.push_back(std::move(row));
    }

    std::size_t ResultTable::column_index(const std::string &name) const
    {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end())
            throw IndexError("No column '" + name + "'.");
        return static_cast<std::size_t>(it - columns.begin());
    }

    double ResultTable::number(std::size_t row, const std::string &column) const
    {
        if (row >= rows.size())
            throw IndexError("Row index out of range.");
        const auto &cell = rows[row][column_index(column)];
        if (const auto *d = std::get_if<double>(&cell))
            return *d;
        if (const auto *i = std::get_if<std::int64_t>(&cell))
            return static_cast<double>(*i);
        throw InvalidParams("Column '" + column + "' is not numeric.");
    }

    std::string ResultTable::text(std::size_t row, const std::string &column) const
    {
        if (row >= rows.size())
            throw IndexError("Row index out of range.");
        const auto &cell = rows[row][column_index(column)];
        if (const auto *s = std::get_if<std::string>(&cell))
            return *s;
        return format_cell(cell);
    }

    void ResultTable::set_meta(const std::string &key, const std::string &value)
    {
        if (key.empty() || key.find_first_of("=\r\n") != std::string::npos)
            throw InvalidParams("Metadata keys must be non-empty and free of '=' and newlines.");
        for (auto &[k, v] : metadata)
            if (k == key)
            {
                v = value;
                return;
            }
        metadata.emplace_back(key, value);
    }

    std::string ResultTable::meta(const std::string &key) const
    {
        for (const auto &[k, v] : metadata)
            if (k == key)
                return v;
        return {};
    }

    // CSV

    std::string format_csv(const ResultTable &table)
    {
        std::string out;
        for (const auto &[k, v] : table.metadata)
            out += "# " + k + "=" + escape_meta(v) + "\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c)
        {
            if (c)
                out += ',';
            out += needs_quotes(table.columns[c]) ? quote(table.columns[c]) : table.columns[c];
        }
        out += '\n';
        for (const auto &row : table.rows)
        {
            for (std::size_t c = 0; c < row.size(); ++c)
            {
                if (c)
                    out += ',';
                out += format_cell(row[c]);
            }
            out += '\n';
        }
        return out;
    }

    ResultTable parse_csv(const std::string &text)
    {
        ResultTable table;
        std::size_t pos = 0, line = 1;
        while (pos < text.size() && text[pos] == '#')
        {
            auto eol = text.find('\n', pos);
            if (eol == std::string::npos)
                eol = text.size();
            std::string entry = text.substr(pos + 1, eol - pos - 1);
            if (!entry.empty() && entry.back() == '\r')
                entry.pop_back();
            if (!entry.empty() && entry.front() == ' ')
                entry.erase(0, 1);
            const auto eq = entry.find('=');
            if (eq == std::string::npos)
                throw ParseError(line, 1, "metadata line without '='");
            table.metadata.emplace_back(entry.substr(0, eq), unescape_meta(entry.substr(eq + 1)));
            pos = eol + 1;
            ++line;
        }
        if (pos >= text.size())
            throw ParseError(line, 1, "missing header row");

        const auto records = split_records(text.substr(pos), line);
        if (records.empty())
            throw ParseError(line, 1, "missing header row");
        for (const auto &f : records.front())
            table.columns.push_back(f.text);
        for (std::size_t r = 1; r < records.size(); ++r)
        {
            const std::size_t row_line = line + r;
            if (records[r].size() != table.columns.size())
                throw ParseError(row_line, 1, "row arity differs from header");
            std::vector<TableCell> row;
            row.reserve(records[r].size());
            for (const auto &f : records[r])
                row.push_back(parse_cell(f, row_line));
            table.rows.push_back(std::move(row));
        }
        return table;
    }

    void emit_csv(const ResultTable &table, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("Cannot open '" + path + "' for writing.");
        const auto text = format_csv(table);
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        f.close();
        if (!f)
            throw IoError("Failed writing '" + path + "'.");
    }

    ResultTable read_csv(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw IoError("Cannot open '" + path + "'.");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_csv(ss.str());
    }

    // Experiments

    ResultTable run_capacity_sweep(const ScenarioConfig &cfg, std::span<const double> snr_db, const RunOptions &opts)
    {
        cfg.validate();
        const auto snrs = checked_snrs(snr_db);
        auto arrays = cfg.sweep_arrays;
        if (arrays.empty())
            arrays.push_back({cfg.dims().num_tx(), cfg.num_rx});

        ResultTable t({"snr_db", "N", "M", "T", "mean_capacity", "std_capacity", "n_realizations"});
        add_common_metadata(t, cfg, "capacity-sweep");
        t.set_meta("model", to_string(cfg.model));
        t.set_meta("normalize_by_tx", cfg.normalize_by_tx ? "true" : "false");

        const CapacityOptions copts{cfg.normalize_by_tx, opts.workers};
        for (std::size_t a = 0; a < arrays.size(); ++a)
        {
            const auto dims = cfg.dims_for(arrays[a]);
            const auto src = make_channel_source(cfg, cfg.model, dims);
            const RngStream rng(cfg.seed, capacity_stream_base + a);
            const auto samples = capacity_samples(src, snrs, cfg.num_realizations, rng, copts);
            for (std::size_t s = 0; s < snrs.size(); ++s)
            {
                const auto p = summarize_capacity(snrs[s], samples[s]);
                t.add_row({p.snr_db, as_int(dims.num_satellites), as_int(dims.num_rx), as_int(dims.num_tx()),
                           p.mean_capacity, p.std_capacity, as_int(p.num_realizations)});
            }
        }
        return t;
    }

    ResultTable run_ccdf(const ScenarioConfig &cfg, std::span<const double> snr_db, const RunOptions &opts)
    {
        cfg.validate();
        const auto snrs = checked_snrs(snr_db);
        const auto src = make_channel_source(cfg);
        const RngStream rng(cfg.seed, ccdf_stream);
        const auto samples = capacity_samples(src, snrs, cfg.num_realizations, rng, {cfg.normalize_by_tx, opts.workers});

        double lo = samples.front().front(), hi = lo;
        for (const auto &per_snr : samples)
        {
            const auto [mn, mx] = std::minmax_element(per_snr.begin(), per_snr.end());
            lo = std::min(lo, *mn);
            hi = std::max(hi, *mx);
        }
        if (lo == hi)
        {
            lo -= 1.0;
            hi += 1.0;
        }
        const std::size_t n_points = std::max<std::size_t>(cfg.ccdf_points, 2);
        std::vector<double> thresholds(n_points);
        for (std::size_t i = 0; i < n_points; ++i)
            thresholds[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);

        ResultTable t({"snr_db", "capacity_threshold", "exceedance_probability"});
        add_common_metadata(t, cfg, "capacity-ccdf");
        t.set_meta("model", to_string(cfg.model));
        t.set_meta("n_realizations", std::to_string(cfg.num_realizations));
        for (std::size_t s = 0; s < snrs.size(); ++s)
        {
            const auto ccdf = empirical_ccdf_at(samples[s], thresholds);
            for (std::size_t i = 0; i < thresholds.size(); ++i)
                t.add_row({snrs[s], ccdf.thresholds[i], ccdf.exceed_prob[i]});
        }
        return t;
    }

    ResultTable run_ber_sweep(const ScenarioConfig &cfg, std::span<const double> snr_db,
                              const std::set<BerMethod> &methods, const RunOptions &opts)
    {
        cfg.validate();
        const auto snrs = checked_snrs(snr_db);
        if (methods.empty())
            throw InvalidParams("No BER method requested.");
        const auto dims = cfg.dims();
        const auto diversity = DiversityOrder::from_dims(dims.num_rx, dims.num_tx());

        ResultTable t({"snr_db", "model", "method", "ber", "num_bits", "num_errors"});
        add_common_metadata(t, cfg, "ber-sweep");
        t.set_meta("modulation", cfg.modulation.name());
        t.set_meta("num_tx", std::to_string(dims.num_tx()));
        t.set_meta("num_rx", std::to_string(dims.num_rx));

        if (methods.contains(BerMethod::ClosedForm))
        {
            const auto curve = closed_form_ber_curve(snrs, cfg.modulation, diversity);
            for (const auto &p : curve.points)
                t.add_row({p.snr_db, to_string(ModelKind::Rayleigh), to_string(BerMethod::ClosedForm), p.ber,
                           std::int64_t{0}, std::int64_t{0}});
        }
        if (methods.contains(BerMethod::MonteCarlo))
        {
            auto models = cfg.ber_models;
            if (models.empty())
                models.push_back(cfg.model);
            std::uint64_t redraws = 0;
            for (std::size_t k = 0; k < models.size(); ++k)
            {
                const auto src = make_channel_source(cfg, models[k], dims);
                const RngStream rng(cfg.seed, ber_stream_base + static_cast<std::uint64_t>(models[k]));
                const auto curve = mc_link_ber(src, cfg.modulation, snrs, cfg.num_bits, rng, {opts.workers});
                redraws += curve.singular_redraws;
                for (const auto &p : curve.points)
                    t.add_row({p.snr_db, to_string(models[k]), to_string(BerMethod::MonteCarlo), p.ber,
                               static_cast<std::int64_t>(p.num_bits), static_cast<std::int64_t>(p.num_errors)});
            }
            t.set_meta("singular_redraws", std::to_string(redraws));
        }
        return t;
    }

    ResultTable run_geometry(const ScenarioConfig &cfg)
    {
        cfg.validate();
        const auto dims = cfg.dims();
        const auto sats = geo_satellite_positions({dims.num_satellites, cfg.constellation.reference_longitude_deg,
                                                   cfg.effective_intersatellite_spacing(dims.num_rx),
                                                   cfg.constellation.formation});
        const auto rx = ground_array_positions(cfg.ground_station, dims.num_rx, cfg.ground_spacing_m);
        const auto ranges = slant_range_matrix(rx, sats);

        ResultTable t({"rx", "satellite", "rx_x_m", "rx_y_m", "rx_z_m", "sat_x_m", "sat_y_m", "sat_z_m",
                       "slant_range_m"});
        add_common_metadata(t, cfg, "geometry");
        double lo = ranges.front().front(), hi = lo;
        for (std::size_t m = 0; m < rx.size(); ++m)
            for (std::size_t n = 0; n < sats.size(); ++n)
            {
                lo = std::min(lo, ranges[m][n]);
                hi = std::max(hi, ranges[m][n]);
                t.add_row({as_int(m), as_int(n), rx[m].x_m, rx[m].y_m, rx[m].z_m, sats[n].x_m, sats[n].y_m,
                           sats[n].z_m, ranges[m][n]});
            }
        t.set_meta("range_spread_m", format_double(hi - lo));
        return t;
    }

    ResultTable run_link_budget(const ScenarioConfig &cfg)
    {
        cfg.validate();
        if (!cfg.link_budget)
            throw ValidationError("link", "scenario has no link budget");
        const auto &b = *cfg.link_budget;
        ResultTable t({"eirp_dbw", "gt_dbk", "boltzmann_db", "bandwidth_dbhz", "snr_db", "snr_linear"});
        add_common_metadata(t, cfg, "link-budget");
        const double snr = link_budget_snr_db(b);
        t.add_row({b.eirp_dbw, b.figure_of_merit_dbk, b.boltzmann_db, b.bandwidth_dbhz, snr, snr_db_to_linear(snr)});
        return t;
    }
}
