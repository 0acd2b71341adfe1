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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "satlink/capacity.hpp"
#include "satlink/error_rates.hpp"
#include "satlink/errors.hpp"
#include "satlink/geometry.hpp"
#include "satlink/runner.hpp"
#include "satlink/statistics.hpp"

#include <set>
#include <stdexcept>

namespace py = pybind11;
using namespace satlink;

namespace
{
    py::dict table_to_dict(const ResultTable &t)
    {
        py::dict meta;
        for (const auto &[k, v] : t.metadata)
            meta[py::str(k)] = v;
        py::dict columns;
        for (std::size_t c = 0; c < t.columns.size(); ++c)
        {
            py::list col;
            for (const auto &row : t.rows)
                std::visit([&](const auto &v) { col.append(v); }, row[c]);
            columns[py::str(t.columns[c])] = col;
        }
        py::dict out;
        out["columns"] = columns;
        out["metadata"] = meta;
        out["csv"] = format_csv(t);
        return out;
    }

    std::set<BerMethod> methods_from(const std::vector<std::string> &names)
    {
        std::set<BerMethod> out;
        for (const auto &n : names)
        {
            if (n == "closed_form")
                out.insert(BerMethod::ClosedForm);
            else if (n == "monte_carlo")
                out.insert(BerMethod::MonteCarlo);
            else
                throw InvalidParams("Unknown BER method '" + n + "'.");
        }
        return out;
    }

    std::vector<double> snr_or_default(const ScenarioConfig &cfg, const std::optional<std::vector<double>> &snr)
    {
        return snr ? *snr : cfg.evaluation_snr_db();
    }
}

PYBIND11_MODULE(_satlink, m)
{
    m.doc() = "MIMO land-mobile satellite link simulation";
    m.attr("__version__") = tool_version;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<InsufficientBits>(m, "InsufficientBits", PyExc_ValueError);
    py::register_exception<SingularChannel>(m, "SingularChannel", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<ScenarioConfig>(m, "Scenario")
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("realizations", &ScenarioConfig::num_realizations)
        .def_readwrite("bits", &ScenarioConfig::num_bits)
        .def_readwrite("snr_db", &ScenarioConfig::snr_db)
        .def_readwrite("num_rx", &ScenarioConfig::num_rx)
        .def_readwrite("polarizations", &ScenarioConfig::polarizations)
        .def_property_readonly("model", [](const ScenarioConfig &c) { return to_string(c.model); })
        .def_property_readonly("modulation", [](const ScenarioConfig &c) { return c.modulation.name(); })
        .def_property_readonly("num_satellites", [](const ScenarioConfig &c) { return c.constellation.num_satellites; })
        .def_readonly("config_hash", &ScenarioConfig::config_hash)
        .def("evaluation_snr_db", &ScenarioConfig::evaluation_snr_db)
        .def("validate", &ScenarioConfig::validate);

    m.def("parse_scenario", &parse_scenario, py::arg("path"));
    m.def("parse_scenario_text", &parse_scenario_text, py::arg("text"));

    m.def(
        "run_capacity_sweep",
        [](const ScenarioConfig &cfg, std::optional<std::vector<double>> snr, std::size_t workers)
        {
            const auto s = snr_or_default(cfg, snr);
            py::gil_scoped_release release;
            auto t = run_capacity_sweep(cfg, s, {workers});
            py::gil_scoped_acquire acquire;
            return table_to_dict(t);
        },
        py::arg("scenario"), py::arg("snr_db") = py::none(), py::arg("workers") = 1);
    m.def(
        "run_ccdf",
        [](const ScenarioConfig &cfg, std::optional<std::vector<double>> snr, std::size_t workers)
        {
            const auto s = snr_or_default(cfg, snr);
            py::gil_scoped_release release;
            auto t = run_ccdf(cfg, s, {workers});
            py::gil_scoped_acquire acquire;
            return table_to_dict(t);
        },
        py::arg("scenario"), py::arg("snr_db") = py::none(), py::arg("workers") = 1);
    m.def(
        "run_ber_sweep",
        [](const ScenarioConfig &cfg, std::optional<std::vector<double>> snr, const std::vector<std::string> &methods,
           std::size_t workers)
        {
            const auto s = snr_or_default(cfg, snr);
            const auto chosen = methods_from(methods);
            py::gil_scoped_release release;
            auto t = run_ber_sweep(cfg, s, chosen, {workers});
            py::gil_scoped_acquire acquire;
            return table_to_dict(t);
        },
        py::arg("scenario"), py::arg("snr_db") = py::none(),
        py::arg("methods") = std::vector<std::string>{"closed_form", "monte_carlo"}, py::arg("workers") = 1);
    m.def("run_geometry", [](const ScenarioConfig &cfg) { return table_to_dict(run_geometry(cfg)); }, py::arg("scenario"));
    m.def("run_link_budget", [](const ScenarioConfig &cfg) { return table_to_dict(run_link_budget(cfg)); },
          py::arg("scenario"));

    m.def(
        "instantaneous_capacity",
        [](const Eigen::MatrixXcd &h, double rho, bool normalize_by_tx)
        { return instantaneous_capacity(ChannelMatrix(h), rho, normalize_by_tx); },
        py::arg("h"), py::arg("rho"), py::arg("normalize_by_tx") = false);
    m.def(
        "zf_mpsk_ber",
        [](double snr_per_symbol, std::size_t m, std::size_t u)
        { return zf_mpsk_ber_closed_form(snr_per_symbol, ModulationScheme(m), {u}); },
        py::arg("snr_per_symbol"), py::arg("m"), py::arg("diversity"));
    m.def("mu_k", &mu_k, py::arg("k"), py::arg("snr_per_symbol"), py::arg("m"));
    m.def(
        "slant_range_m",
        [](double lat, double lon, double alt, double sat_lon)
        {
            const auto sat = geo_satellite_positions({1, sat_lon, 6.0, Formation::Linear}).front();
            return slant_range(ecef_from_geodetic({lat, lon, alt}), sat);
        },
        py::arg("lat_deg"), py::arg("lon_deg"), py::arg("alt_m"), py::arg("sat_lon_deg"));
    m.def(
        "link_budget_snr_db",
        [](double eirp, double gt, double boltzmann, double bandwidth)
        { return link_budget_snr_db({eirp, gt, boltzmann, bandwidth}); },
        py::arg("eirp_dbw"), py::arg("gt_dbk"), py::arg("boltzmann_db") = boltzmann_dbw_per_k_hz,
        py::arg("bandwidth_dbhz"));
    m.def("q_function", &q_function, py::arg("z"));
}
