# SPDX-License-Identifier: Apache-2.0
#
# satlink: MIMO land-mobile satellite link simulation library
# Copyright (C) 2026 The satlink authors
"""MIMO land-mobile satellite link simulation."""

from ._satlink import (
    __version__,
    DimensionMismatch,
    DomainError,
    InsufficientBits,
    InvalidParams,
    IoError,
    ParseError,
    Scenario,
    SingularChannel,
    ValidationError,
    instantaneous_capacity,
    link_budget_snr_db,
    mu_k,
    parse_scenario,
    parse_scenario_text,
    q_function,
    run_ber_sweep,
    run_capacity_sweep,
    run_ccdf,
    run_geometry,
    run_link_budget,
    slant_range_m,
    zf_mpsk_ber,
)
