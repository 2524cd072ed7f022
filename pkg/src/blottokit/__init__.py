"""Exact solver for the asymmetric discrete Colonel Blotto game."""

from __future__ import annotations

from .blotto import (
    EquilibriumReport,
    GameCase,
    GameSpec,
    blotto_value,
    classify,
    is_solved,
    payoff_blotto_exhaustive,
    payoff_lotto,
    report_to_json,
    solve,
    symmetrize,
)
from .constructions import (
    PartitionMatrix,
    build_EO,
    build_prop3_B,
    build_prop4_A,
    build_prop5_A,
    build_prop6_B,
    build_prop7_B,
    build_prop10_B,
    cardinality,
    generic_implement,
    hcat,
    implement_u,
    matrix_from_json,
    matrix_to_json,
    vcat,
)
from .distributions import (
    Dist,
    base_dist,
    base_vector,
    dist_from_json,
    dist_to_json,
    mean,
    mix,
    normalized,
    payoff_H,
    point_mass,
    vbar,
)
from .exactmath import Rat, format_rat, parse_rat, rat
from .general_lotto import (
    LottoSpec,
    envelope_best_response,
    lotto_optimal_A,
    lotto_optimal_B,
    lotto_value,
)
from .verify import (
    Certificate,
    SweepRow,
    best_response_value,
    certify,
    rows_to_csv,
    sweep_certify,
)

__all__ = [
    "Certificate",
    "Dist",
    "EquilibriumReport",
    "GameCase",
    "GameSpec",
    "LottoSpec",
    "PartitionMatrix",
    "Rat",
    "SweepRow",
    "base_dist",
    "base_vector",
    "best_response_value",
    "blotto_value",
    "build_EO",
    "build_prop3_B",
    "build_prop4_A",
    "build_prop5_A",
    "build_prop6_B",
    "build_prop7_B",
    "build_prop10_B",
    "cardinality",
    "certify",
    "classify",
    "dist_from_json",
    "dist_to_json",
    "envelope_best_response",
    "format_rat",
    "generic_implement",
    "hcat",
    "implement_u",
    "is_solved",
    "lotto_optimal_A",
    "lotto_optimal_B",
    "lotto_value",
    "matrix_from_json",
    "matrix_to_json",
    "mean",
    "mix",
    "normalized",
    "parse_rat",
    "payoff_H",
    "payoff_blotto_exhaustive",
    "payoff_lotto",
    "point_mass",
    "rat",
    "report_to_json",
    "rows_to_csv",
    "solve",
    "sweep_certify",
    "symmetrize",
    "vbar",
    "vcat",
]
