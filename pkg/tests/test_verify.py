"""Independent certification: best-response DP, certificates, and sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from blottokit.blotto import GameSpec, solve
from blottokit.constructions import PartitionMatrix, build_EO, E
from blottokit.errors import DimensionMismatch, InfeasibleRange
from blottokit.verify import (
    Certificate,
    SweepRow,
    best_response_value,
    certify,
    rows_to_csv,
    sweep_certify,
)


def random_partition(rng: random.Random, total: int, parts: int) -> tuple[int, ...]:
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def random_matrix(rng: random.Random, budget: int, parts: int) -> PartitionMatrix:
    rows = tuple(random_partition(rng, budget, parts) for _ in range(rng.randint(1, 4)))
    return PartitionMatrix(budget, parts, rows)


def test_best_response_against_zero_opponent():
    # Every battlefield granted a single unit is an outright win, so the
    # reply value is the share of battlefields the budget can cover.
    for K in (2, 3, 4):
        zeros = PartitionMatrix(0, K, ((0,) * K,))
        for budget in range(0, 2 * K + 1):
            expected = Fraction(min(budget, K), K)
            assert best_response_value(zeros, budget, K) == expected


def test_best_response_reproduces_game_value():
    report = solve(GameSpec(6, 4, 2))
    assert best_response_value(report.strategy_B, 6, 2) == Fraction(1, 3)
    assert best_response_value(report.strategy_A, 4, 2) == Fraction(-1, 3)


def test_best_response_validation():
    opponent = PartitionMatrix(2, 2, ((1, 1),))
    with pytest.raises(DimensionMismatch):
        best_response_value(opponent, 3, 3)
    with pytest.raises(InfeasibleRange):
        best_response_value(opponent, -1, 2)
    with pytest.raises(DimensionMismatch):
        best_response_value(PartitionMatrix(5, 1, ((5,),)), 3, 1)


def test_certify_equilibrium_pairs():
    report = solve(GameSpec(7, 6, 2))
    cert = certify(report.strategy_A, report.strategy_B, 7, 6, 2)
    assert cert == Certificate(Fraction(1, 8), Fraction(1, 8), True)

    report = solve(GameSpec(7, 2, 3))
    cert = certify(report.strategy_A, report.strategy_B, 7, 2, 3)
    assert cert.secured_by_A == Fraction(7, 9)
    assert cert.secured_by_B == Fraction(7, 9)
    assert cert.equilibrium


def test_certify_rejects_concentrated_attack():
    # Piling the whole budget on one battlefield leaves the rest undefended;
    # the weak side's inherited half-win/half-loss reply drags the floor to 0.
    stacked = PartitionMatrix(7, 2, ((7, 0),))
    cert = certify(stacked, build_EO(E, 3), 7, 6, 2)
    assert cert.secured_by_A == 0
    assert cert.secured_by_B == Fraction(1, 8)
    assert not cert.equilibrium


def test_certify_dimension_checks():
    good = solve(GameSpec(7, 6, 2))
    with pytest.raises(DimensionMismatch):
        certify(good.strategy_A, good.strategy_B, 8, 6, 2)
    with pytest.raises(DimensionMismatch):
        certify(good.strategy_A, good.strategy_B, 7, 5, 2)


def test_weak_duality_on_random_pairs():
    rng = random.Random(29)
    for _ in range(40):
        K = rng.randint(2, 4)
        budget_B = rng.randint(1, 9)
        budget_A = rng.randint(budget_B + 1, budget_B + 9)
        cert = certify(
            random_matrix(rng, budget_A, K),
            random_matrix(rng, budget_B, K),
            budget_A,
            budget_B,
            K,
        )
        assert cert.secured_by_A <= cert.secured_by_B
        assert cert.equilibrium is (cert.secured_by_A == cert.secured_by_B)


def test_sweep_small_grid_fully_certified():
    rows = sweep_certify(2, 8)
    assert [(row.K, row.A, row.B) for row in rows] == [
        (2, A, B) for A in range(3, 9) for B in range(1, A)
    ]
    for row in rows:
        if row.certified is not None:
            assert row.certified
            assert row.secured_A == row.value == row.secured_B


def test_sweep_reports_unsolved_rows_without_certificates():
    rows = sweep_certify(3, 12)
    by_key = {(row.K, row.A, row.B): row for row in rows}
    excluded = by_key[(3, 7, 5)]
    assert excluded.case == "UNSOLVED_EXCLUDED"
    assert excluded.value is None
    assert excluded.secured_A is None
    assert excluded.secured_B is None
    assert excluded.certified is None
    hart = by_key[(3, 8, 7)]
    assert hart.case == "UNSOLVED_HART_REGIME"
    assert hart.certified is None


def test_sweep_rejects_bad_bounds():
    with pytest.raises(InfeasibleRange):
        sweep_certify(1, 8)
    with pytest.raises(InfeasibleRange):
        sweep_certify(2, 2)


def test_sweep_worker_count_does_not_change_results():
    assert sweep_certify(2, 8, workers=2) == sweep_certify(2, 8)


def test_csv_rendering():
    text = rows_to_csv(sweep_certify(2, 4))
    lines = text.splitlines()
    assert lines[0] == "K,A,B,case,value,secured_A,secured_B,certified"
    assert lines[1] == "2,3,1,LOW_B_EQUAL,3/4,3/4,3/4,true"
    assert lines[2] == "2,3,2,HIGH_B_NDIV_EVEN,1/4,1/4,1/4,true"
    empty = rows_to_csv([SweepRow(3, 7, 5, "UNSOLVED_EXCLUDED", None, None, None, None)])
    assert empty.splitlines()[1] == "3,7,5,UNSOLVED_EXCLUDED,,,,"
