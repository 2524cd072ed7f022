"""Independent equilibrium certification by exact best-response search.

The certifier never trusts the closed forms: it computes, by dynamic
programming over battlefields and remaining budget, the best payoff a pure
reply can extract from each claimed strategy, and certifies an equilibrium
exactly when the two security levels coincide.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .constructions import PartitionMatrix
from .distributions import Dist
from .errors import DimensionMismatch, InfeasibleRange
from .exactmath import Rat, format_rat


@dataclass(frozen=True)
class Certificate:
    """Security levels of a strategy pair, in the stronger player's payoff.

    `secured_by_A` is the floor A's strategy guarantees against any reply;
    `secured_by_B` is the ceiling B's strategy imposes; weak duality gives
    secured_by_A <= secured_by_B, with equality certifying an equilibrium.
    """

    secured_by_A: Rat
    secured_by_B: Rat
    equilibrium: bool


def _gain_table(marginal: Dist, top: int) -> list[Fraction]:
    """g(t) = P(t > Y) - P(t < Y) against marginal Y, for t in [0, top]."""
    items = marginal.items
    table = []
    below = Fraction(0)
    index = 0
    for t in range(top + 1):
        while index < len(items) and items[index][0] < t:
            below += items[index][1]
            index += 1
        tie = (
            items[index][1]
            if index < len(items) and items[index][0] == t
            else Fraction(0)
        )
        table.append(below - (1 - below - tie))
    return table


def best_response_value(opponent: PartitionMatrix, budget: int, K: int) -> Rat:
    """Best average gain any K-partition of `budget` gets against `opponent`.

    The opponent's rows are mixed uniformly and matched to battlefields
    uniformly at random, so every battlefield independently faces the
    opponent's aggregate per-entry distribution; the reply is then a
    budget-exact maximization of the per-battlefield gain, solved by
    dynamic programming in O(K * budget^2) exact-arithmetic states.
    """
    if opponent.battlefields != K:
        raise DimensionMismatch(
            f"opponent plays on {opponent.battlefields} battlefields, reply on {K}"
        )
    if budget < 0:
        raise InfeasibleRange(f"reply budget must be non-negative, got {budget}")
    if K < 2:
        raise DimensionMismatch(f"the game needs K >= 2 battlefields, got {K}")
    gain = _gain_table(opponent.to_dist(), budget)
    best = list(gain)
    for _ in range(K - 1):
        best = [
            max(gain[t] + best[c - t] for t in range(c + 1))
            for c in range(budget + 1)
        ]
    return best[budget] / K


def certify(
    strategy_A: PartitionMatrix,
    strategy_B: PartitionMatrix,
    A: int,
    B: int,
    K: int,
) -> Certificate:
    """Security levels of the claimed pair, from two best-response runs."""
    if strategy_A.budget != A or strategy_A.battlefields != K:
        raise DimensionMismatch(
            f"A-strategy is a {strategy_A.budget}-budget matrix on "
            f"{strategy_A.battlefields} battlefields, expected ({A}, {K})"
        )
    if strategy_B.budget != B or strategy_B.battlefields != K:
        raise DimensionMismatch(
            f"B-strategy is a {strategy_B.budget}-budget matrix on "
            f"{strategy_B.battlefields} battlefields, expected ({B}, {K})"
        )
    secured_by_A = -best_response_value(strategy_A, B, K)
    secured_by_B = best_response_value(strategy_B, A, K)
    return Certificate(secured_by_A, secured_by_B, secured_by_A == secured_by_B)


@dataclass(frozen=True)
class SweepRow:
    """One sweep instance; rational fields are None for unsolved cases."""

    K: int
    A: int
    B: int
    case: str
    value: Rat | None
    secured_A: Rat | None
    secured_B: Rat | None
    certified: bool | None


def _sweep_instance(task: tuple[int, int, int]) -> SweepRow:
    # Imported here: the solver module itself depends on this certifier.
    from . import blotto

    K, A, B = task
    spec = blotto.GameSpec(A, B, K)
    case = blotto.classify(spec)
    if not blotto.is_solved(case):
        return SweepRow(K, A, B, case.value, None, None, None, None)
    report = blotto.solve(spec)
    cert = report.certificate
    return SweepRow(
        K,
        A,
        B,
        case.value,
        report.value,
        cert.secured_by_A,
        cert.secured_by_B,
        True,
    )


def sweep_certify(kmax: int, amax: int, workers: int = 1) -> list[SweepRow]:
    """Solve and certify every instance with 2 <= K <= kmax, K < A <= amax, B < A.

    Unsolved instances are classified and emitted without certification.
    The first failed certification aborts the sweep with a diagnostic.
    Results are ordered by (K, A, B) regardless of worker count.
    """
    if kmax < 2 or amax < 3:
        raise InfeasibleRange(f"sweep needs kmax >= 2 and amax >= 3, got ({kmax}, {amax})")
    tasks = [
        (K, A, B)
        for K in range(2, kmax + 1)
        for A in range(K + 1, amax + 1)
        for B in range(1, A)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_instance, tasks, chunksize=16))
    return [_sweep_instance(task) for task in tasks]


def rows_to_csv(rows: list[SweepRow]) -> str:
    """Render sweep rows as a deterministic CSV table."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["K", "A", "B", "case", "value", "secured_A", "secured_B", "certified"]
    )
    for row in rows:
        writer.writerow(
            [
                row.K,
                row.A,
                row.B,
                row.case,
                format_rat(row.value) if row.value is not None else "",
                format_rat(row.secured_A) if row.secured_A is not None else "",
                format_rat(row.secured_B) if row.secured_B is not None else "",
                "" if row.certified is None else str(row.certified).lower(),
            ]
        )
    return buffer.getvalue()
