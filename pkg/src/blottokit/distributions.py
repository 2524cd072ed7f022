"""Exact distributions on non-negative integers and the base vector families.

IntVec is a plain counts map (support point -> multiplicity); Dist is an
immutable exact probability distribution. The five base families (odd grid,
even grid, interior-even grid, and the two two-spike patterns) are the
building blocks of every optimal strategy emitted by the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import BadIndex, BadM, BadWeights
from .exactmath import Rat, format_rat, parse_rat

IntVec = dict[int, int]

U_ODD = "U_ODD"
U_EVEN = "U_EVEN"
U_ODD_UP = "U_ODD_UP"
W = "W"
V = "V"


@dataclass(frozen=True)
class Dist:
    """Exact probability distribution on non-negative integers."""

    items: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_weights(cls, weights: Mapping[int, Rat | int]) -> "Dist":
        """Build a Dist, dropping zero weights and validating the rest."""
        cleaned: dict[int, Fraction] = {}
        for point, weight in weights.items():
            weight = Fraction(weight)
            if weight == 0:
                continue
            if weight < 0:
                raise BadWeights(f"negative weight {weight} at {point}")
            if point < 0:
                raise BadWeights(f"negative support point {point}")
            cleaned[int(point)] = cleaned.get(int(point), Fraction(0)) + weight
        if sum(cleaned.values(), Fraction(0)) != 1:
            raise BadWeights(f"weights sum to {sum(cleaned.values())}, not 1")
        return cls(tuple(sorted(cleaned.items())))

    @property
    def weights(self) -> dict[int, Fraction]:
        return dict(self.items)

    def weight(self, point: int) -> Fraction:
        return self.weights.get(point, Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(point for point, _ in self.items)

    def max_support(self) -> int:
        return self.items[-1][0]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        inner = ", ".join(f"{p}: {w}" for p, w in self.items)
        return f"Dist({{{inner}}})"


def point_mass(point: int) -> Dist:
    """The distribution concentrated on a single point."""
    return Dist.from_weights({point: 1})


def _base_counts(kind: str, m: int, j: int | None) -> IntVec:
    if kind in (U_ODD, U_EVEN, U_ODD_UP):
        if j is not None:
            raise BadIndex(f"{kind} takes no index j")
        if kind == U_ODD:
            if m < 1:
                raise BadM(f"U_ODD needs m >= 1, got {m}")
            return {2 * i + 1: 1 for i in range(m)}
        if kind == U_EVEN:
            if m < 1:
                raise BadM(f"U_EVEN needs m >= 1, got {m}")
            return {2 * i: 1 for i in range(m + 1)}
        if m < 2:
            raise BadM(f"U_ODD_UP needs m >= 2, got {m}")
        return {2 * i: 1 for i in range(1, m)}
    if kind == W:
        if m < 2:
            raise BadM(f"W needs m >= 2, got {m}")
        if j is None or not 1 <= j <= m - 1:
            raise BadIndex(f"W needs 1 <= j <= m-1, got j={j}, m={m}")
        counts: IntVec = {0: 1, 2 * j: 1}
        for even in range(2, 2 * j - 1, 2):
            counts[even] = 2
        for odd in range(2 * j + 1, 2 * m, 2):
            counts[odd] = 2
        return counts
    if kind == V:
        if m < 1:
            raise BadM(f"V needs m >= 1, got {m}")
        if j is None or not 1 <= j <= m:
            raise BadIndex(f"V needs 1 <= j <= m, got j={j}, m={m}")
        counts = {2 * j - 1: 1}
        for odd in range(1, 2 * j - 2, 2):
            counts[odd] = 2
        for even in range(2 * j, 2 * m + 1, 2):
            counts[even] = 2
        return counts
    raise BadIndex(f"unknown base vector kind {kind!r}")


def base_vector(kind: str, m: int, j: int | None = None) -> IntVec:
    """Counts map of the requested base family member over [0, 2m(+1)]."""
    return _base_counts(kind, m, j)


def base_dist(kind: str, m: int, j: int | None = None) -> Dist:
    """The base vector normalized to a probability distribution."""
    counts = _base_counts(kind, m, j)
    total = sum(counts.values())
    return Dist.from_weights({p: Fraction(c, total) for p, c in counts.items()})


def vbar(m: int) -> Dist:
    """Uniform mixture of the V(j, m) family over j = 1..m."""
    if m < 1:
        raise BadM(f"vbar needs m >= 1, got {m}")
    share = Fraction(1, m)
    return mix([(share, base_dist(V, m, j)) for j in range(1, m + 1)])


def mix(parts: Sequence[tuple[Rat | int, Dist]]) -> Dist:
    """Convex combination of distributions; zero-weight parts are dropped."""
    total = sum((Fraction(w) for w, _ in parts), Fraction(0))
    if total != 1:
        raise BadWeights(f"mixture weights sum to {total}, not 1")
    combined: dict[int, Fraction] = {}
    for weight, dist in parts:
        weight = Fraction(weight)
        if weight == 0:
            continue
        if weight < 0:
            raise BadWeights(f"negative mixture weight {weight}")
        for point, prob in dist.items:
            combined[point] = combined.get(point, Fraction(0)) + weight * prob
    return Dist.from_weights(combined)


def mean(dist: Dist) -> Rat:
    """Expected value of the distribution."""
    return sum((Fraction(p) * w for p, w in dist.items), Fraction(0))


def payoff_H(x: Dist, y: Dist) -> Rat:
    """P(X > Y) - P(X < Y) for independent X ~ x, Y ~ y."""
    total = Fraction(0)
    for px, wx in x.items:
        for py, wy in y.items:
            if px > py:
                total += wx * wy
            elif px < py:
                total -= wx * wy
    return total


def normalized(counts: Mapping[int, int]) -> Dist:
    """Counts map scaled by the reciprocal of its total."""
    total = sum(counts.values())
    if total <= 0:
        raise BadWeights("cannot normalize an empty counts map")
    return Dist.from_weights({p: Fraction(c, total) for p, c in counts.items()})


def vec_add(*vecs: Mapping[int, int]) -> IntVec:
    """Pointwise sum of counts maps."""
    out: IntVec = {}
    for vec in vecs:
        for point, count in vec.items():
            out[point] = out.get(point, 0) + count
    return {p: c for p, c in out.items() if c != 0}


def vec_scale(factor: int, vec: Mapping[int, int]) -> IntVec:
    """Counts map multiplied by a non-negative integer factor."""
    if factor == 0:
        return {}
    return {p: factor * c for p, c in vec.items()}


def dist_to_json(dist: Dist) -> dict:
    """JSON form: {"weights": {"point": "p/q", ...}}."""
    return {"weights": {str(p): format_rat(w) for p, w in dist.items}}


def dist_from_json(obj: Mapping) -> Dist:
    """Inverse of dist_to_json."""
    weights = obj["weights"]
    return Dist.from_weights({int(p): parse_rat(w) for p, w in weights.items()})


def dist_items(dist: Dist) -> Iterable[tuple[int, Fraction]]:
    """Sorted (point, weight) pairs."""
    return dist.items
