"""Exact discrepancy sums over orbits of multiplication by p.

Each statement compares the fraction of an orbit lying in a favourable region
with the measure of that region and averages |difference| over orbits with
weight 1/d.  Regions are open; elements on a boundary are never favourable
and are counted as boundary hits.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from statistics import fmean
from typing import Callable, Iterable

from .orbit_kit import arithmetic_carrier, explicit_carrier, orbits

STATEMENTS = ("p91", "p92", "p93")


@dataclass(frozen=True)
class DiscrepancyResult:
    statement: str
    p: int
    d: int
    params: dict = field(default_factory=dict)
    value: Fraction = Fraction(0)
    boundary_hits: int = 0

    def param_string(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.params.items())


def _check_coprime(p: int, n: int) -> None:
    if gcd(p, n) != 1:
        raise ValueError(f"p = {p} must be coprime to {n}")


def _sum_over_orbits(cycles: Iterable[list], favourable: Callable, alpha: Fraction, d: int) -> Fraction:
    """(1/d) sum_o |#fav(o)/|o| - alpha|, accumulated with integers per orbit size."""
    num, den = alpha.numerator, alpha.denominator
    by_size: dict[int, int] = {}
    for cyc in cycles:
        L = len(cyc)
        c = sum(1 for x in cyc if favourable(x))
        by_size[L] = by_size.get(L, 0) + abs(c * den - L * num)
    total = sum(Fraction(s, L) for L, s in by_size.items())
    return total / (den * d)


def _z_mod_d_orbits(p: int, d: int) -> list[list[int]]:
    return orbits(arithmetic_carrier((d,), p, range(d), lambda x: 0))


def discrepancy_interval(p: int, d: int, a: Fraction | int = 0, b: Fraction | int = Fraction(1, 2)) -> DiscrepancyResult:
    """Orbits of Z/d against the open interval (a, b)."""
    a, b = Fraction(a), Fraction(b)
    _check_coprime(p, d)
    if not 0 <= a < b <= 1:
        raise ValueError("need 0 <= a < b <= 1")
    an, ad, bn, bd = a.numerator, a.denominator, b.numerator, b.denominator
    hits = sum(1 for x in range(d) if x * ad == an * d or x * bd == bn * d)

    def fav(x: int) -> bool:
        return x * ad > an * d and x * bd < bn * d

    value = _sum_over_orbits(_z_mod_d_orbits(p, d), fav, b - a, d)
    return DiscrepancyResult("p91", p, d, {"a": a, "b": b}, value, hits)


def discrepancy_two_var(p: int, r: int, d: int) -> DiscrepancyResult:
    """Diagonal orbits on Z/r x Z/d against <a/r> + <b/d> < 1, compared with 1/2."""
    _check_coprime(p, r * d)
    elems = [(x, y) for x in range(r) for y in range(d)]
    cycles = orbits(arithmetic_carrier((r, d), p, elems, lambda x: 0))
    hits = sum(1 for x, y in elems if x * d + y * r == r * d)
    value = _sum_over_orbits(cycles, lambda xy: xy[0] * d + xy[1] * r < r * d, Fraction(1, 2), d)
    return DiscrepancyResult("p92", p, d, {"r": r}, value, hits)


def discrepancy_j2(p: int, d: int) -> DiscrepancyResult:
    """Orbits on Z/d x {0,1} (swap on the second factor).

    Favourable: <a/d> in (0, 1/2) with b = 0, or <a/d> in (1/2, 1) with b = 1.
    """
    _check_coprime(p, d)
    elems = [(x, s) for x in range(d) for s in (0, 1)]
    cycles = orbits(explicit_carrier(elems, [0] * len(elems), [((p * x) % d, 1 - s) for x, s in elems], p))
    hits = sum(2 for x in range(d) if 2 * x % d == 0)  # a = 0 and a = d/2, both second coordinates

    def fav(xs) -> bool:
        x, s = xs
        return (s == 0 and 0 < 2 * x < d) or (s == 1 and 2 * x > d)

    value = _sum_over_orbits(cycles, fav, Fraction(1, 2), d)
    return DiscrepancyResult("p93", p, d, {}, value, hits)


def discrepancy(statement: str, p: int, d: int, params: dict) -> DiscrepancyResult:
    statement = statement.lower()
    if statement == "p91":
        return discrepancy_interval(p, d, params.get("a", 0), params.get("b", Fraction(1, 2)))
    if statement == "p92":
        return discrepancy_two_var(p, params.get("r", 2), d)
    if statement == "p93":
        return discrepancy_j2(p, d)
    raise ValueError(f"unknown statement {statement!r}; choose from {', '.join(STATEMENTS)}")


def _admissible(statement: str, p: int, d: int, params: dict) -> bool:
    m = d * params.get("r", 1) if statement.lower() == "p92" else d
    return gcd(p, m) == 1


def _discrepancy_args(args) -> DiscrepancyResult:
    return discrepancy(*args)


@dataclass(frozen=True)
class ConvergenceTable:
    rows: list[DiscrepancyResult]

    def mean(self, lo: int, hi: int) -> float:
        vals = [r.value for r in self.rows if lo <= r.d <= hi]
        if not vals:
            raise ValueError(f"no rows with {lo} <= d <= {hi}")
        return float(sum(vals, Fraction(0)) / len(vals))

    def exact_mean(self, lo: int, hi: int) -> Fraction:
        vals = [r.value for r in self.rows if lo <= r.d <= hi]
        return sum(vals, Fraction(0)) / len(vals)

    def float_values(self) -> list[float]:
        return [float(r.value) for r in self.rows]

    def summary(self, head: tuple[int, int], tail: tuple[int, int]) -> dict:
        return {
            "head": list(head),
            "tail": list(tail),
            "head_mean": self.mean(*head),
            "tail_mean": self.mean(*tail),
            "overall_mean": fmean(self.float_values()),
        }


def convergence_scan(statement: str, p: int, ds: Iterable[int], params: dict | None = None, workers: int = 1) -> ConvergenceTable:
    """Discrepancies for every admissible d (others skipped), ascending in d."""
    params = dict(params or {})
    todo = [(statement, p, d, params) for d in sorted(set(ds)) if _admissible(statement, p, d, params)]
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_discrepancy_args, todo, chunksize=max(1, len(todo) // (4 * workers))))
    else:
        rows = [_discrepancy_args(t) for t in todo]
    return ConvergenceTable(rows)
