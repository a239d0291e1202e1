"""Concrete curve families: carriers, dim Sha as a sum of orbit invariants, deg omega."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, lcm
from typing import Iterable

from sympy import isprime

from .orbit_kit import (
    PairedOrbit,
    SignedIndexSet,
    arithmetic_carrier,
    explicit_carrier,
    legendre_index,
    lettered_orbits,
    pair_orbits,
    sum_d,
    superelliptic_index,
)

KINDS = ("sextic", "genus_g", "legendre", "superelliptic", "supersingular_twist", "ordinary_twist")
_ALIASES = {k.replace("_", ""): k for k in KINDS}


class StructuralError(ValueError):
    """A fractional part landed exactly on a window endpoint."""


def normalize_kind(kind: str) -> str:
    key = kind.lower().replace("-", "").replace("_", "")
    if key == "genusg" or key == "genus":
        return "genus_g"
    if key not in _ALIASES:
        raise ValueError(f"unknown family {kind!r}; choose from {', '.join(KINDS)}")
    return _ALIASES[key]


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    p: int
    d: int
    extra: int | None = None  # g for genus_g, r for superelliptic

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        p, d = self.p, self.d
        if not isprime(p):
            raise ValueError(f"p = {p} is not prime")
        if d < 1:
            raise ValueError("d must be positive")
        if gcd(p, d) != 1:
            raise ValueError(f"gcd(p, d) = gcd({p}, {d}) != 1")
        if self.kind in ("legendre", "supersingular_twist", "ordinary_twist", "superelliptic") and p == 2:
            raise ValueError(f"{self.kind} needs p odd")
        if self.kind == "genus_g":
            g = self.extra
            if g is None or g < 1:
                raise ValueError("genus_g needs extra = g >= 1")
            if ((2 * g + 2) * (2 * g + 1)) % p == 0:
                raise ValueError(f"genus_g needs p not dividing (2g+2)(2g+1) = {(2 * g + 2) * (2 * g + 1)}")
        elif self.kind == "superelliptic":
            r = self.extra
            if r is None or r < 2:
                raise ValueError("superelliptic needs extra = r >= 2")
            if gcd(p, r * d) != 1:
                raise ValueError("superelliptic needs gcd(p, r d) = 1")
        elif self.extra is not None:
            raise ValueError(f"{self.kind} takes no extra parameter")


# ---------------------------------------------------------------- single-carrier families


def _cmp(num: int, den: int, a: int, b: int) -> int:
    """Sign of num/den - a/b."""
    x = num * b - a * den
    return (x > 0) - (x < 0)


def _in_open(num: int, den: int, lo: tuple[int, int], hi: tuple[int, int]) -> bool:
    """lo < num/den < hi with a structural error on equality."""
    c_lo = _cmp(num, den, *lo)
    c_hi = _cmp(num, den, *hi)
    if c_lo == 0 or c_hi == 0:
        raise StructuralError(f"{num}/{den} lies on a window endpoint")
    return c_lo > 0 and c_hi < 0


def sextic_letter(b: int, d: int) -> str:
    if _in_open(b, d, (0, 1), (1, 6)):
        return "l"
    if _in_open(b, d, (5, 6), (1, 1)):
        return "u"
    return "m"


def genus_g_in_carrier(b: int, d: int, g: int) -> bool:
    """None of the six coordinates vanishes in Z/2d."""
    coords = (-(4 * g + 4) * b, 2 * b, (4 * g + 2) * b, d, d - (4 * g + 2) * b, (4 * g + 2) * b)
    return all(c % (2 * d) for c in coords)


def genus_g_windows(g: int) -> tuple[list, list]:
    """Contributing windows: (I0 x J1 windows, I1 x J0 windows) as fraction pairs."""
    low = [((k + 1, 2 * g + 2), (2 * k + 1, 4 * g + 2)) for k in range(g + 1, 2 * g + 1)]
    up = [((2 * k + 1, 4 * g + 2), (k + 1, 2 * g + 2)) for k in range(g)]
    return low, up


def genus_g_letter(b: int, d: int, g: int) -> str:
    low, up = genus_g_windows(g)
    if any(_in_open(b, d, lo, hi) for lo, hi in low):
        return "l"
    if any(_in_open(b, d, lo, hi) for lo, hi in up):
        return "u"
    return "m"


def genus_g_components(b: int, d: int, g: int) -> tuple[int, int]:
    """(I label, J label) of b from the four component window lists."""
    i_zero = [((k + 1, 2 * g + 2), (k + 1, 2 * g + 1)) for k in range(2 * g + 1)]
    i_one = [((k, 2 * g + 1), (k + 1, 2 * g + 2)) for k in range(2 * g + 1)]
    j_zero = [((2 * l + 1, 4 * g + 2), (2 * l + 2, 4 * g + 2)) for l in range(2 * g + 1)]
    j_one = [((2 * l, 4 * g + 2), (2 * l + 1, 4 * g + 2)) for l in range(2 * g + 1)]
    i0 = any(_in_open(b, d, lo, hi) for lo, hi in i_zero)
    i1 = any(_in_open(b, d, lo, hi) for lo, hi in i_one)
    j0 = any(_in_open(b, d, lo, hi) for lo, hi in j_zero)
    j1 = any(_in_open(b, d, lo, hi) for lo, hi in j_one)
    if i0 == i1 or j0 == j1:
        raise StructuralError(f"b = {b} not classified uniquely for d = {d}, g = {g}")
    return (0 if i0 else 1), (0 if j0 else 1)


# ---------------------------------------------------------------- carriers


@dataclass(frozen=True)
class FamilyCarrier:
    """Either a single lettered carrier or an (I, J, pairing) triple."""

    spec: FamilySpec
    carrier: SignedIndexSet | None = None
    I: SignedIndexSet | None = None
    J: SignedIndexSet | None = None
    restriction: str = "all"

    @property
    def paired(self) -> bool:
        return self.carrier is None


def _swap_set(p: int, swap: bool) -> SignedIndexSet:
    return explicit_carrier((0, 1), (0, 1), (1, 0) if swap else (0, 1), p)


def family_carrier(F: FamilySpec) -> FamilyCarrier:
    p, d, kind = F.p, F.d, F.kind
    if kind == "sextic":
        elems = [b for b in range(d) if (6 * b) % d]
        # only the letters matter here; the 0/1 split records which half b lies in
        S = arithmetic_carrier((d,), p, elems, lambda b: 0 if 2 * b > d else 1)
        for b in elems:  # boundary check happens here once
            sextic_letter(b, d)
        return FamilyCarrier(F, carrier=S)
    if kind == "genus_g":
        g = F.extra
        elems = [b for b in range(d) if genus_g_in_carrier(b, d, g)]
        labels = {b: genus_g_components(b, d, g)[0] for b in elems}
        S = arithmetic_carrier((d,), p, elems, labels.__getitem__)
        return FamilyCarrier(F, carrier=S)
    if kind == "legendre":
        I = legendre_index(d, p)
        return FamilyCarrier(F, I=I, J=I, restriction="anti-diagonal")
    if kind == "superelliptic":
        I = superelliptic_index(F.extra, d, p)
        return FamilyCarrier(F, I=I, J=I, restriction="anti-diagonal")
    if kind == "supersingular_twist":
        return FamilyCarrier(F, I=legendre_index(d, p), J=_swap_set(p, True))
    if kind == "ordinary_twist":
        return FamilyCarrier(F, I=legendre_index(d, p), J=_swap_set(p, False))
    raise ValueError(kind)


def contributing_orbits(F: FamilySpec) -> list[PairedOrbit]:
    fc = family_carrier(F)
    if fc.paired:
        return pair_orbits(fc.I, fc.J, fc.restriction)
    d = F.d
    if F.kind == "sextic":
        return lettered_orbits(fc.carrier, lambda b: sextic_letter(b, d))
    g = F.extra
    return lettered_orbits(fc.carrier, lambda b: genus_g_letter(b, d, g))


def carrier_size(F: FamilySpec) -> int:
    fc = family_carrier(F)
    if fc.paired:
        return len(fc.I) if fc.restriction == "anti-diagonal" else len(fc.I) * len(fc.J)
    return len(fc.carrier)


def dim_sha(F: FamilySpec) -> int:
    return sum_d(contributing_orbits(F))


# ---------------------------------------------------------------- deg omega


def deg_omega_value(kind: str, d: int, extra: int | None = None) -> tuple[int, bool]:
    """Closed-form deg omega (or an upper bound, with exact = False)."""
    kind = normalize_kind(kind)
    if kind == "sextic":
        return ceil(Fraction(d, 6)), True
    if kind in ("legendre", "supersingular_twist", "ordinary_twist"):
        return ceil(Fraction(d, 2)), True
    if kind == "genus_g":
        g = extra
        if g == 1:
            return ceil(Fraction(d, 12)), True
        R = (2 * g + 1) * (2 * g + 2)
        main = Fraction(d * g, 8 * g + 4)
        if d % R == 0:
            return int(main), True
        return int(main + 2 * g * (R - 1)), False
    if kind == "superelliptic":
        r = extra
        if d % r == 0:
            return d * (r - 1) // 2, True
        dd = lcm(d, r)
        bound = Fraction(d * (r - 1), 2) + Fraction(2 * (r - 1) ** 2 * d, dd)
        return int(bound), False
    raise ValueError(kind)


def deg_omega(F: FamilySpec) -> tuple[int, bool]:
    return deg_omega_value(F.kind, F.d, F.extra)


def asymptotic_slope(kind: str, extra: int | None = None) -> Fraction:
    """Leading coefficient of the equidistributed guess for dim Sha as a multiple of d."""
    kind = normalize_kind(kind)
    if kind == "sextic":
        return Fraction(1, 6)
    if kind in ("legendre", "supersingular_twist"):
        return Fraction(1, 2)
    if kind == "ordinary_twist":
        return Fraction(0)
    if kind == "genus_g":
        return Fraction(extra, 8 * extra + 4)
    return Fraction(extra - 1, 2)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class BsReport:
    spec: FamilySpec
    dim_sha: int
    deg_omega: int
    deg_omega_exact: bool
    ratio: Fraction

    @property
    def ratio_label(self) -> str:
        return "ratio" if self.deg_omega_exact else "lower-bound ratio"

    def csv_row(self) -> list:
        F = self.spec
        return [
            F.kind,
            F.p,
            F.p,
            F.d,
            "" if F.extra is None else F.extra,
            self.dim_sha,
            self.deg_omega,
            str(self.deg_omega_exact).lower(),
            self.ratio.numerator,
            self.ratio.denominator,
        ]


CSV_HEADER = ["family", "p", "q", "d", "extra", "dim_sha", "deg_omega", "deg_omega_exact", "ratio_num", "ratio_den"]


def bs_report(F: FamilySpec) -> BsReport:
    dim = dim_sha(F)
    deg, exact = deg_omega(F)
    return BsReport(F, dim, deg, exact, Fraction(dim, deg))


def _report_or_none(args) -> BsReport | None:
    kind, p, d, extra = args
    return bs_report(FamilySpec(kind, p, d, extra))


@dataclass(frozen=True)
class ScanResult:
    rows: list[BsReport]
    skipped: list[tuple[int, str]]


def bs_scan(kind: str, p: int, ds: Iterable[int], extra: int | None = None, workers: int = 1) -> ScanResult:
    """Reports for every admissible d, in ascending order of d."""
    kind = normalize_kind(kind)
    todo, skipped = [], []
    for d in sorted(set(ds)):
        try:
            FamilySpec(kind, p, d, extra)
        except ValueError as exc:
            skipped.append((d, str(exc)))
            continue
        todo.append((kind, p, d, extra))
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_report_or_none, todo, chunksize=max(1, len(todo) // (4 * workers))))
    else:
        rows = [_report_or_none(t) for t in todo]
    return ScanResult(rows, skipped)
