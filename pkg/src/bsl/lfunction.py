"""L-polynomials of elliptic curves over F_q(t) by point counting, and their slopes.

Curves are converted to short form y^2 = x^3 + A(t) x + B(t) (p >= 5).  Local
data at a place comes from Hasse-derivative valuations of A, B and the
discriminant at a root of the place, the reduced minimal model there, and a
character sum over the residue field.  The L-degree is fixed beforehand from
the conductor, which is read off a factorisation of the discriminant over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, gcd

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_quo, gf_rem, gf_strip

from .families import deg_omega_value, normalize_kind
from .finite_field import FiniteField, finite_field
from .padic_core import vp

INF = 10**9  # valuation of the zero polynomial


# ---------------------------------------------------------------- integer polynomials (low to high)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(*polys) -> list[int]:
    n = max((len(a) for a in polys), default=0)
    out = [0] * n
    for a in polys:
        for i, c in enumerate(a):
            out[i] += c
    return _trim(out)


def pscale(c: int, a) -> list[int]:
    return _trim([c * x for x in a])


def pmul(*polys) -> list[int]:
    out = [1]
    for b in polys:
        res = [0] * (len(out) + len(b) - 1) if out and b else []
        for i, x in enumerate(out):
            if x:
                for j, y in enumerate(b):
                    res[i + j] += x * y
        out = _trim(res)
    return out


def pmod(a, p: int) -> list[int]:
    return _trim([x % p for x in a])


def monomial(c: int, k: int) -> list[int]:
    return _trim([0] * k + [c])


def hasse(a, j: int, p: int) -> list[int]:
    """j-th Hasse derivative mod p."""
    return _trim([comb(k, j) * a[k] % p for k in range(j, len(a))])


# ---------------------------------------------------------------- curves


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in F_p[t] (low-to-high lists)."""

    p: int
    a1: tuple = ()
    a2: tuple = ()
    a3: tuple = ()
    a4: tuple = ()
    a6: tuple = ()
    label: str = ""
    A: tuple = field(init=False, repr=False)
    B: tuple = field(init=False, repr=False)

    def __post_init__(self):
        p = self.p
        if not isprime(p) or p < 5:
            raise ValueError("point counting needs a prime p >= 5")
        a1, a2, a3, a4, a6 = (list(x) for x in (self.a1, self.a2, self.a3, self.a4, self.a6))
        b2 = padd(pmul(a1, a1), pscale(4, a2))
        b4 = padd(pmul(a1, a3), pscale(2, a4))
        b6 = padd(pmul(a3, a3), pscale(4, a6))
        c4 = padd(pmul(b2, b2), pscale(-24, b4))
        c6 = padd(pscale(-1, pmul(b2, b2, b2)), pscale(36, pmul(b2, b4)), pscale(-216, b6))
        A = pmod(pscale(-pow(48, -1, p), c4), p)
        B = pmod(pscale(-pow(864, -1, p), c6), p)
        object.__setattr__(self, "A", tuple(A))
        object.__setattr__(self, "B", tuple(B))
        if not self.disc():
            raise ValueError("singular generic fibre")
        if not A or not B or self._isotrivial():
            raise ValueError("isotrivial curve (constant j-invariant)")

    def disc(self) -> list[int]:
        """4A^3 + 27B^2 (a nonzero constant multiple of the discriminant)."""
        A, B = list(self.A), list(self.B)
        return pmod(padd(pscale(4, pmul(A, A, A)), pscale(27, pmul(B, B))), self.p)

    def _isotrivial(self) -> bool:
        A3 = pmod(pmul(self.A, self.A, self.A), self.p)
        B2 = pmod(pmul(self.B, self.B), self.p)
        return pmod(padd(pscale(B2[-1], A3), pscale(-A3[-1], B2)), self.p) == []

    def at_infinity(self) -> tuple[list[int], list[int], int]:
        """A, B rewritten in s = 1/t after x -> t^(2K) x, y -> t^(3K) y."""
        dA, dB = len(self.A) - 1, len(self.B) - 1
        K = max(ceil(Fraction(dA, 4)), ceil(Fraction(dB, 6)))
        Ai = _trim([0] * (4 * K - dA) + list(reversed(self.A)))
        Bi = _trim([0] * (6 * K - dB) + list(reversed(self.B)))
        return Ai, Bi, K


def legendre_curve(p: int, d: int) -> WeierstrassCurve:
    """y^2 = x(x+1)(x+t^d)."""
    return WeierstrassCurve(p, a2=tuple(padd([1], monomial(1, d))), a4=tuple(monomial(1, d)), label=f"legendre d={d}")


def sextic_curve(p: int, d: int) -> WeierstrassCurve:
    """y^2 + xy = x^3 - t^d."""
    return WeierstrassCurve(p, a1=(1,), a6=tuple(monomial(-1, d)), label=f"sextic d={d}")


def weil_genus1_curve(p: int, d: int) -> WeierstrassCurve:
    """y^2 = x^3 - 4 t^d x + t^d, the Jacobian of the genus one member of the hyperelliptic family."""
    return WeierstrassCurve(p, a4=tuple(monomial(-4, d)), a6=tuple(monomial(1, d)), label=f"genus_g g=1 d={d}")


def family_curve(kind: str, p: int, d: int, extra: int | None = None) -> WeierstrassCurve:
    kind = normalize_kind(kind)
    if kind == "legendre":
        return legendre_curve(p, d)
    if kind == "sextic":
        return sextic_curve(p, d)
    if kind == "genus_g" and extra in (None, 1):
        return weil_genus1_curve(p, d)
    raise ValueError(f"no elliptic model implemented for {kind} with extra={extra}")


# ---------------------------------------------------------------- places


@dataclass(frozen=True)
class Place:
    """A place of P^1 over F_q: a Frobenius orbit of alpha in F_{q^deg}, or infinity."""

    deg: int
    alpha: int | None  # code in F_{q^deg}; None for infinity

    @property
    def infinite(self) -> bool:
        return self.alpha is None


def _exact_degree_reps(F: FiniteField, a: int, e: int) -> list[int]:
    """Minimal codes of the q-Frobenius orbits of exact length e in F = F_{q^e}, q = p^a."""
    x = F.elements()
    cur = x.copy()
    orbit_min = x.copy()
    first_return = np.zeros(F.Q, dtype=np.int64)
    for f in range(1, e + 1):
        cur = F.frob(cur, a)
        orbit_min = np.minimum(orbit_min, cur)
        hit = (cur == x) & (first_return == 0)
        first_return[hit] = f
    mask = (first_return == e) & (orbit_min == x)
    return [int(v) for v in x[mask]]


def places(q: int, max_deg: int, p: int | None = None) -> list[Place]:
    """All places of P^1 over F_q of degree <= max_deg (infinity first)."""
    p, a = _prime_power(q) if p is None else (p, round(np.log(q) / np.log(p)))
    out = [Place(1, None)]
    for e in range(1, max_deg + 1):
        F = finite_field(p, a * e)
        out.extend(Place(e, r) for r in _exact_degree_reps(F, a, e))
    return out


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            a = vp(q, p)
            if p**a != q:
                raise ValueError(f"q = {q} is not a prime power")
            return p, a
    raise ValueError(f"q = {q} is not a prime power")


# ---------------------------------------------------------------- local data


@dataclass(frozen=True)
class LocalData:
    place: Place
    kind: str  # good | split | nonsplit | additive
    a: int  # trace (0 for additive)
    conductor_exponent: int
    v_disc_min: int

    def factor(self, q: int) -> list[int]:
        """Local Euler factor as a polynomial in T (low to high)."""
        e = self.place.deg
        if self.kind == "good":
            return padd([1], monomial(-self.a, e), monomial(q**e, 2 * e))
        if self.kind in ("split", "nonsplit"):
            return padd([1], monomial(-self.a, e))
        return [1]


def _val_at(F: FiniteField, poly, alpha: int) -> int:
    if not poly:
        return INF
    for j in range(len(poly)):
        if F.seval(hasse(poly, j, F.p), alpha) != 0:
            return j
    raise AssertionError("nonzero polynomial with all Hasse derivatives vanishing")


def _reduction(F: FiniteField, A, B, disc, alpha: int) -> tuple[str, int, int, int, int]:
    """(type, k, reduced A, reduced B, v(disc_min)) at a root alpha."""
    p = F.p
    if F.seval(disc, alpha) != 0:
        return "good", 0, F.seval(A, alpha), F.seval(B, alpha), 0
    vA, vB, vD = _val_at(F, A, alpha), _val_at(F, B, alpha), _val_at(F, disc, alpha)
    k = min(vA // 4, vB // 6)
    vA, vB, vD = vA - 4 * k, vB - 6 * k, vD - 12 * k
    Ar = F.seval(hasse(A, 4 * k, p), alpha) if A else 0
    Br = F.seval(hasse(B, 6 * k, p), alpha) if B else 0
    if vD == 0:
        kind = "good"
    elif vA == 0:
        kind = "multiplicative"
    else:
        kind = "additive"
    return kind, k, Ar, Br, vD


def local_data(E: WeierstrassCurve, v: Place, q: int | None = None) -> LocalData:
    q = q or E.p
    p, a = _prime_power(q)
    if p != E.p:
        raise ValueError("q must be a power of the curve's characteristic")
    F = finite_field(p, a * v.deg)
    if v.infinite:
        A, B, _ = E.at_infinity()
        disc = pmod(padd(pscale(4, pmul(A, A, A)), pscale(27, pmul(B, B))), p)
        alpha = 0
    else:
        A, B, disc, alpha = list(E.A), list(E.B), E.disc(), v.alpha
    kind, _, Ar, Br, vD = _reduction(F, A, B, disc, alpha)
    s = F.cubic_char_sum(Ar, Br)
    Qv = F.Q
    if kind == "good":
        if s * s > 4 * Qv:
            raise AssertionError(f"Hasse bound violated at {v}")
        return LocalData(v, "good", -s, 0, 0)
    if kind == "multiplicative":
        smooth = Qv + s  # total affine + infinity - node = Qv + 1 + s - 1
        if smooth == Qv - 1:
            return LocalData(v, "split", 1, 1, vD)
        if smooth == Qv + 1:
            return LocalData(v, "nonsplit", -1, 1, vD)
        raise AssertionError(f"nodal fibre with {smooth} smooth points at {v}")
    if s != 0:
        raise AssertionError(f"cuspidal fibre with nonzero character sum at {v}")
    return LocalData(v, "additive", 0, 2, vD)


# ---------------------------------------------------------------- conductor over F_p


@dataclass(frozen=True)
class BadFactor:
    poly: tuple  # monic irreducible over F_p, low to high; () for infinity
    degree: int
    kind: str  # multiplicative | additive
    conductor_exponent: int
    v_disc_min: int


def _gf(poly) -> list:
    return [ZZ(c) for c in reversed(poly)]


def _val_gf(f: list[int], pi_gf, p: int) -> int:
    if not f:
        return INF
    g = gf_strip(_gf(f))
    v = 0
    while True:
        if gf_rem(g, pi_gf, p, ZZ):
            return v
        g = gf_quo(g, pi_gf, p, ZZ)
        v += 1


def _classify(vA: int, vB: int, vD: int) -> tuple[str, int, int]:
    k = min(vA // 4, vB // 6)
    vA, vD = vA - 4 * k, vD - 12 * k
    if vD == 0:
        return "good", 0, 0
    if vA == 0:
        return "multiplicative", 1, vD
    return "additive", 2, vD


def bad_factors(E: WeierstrassCurve) -> list[BadFactor]:
    """Bad places grouped by irreducible factors of the discriminant over F_p, plus infinity."""
    p = E.p
    out = []
    _, facs = gf_factor(_gf(E.disc()), p, ZZ)
    for g, _ in sorted(facs, key=lambda t: (len(t[0]), [int(c) for c in t[0]])):
        vA, vB, vD = (_val_gf(list(f), g, p) for f in (E.A, E.B, E.disc()))
        kind, f_exp, vDm = _classify(vA, vB, vD)
        if kind != "good":
            out.append(BadFactor(tuple(int(c) for c in reversed(g)), len(g) - 1, kind, f_exp, vDm))
    Ai, Bi, _ = E.at_infinity()
    Di = pmod(padd(pscale(4, pmul(Ai, Ai, Ai)), pscale(27, pmul(Bi, Bi))), p)
    s = [0, 1]
    vA, vB, vD = (_val_gf(f, _gf(s), p) for f in (Ai, Bi, Di))
    kind, f_exp, vDm = _classify(vA, vB, vD)
    if kind != "good":
        out.append(BadFactor((), 1, kind, f_exp, vDm))
    return out


def conductor_degree(E: WeierstrassCurve) -> int:
    return sum(b.degree * b.conductor_exponent for b in bad_factors(E))


def deg_omega_from_model(E: WeierstrassCurve) -> Fraction:
    """sum_v deg v * v(disc_min) / 12."""
    return Fraction(sum(b.degree * b.v_disc_min for b in bad_factors(E)), 12)


# ---------------------------------------------------------------- L-polynomial


@dataclass(frozen=True)
class LPolynomial:
    coeffs: tuple[int, ...]
    q: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def inverse_roots(self) -> np.ndarray:
        if self.degree == 0:
            return np.array([], dtype=complex)
        roots = np.roots(np.array(self.coeffs[::-1], dtype=float))
        return 1 / roots


@dataclass(frozen=True)
class LResult:
    L: LPolynomial
    conductor_deg: int
    local: list[LocalData]
    guard_coeffs: tuple[int, ...]  # coefficients beyond deg L, all expected to vanish


def _apply_factor(series: list[int], ld: LocalData, q: int) -> None:
    """series <- series / P_v(T^deg v), in place, truncated."""
    e, a = ld.place.deg, ld.a
    n = len(series)
    if ld.kind == "good":
        Q = q**e
        for i in range(n):
            if i >= e:
                series[i] += a * series[i - e]
            if i >= 2 * e:
                series[i] -= Q * series[i - 2 * e]
    elif ld.kind in ("split", "nonsplit"):
        for i in range(e, n):
            series[i] += a * series[i - e]


def _local_batch(args) -> list[LocalData]:
    E, vs, q = args
    return [local_data(E, v, q) for v in vs]


def l_polynomial(E: WeierstrassCurve, q: int | None = None, guard: int = 1, workers: int = 1) -> LResult:
    q = q or E.p
    p, _ = _prime_power(q)
    if p != E.p:
        raise ValueError("q must be a power of the curve's characteristic")
    N = conductor_degree(E)
    D = N - 4
    if D < 0:
        raise ValueError(f"conductor degree {N} < 4: L is not a polynomial for this curve")
    max_deg = max(1, D + guard)
    vs = places(q, max_deg, p)
    if workers > 1 and len(vs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [vs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_local_batch, [(E, c, q) for c in chunks]))
        by_place = {ld.place: ld for part in parts for ld in part}
        local = [by_place[v] for v in vs]
    else:
        local = _local_batch((E, vs, q))
    series = [1] + [0] * (max_deg)
    for ld in local:
        _apply_factor(series, ld, q)
    # bad places found by the scan must match the factorisation
    scanned = sum(ld.place.deg * ld.conductor_exponent for ld in local)
    expected = sum(
        b.degree * b.conductor_exponent for b in bad_factors(E) if b.degree <= max_deg or not b.poly
    )
    if _prime_power(q)[1] == 1 and scanned != expected:
        raise AssertionError(f"scanned conductor {scanned} != factorised {expected}")
    coeffs, tail = tuple(series[: D + 1]), tuple(series[D + 1:])
    if any(tail):
        raise AssertionError(f"L-series does not terminate at degree {D}: tail {tail}")
    return LResult(LPolynomial(coeffs, q), N, local, tail)


# ---------------------------------------------------------------- slopes and checks


def newton_slopes(L: LPolynomial) -> list[Fraction]:
    """Slopes of the Newton polygon (valuations normalised so v(q) = 1), ascending."""
    p, a = _prime_power(L.q)
    pts = [(i, Fraction(vp(b, p), a)) for i, b in enumerate(L.coeffs) if b != 0]
    if pts[0][0] != 0:
        raise ValueError("constant term vanishes")
    hull = [pts[0]]
    for pt in pts[1:]:
        hull.append(pt)
        while len(hull) >= 3:
            (x0, y0), (x1, y1), (x2, y2) = hull[-3:]
            if (y1 - y0) * (x2 - x0) >= (y2 - y0) * (x1 - x0):
                hull.pop(-2)
            else:
                break
    if hull[-1][0] != L.degree:
        raise ValueError("leading coefficient vanishes")
    slopes = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        s = (y1 - y0) / (x1 - x0)
        slopes.extend([s] * (x1 - x0))
    return slopes


@dataclass(frozen=True)
class CurveContext:
    deg_omega: int
    dim_A: int = 1
    g_C: int = 0
    dim_A0: int = 0


def dim_sha_from_slopes(L: LPolynomial, ctx: CurveContext) -> int:
    val = Fraction(ctx.deg_omega + ctx.dim_A * (ctx.g_C - 1) + ctx.dim_A0)
    val -= sum((1 - s for s in newton_slopes(L) if s < 1), Fraction(0))
    if val.denominator != 1:
        raise AssertionError(f"non-integral dim Sha {val}: slope pipeline inconsistent")
    return int(val)


@dataclass(frozen=True)
class LChecks:
    leading_one: bool
    functional_equation: bool
    slope_symmetry: bool
    slope_sum: bool
    root_modulus: bool
    max_root_error: float

    @property
    def ok(self) -> bool:
        return all((self.leading_one, self.functional_equation, self.slope_symmetry, self.slope_sum, self.root_modulus))


def check_l_polynomial(L: LPolynomial, tol: float = 1e-6) -> LChecks:
    b, q, D = L.coeffs, L.q, L.degree
    fe = True
    if D > 0:
        eps = Fraction(b[D], q**D)
        fe = eps in (1, -1) and all(b[D - i] == eps * b[i] * Fraction(q) ** (D - 2 * i) for i in range(D + 1))
    slopes = newton_slopes(L)
    sym = sorted(slopes) == sorted(2 - s for s in slopes)
    total = sum(slopes, Fraction(0)) == D
    err = 0.0
    if D > 0:
        err = float(np.max(np.abs(np.abs(L.inverse_roots()) - q) / q))
    return LChecks(b[0] == 1, fe, sym, total, err < tol, err)


# ---------------------------------------------------------------- bridges


@dataclass(frozen=True)
class SlopeReport:
    kind: str
    p: int
    q: int
    d: int
    L: LPolynomial
    conductor_deg: int
    slopes: list[Fraction]
    deg_omega: int
    dim_sha_slopes: int
    checks: LChecks

    def to_json(self, dim_sha_orbits: int | None = None) -> dict:
        out = {
            "kind": self.kind,
            "p": self.p,
            "d": self.d,
            "coeffs": list(self.L.coeffs),
            "q": self.q,
            "conductor_deg": self.conductor_deg,
            "slopes": [f"{s.numerator}/{s.denominator}" for s in self.slopes],
            "deg_omega": self.deg_omega,
            "dim_sha_slopes": self.dim_sha_slopes,
            "checks_ok": self.checks.ok,
        }
        if dim_sha_orbits is not None:
            out["dim_sha_orbits"] = dim_sha_orbits
            out["match"] = dim_sha_orbits == self.dim_sha_slopes
        return out


def slope_report(kind: str, p: int, d: int, q: int | None = None, workers: int = 1) -> SlopeReport:
    kind = normalize_kind(kind)
    q = q or p
    E = family_curve(kind, p, d, 1 if kind == "genus_g" else None)
    res = l_polynomial(E, q, workers=workers)
    deg, exact = deg_omega_value(kind, d, 1 if kind == "genus_g" else None)
    if not exact:
        raise ValueError("slope comparison needs an exact deg omega")
    ctx = CurveContext(deg)
    return SlopeReport(
        kind, p, q, d, res.L, res.conductor_deg, newton_slopes(res.L), deg,
        dim_sha_from_slopes(res.L, ctx), check_l_polynomial(res.L),
    )


@dataclass(frozen=True)
class PullbackRow:
    k: int
    level: int
    deg_omega: int
    dim_sha: int
    offset: int
    ratio: Fraction


def frobenius_pullback_check(kind: str, p: int, d: int, ks=range(4), q: int | None = None) -> list[PullbackRow]:
    """dim Sha along E_{p^k d}, using the L-function computed once at level d."""
    kind = normalize_kind(kind)
    if gcd(p, d) != 1:
        raise ValueError("need gcd(p, d) = 1")
    rep = slope_report(kind, p, d, q)
    extra = 1 if kind == "genus_g" else None
    offset = rep.dim_sha_slopes - rep.deg_omega
    rows = []
    for k in ks:
        level = p**k * d
        deg, exact = deg_omega_value(kind, level, extra)
        if not exact:
            raise ValueError(f"deg omega not exact at level {level}")
        dim = offset + deg
        rows.append(PullbackRow(k, level, deg, dim, dim - deg, Fraction(dim, deg)))
    return rows
