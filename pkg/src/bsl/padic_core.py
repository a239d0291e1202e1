"""Exact arithmetic in Galois rings GR(p^n, m) = W(F_{p^m}) / p^n.

Elements are coefficient vectors in the basis 1, xi, ..., xi^(m-1) where xi is
a Teichmuller root of unity of order p^m - 1.  Because xi is Teichmuller, the
Frobenius is the substitution xi -> xi^p, so no Witt vector arithmetic is
ever needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import factorint, isprime


class InsufficientPrecision(ArithmeticError):
    """The truncation level is too small to resolve the requested quantity."""


def vp(x: int, p: int, cap: int | None = None) -> int:
    """p-adic valuation of an integer; 0 maps to `cap` (or raises if no cap)."""
    if x == 0:
        if cap is None:
            raise ValueError("valuation of 0")
        return cap
    e = 0
    while x % p == 0:
        x //= p
        e += 1
        if cap is not None and e >= cap:
            return cap
    return e


# ---------------------------------------------------------------- F_p[x] helpers


def _polymulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], mod: int) -> list[int]:
    """a*b mod (f, mod) for monic f given low-to-high with len(f) = m + 1."""
    m = len(f) - 1
    prod = [0] * (2 * m - 1 if m else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k] % mod
        if c:
            for t in range(m):
                prod[k - m + t] -= c * f[t]
        prod[k] = 0
    return [c % mod for c in prod[:m]]


def _polypowmod(a: Sequence[int], e: int, f: Sequence[int], mod: int) -> list[int]:
    m = len(f) - 1
    result = [1] + [0] * (m - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, mod)
        base = _polymulmod(base, base, f, mod)
        e >>= 1
    return result


def _is_primitive_mod_p(f: Sequence[int], p: int) -> bool:
    """True if x has multiplicative order exactly p^m - 1 modulo (f, p).

    That forces F_p[x]/(f) to be a field, so f is irreducible as well.
    """
    m = len(f) - 1
    order = p**m - 1
    x = [0, 1] + [0] * (m - 2) if m > 1 else [(-f[0]) % p]
    one = [1] + [0] * (m - 1)
    if _polypowmod(x, order, f, p) != one:
        return False
    for q in factorint(order):
        if _polypowmod(x, order // q, f, p) == one:
            return False
    return True


@lru_cache(maxsize=None)
def primitive_polynomial(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically first monic primitive polynomial of degree m over F_p."""
    if m == 1:
        # x - g for the smallest primitive root g
        for g in range(1, p):
            if _is_primitive_mod_p((-g % p, 1), p):
                return ((-g) % p, 1)
    for tail in itertools.product(range(p), repeat=m):
        f = tail[::-1] + (1,)
        if f[0] == 0:
            continue
        if _is_primitive_mod_p(f, p):
            return f
    raise RuntimeError(f"no primitive polynomial found for p={p}, m={m}")


# ---------------------------------------------------------------- integer linear algebra mod p^n


def _solve_mod_pn(rows: list[list[int]], rhs: list[int], p: int, n: int) -> list[int]:
    """Solve a square system A x = b mod p^n where A is invertible mod p."""
    mod = p**n
    k = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(k):
        piv = next(r for r in range(c, k) if aug[r][c] % p)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, mod)
        aug[c] = [(v * inv) % mod for v in aug[c]]
        for r in range(k):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [(a - f * b) % mod for a, b in zip(aug[r], aug[c])]
    return [aug[r][k] for r in range(k)]


# ---------------------------------------------------------------- Galois rings


@dataclass(frozen=True)
class GaloisRing:
    """GR(p^n, m) presented as (Z/p^n)[x] / (modulus) with a Teichmuller root xi."""

    p: int
    n: int
    m: int
    modulus: tuple[int, ...]  # monic, low-to-high, length m + 1

    @property
    def pn(self) -> int:
        return self.p**self.n

    @property
    def q(self) -> int:
        """Size of the residue field."""
        return self.p**self.m

    @property
    def size(self) -> int:
        return self.p ** (self.n * self.m)

    def __repr__(self) -> str:
        return f"GR({self.p}^{self.n}, {self.m})"

    # construction of elements
    def element(self, coeffs: Iterable[int] | int) -> GaloisRingElement:
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        c = [int(v) % self.pn for v in coeffs]
        if len(c) > self.m:
            c = self._reduce(c)
        c += [0] * (self.m - len(c))
        return GaloisRingElement(self, tuple(c))

    def _reduce(self, c: list[int]) -> list[int]:
        m, f, mod = self.m, self.modulus, self.pn
        c = list(c)
        for k in range(len(c) - 1, m - 1, -1):
            v = c[k] % mod
            if v:
                for t in range(m):
                    c[k - m + t] -= v * f[t]
            c[k] = 0
        return [v % mod for v in c[:m]]

    def zero(self) -> GaloisRingElement:
        return GaloisRingElement(self, (0,) * self.m)

    def one(self) -> GaloisRingElement:
        return self.element(1)

    def xi(self) -> GaloisRingElement:
        if self.m == 1:
            return self.element(-self.modulus[0])
        return self.element([0, 1])

    def from_index(self, k: int) -> GaloisRingElement:
        """Element whose base-p^n digits are the coefficients (enumeration helper)."""
        c = []
        for _ in range(self.m):
            k, r = divmod(k, self.pn)
            c.append(r)
        return GaloisRingElement(self, tuple(c))

    def elements(self) -> Iterable[GaloisRingElement]:
        for k in range(self.size):
            yield self.from_index(k)

    def random(self, rng) -> GaloisRingElement:
        return GaloisRingElement(self, tuple(int(v) for v in rng.integers(0, self.pn, size=self.m)))

    def residue_elements(self) -> Iterable[tuple[int, ...]]:
        """All residue-field elements as coefficient tuples over F_p."""
        return itertools.product(range(self.p), repeat=self.m)

    # linear-algebra views (matrices act on coefficient column vectors)
    def mult_matrix(self, x: GaloisRingElement) -> list[list[int]]:
        cols = [(x * self.element([0] * k + [1])).coeffs for k in range(self.m)]
        return [[cols[k][r] for k in range(self.m)] for r in range(self.m)]

    def frobenius_matrix(self, power: int = 1) -> list[list[int]]:
        cols = [frobenius(self, self.element([0] * k + [1]), power).coeffs for k in range(self.m)]
        return [[cols[k][r] for k in range(self.m)] for r in range(self.m)]

    def lift(self, n: int) -> GaloisRing:
        """The ring GR(p^n', m) sharing the same residue polynomial."""
        return gr_construct(self.p, n, self.m)

    def cast(self, x: GaloisRingElement) -> GaloisRingElement:
        """Reduce (or lift coefficient-wise) an element of a compatible ring into this one."""
        if x.ring.p != self.p or x.ring.m != self.m:
            raise ValueError("incompatible Galois rings")
        return self.element(x.coeffs)


@dataclass(frozen=True)
class GaloisRingElement:
    ring: GaloisRing
    coeffs: tuple[int, ...]

    def _coerce(self, other) -> GaloisRingElement:
        if isinstance(other, GaloisRingElement):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, int):
            return self.ring.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        mod = self.ring.pn
        return GaloisRingElement(self.ring, tuple((a + b) % mod for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.pn
        return GaloisRingElement(self.ring, tuple((-a) % mod for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        r = self.ring
        return GaloisRingElement(r, tuple(_polymulmod(self.coeffs, o.coeffs, r.modulus, r.pn)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.ring
        return GaloisRingElement(r, tuple(_polypowmod(self.coeffs, e, r.modulus, r.pn)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return any(c % self.ring.p for c in self.coeffs)

    def inverse(self) -> GaloisRingElement:
        if not self.is_unit():
            raise ZeroDivisionError("not a unit")
        r = self.ring
        order = (r.q - 1) * r.q ** (r.n - 1)
        return self ** (order - 1)

    def residue(self) -> tuple[int, ...]:
        return tuple(c % self.ring.p for c in self.coeffs)

    def divide_by_p(self, e: int = 1) -> GaloisRingElement:
        """Exact division by p^e of an element divisible by p^e (result mod p^(n-e) lifted)."""
        pe = self.ring.p**e
        if any(c % pe for c in self.coeffs):
            raise ValueError("element not divisible by p^e")
        return GaloisRingElement(self.ring, tuple(c // pe for c in self.coeffs))

    def __repr__(self) -> str:
        if self.ring.m == 1:
            return f"{self.coeffs[0]} mod {self.ring.pn}"
        return f"{list(self.coeffs)} in {self.ring!r}"


# ---------------------------------------------------------------- operations


@lru_cache(maxsize=None)
def gr_construct(p: int, n: int, m: int) -> GaloisRing:
    """Build GR(p^n, m) with a modulus whose root is Teichmuller."""
    if not isprime(p):
        raise ValueError(f"p = {p} is not prime")
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    f0 = primitive_polynomial(p, m)
    pn = p**n
    if n == 1:
        return GaloisRing(p, 1, m, tuple(f0))
    # omega = x^(q^(n-1)) in (Z/p^n)[x]/(f0) is the Teichmuller lift of the root of f0.
    q = p**m
    omega = _polypowmod([0, 1] if m > 1 else [(-f0[0]) % pn], q ** (n - 1), f0, pn)
    # minimal polynomial of omega: solve sum_k a_k omega^k = -omega^m for a_0..a_{m-1}
    powers = [[1] + [0] * (m - 1)]
    for _ in range(m):
        powers.append(_polymulmod(powers[-1], omega, f0, pn))
    rows = [[powers[k][r] for k in range(m)] for r in range(m)]
    rhs = [(-powers[m][r]) % pn for r in range(m)]
    a = _solve_mod_pn(rows, rhs, p, n)
    ring = GaloisRing(p, n, m, tuple(a) + (1,))
    if (ring.xi() ** (q - 1)) != ring.one():
        raise AssertionError("Teichmuller modulus construction failed")
    return ring


def frobenius(r: GaloisRing, x: GaloisRingElement, power: int = 1) -> GaloisRingElement:
    """sigma^power(x), with sigma(sum c_i xi^i) = sum c_i xi^(p i)."""
    power %= r.m
    if power == 0:
        return x
    xi_pk = r.xi() ** (r.p**power)
    out = r.zero()
    acc = r.one()
    for c in x.coeffs:
        if c:
            out = out + acc * c
        acc = acc * xi_pk
    return out


def teichmuller(r: GaloisRing, a: Sequence[int] | int) -> GaloisRingElement:
    """Teichmuller lift of a residue-field element (given by its F_p coefficients)."""
    digits = [a] if isinstance(a, int) else list(a)
    y = r.element([c % r.p for c in digits])
    if y.is_zero():
        return y
    for _ in range(r.n):
        y = y ** r.q
    return y


def padic_ord(r: GaloisRing, x: GaloisRingElement, with_flag: bool = False):
    """Largest e <= n with x in p^e r.  With `with_flag`, also return saturation."""
    e = min(vp(c, r.p, r.n) for c in x.coeffs)
    if with_flag:
        return e, e >= r.n
    return e


def _log_terms(p: int, n: int) -> int:
    """Largest k that can contribute to log(1+z) mod p^n when ord(z) >= 1."""
    k = 1
    last = 1
    while k < 10 * (n + p) + 10:
        if k - vp(k, p) < n:
            last = k
        k += 1
    return last


def padic_log(r: GaloisRing, y: GaloisRingElement) -> GaloisRingElement:
    """p-adic logarithm of a 1-unit, exact mod p^n (p odd)."""
    if r.p == 2:
        raise ValueError("padic_log is only implemented for odd p")
    z = y - 1
    if padic_ord(r, z) < 1:
        raise ValueError("padic_log needs a 1-unit")
    kmax = _log_terms(r.p, r.n)
    guard = max(vp(k, r.p) for k in range(1, kmax + 1))
    big = r.lift(r.n + guard)
    zb = big.element(z.coeffs)
    total = big.zero()
    power = big.one()
    for k in range(1, kmax + 1):
        power = power * zb
        v = vp(k, r.p)
        unit = k // r.p**v
        term = power.divide_by_p(v) * pow(unit, -1, big.pn)
        total = total + term if k % 2 else total - term
    return r.element(total.coeffs)


@dataclass(frozen=True)
class OrdsCheck:
    lhs: int
    rhs: int
    equal: bool


def power_ords_check(r: GaloisRing, gamma: GaloisRingElement, e: int) -> OrdsCheck:
    """Compare ord(1 - gamma^(p^e)) with e + ord(log gamma)."""
    if padic_ord(r, gamma - 1) < 1:
        raise ValueError("gamma must be a 1-unit (Teichmuller roots of unity are excluded)")
    lhs = padic_ord(r, 1 - gamma ** (r.p**e))
    log_ord = padic_ord(r, padic_log(r, gamma))
    if lhs >= r.n or log_ord + e >= r.n:
        raise InsufficientPrecision(
            f"n = {r.n} cannot resolve ord(1 - gamma^(p^{e})) or ord(log gamma) + {e}"
        )
    rhs = e + log_ord
    return OrdsCheck(lhs, rhs, lhs == rhs)


# ---------------------------------------------------------------- kernels mod p^n

MAX_COLUMNS = 2000


@dataclass(frozen=True)
class LocalSmith:
    """Smith form over Z/p^n: valuations of the diagonal and the column transform."""

    valuations: tuple[int, ...]  # one per column, n meaning the entry vanished
    V: list[list[int]]  # columns of V span the solution parametrisation


def local_smith(M: Sequence[Sequence[int]], p: int, n: int, track: bool = False) -> LocalSmith:
    """Diagonalise M over Z/p^n with row and column operations.

    Pivots are chosen of minimal valuation, so every elimination step divides
    exactly.  The returned valuations are those of the diagonal entries.
    """
    mod = p**n
    A = [[int(v) % mod for v in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols > MAX_COLUMNS:
        raise MemoryError(f"matrix with {cols} columns exceeds the {MAX_COLUMNS}-column limit")
    V = [[int(i == j) for j in range(cols)] for i in range(cols)] if track else []
    vals = [n] * cols
    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            row = A[i]
            for j in range(t, cols):
                if row[j]:
                    v = vp(row[j], p, n)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            if track:
                for row in V:
                    row[t], row[j] = row[j], row[t]
        pv = p**v
        inv = pow(A[t][t] // pv, -1, mod)
        A[t] = [(x * inv) % mod for x in A[t]]
        # now A[t][t] == p^v; clear column t
        piv = A[t]
        for i in range(rows):
            if i != t and A[i][t]:
                f = A[i][t] // pv
                A[i] = [(x - f * y) % mod for x, y in zip(A[i], piv)]
        # clear row t using column operations
        for j in range(t + 1, cols):
            if piv[j]:
                f = piv[j] // pv
                for row in A:
                    if row[t]:
                        row[j] = (row[j] - f * row[t]) % mod
                if track:
                    for row in V:
                        row[j] = (row[j] - f * row[t]) % mod
        vals[t] = v
    return LocalSmith(tuple(vals), V)


def kernel_count_mod_pn(M: Sequence[Sequence[int]], p: int, n: int) -> int:
    """log_p of #{x in (Z/p^n)^c : M x = 0 mod p^n}."""
    if not M or not len(M[0]):
        return 0
    return sum(min(n, v) for v in local_smith(M, p, n).valuations)


def kernel_basis_mod_pn(M: Sequence[Sequence[int]], p: int, n: int) -> list[tuple[list[int], int]]:
    """Generators of the kernel as (vector, additive order exponent) pairs.

    The kernel is the direct sum of the cyclic groups generated by the vectors.
    """
    mod = p**n
    cols = len(M[0])
    sm = local_smith(M, p, n, track=True)
    gens = []
    for k, v in enumerate(sm.valuations):
        e = min(n, v)
        if e == 0:
            continue
        scale = p ** (n - e)
        vec = [(sm.V[r][k] * scale) % mod for r in range(cols)]
        gens.append((vec, e))
    return gens
