"""Table-driven finite fields F_{p^m} with numpy-vectorised arithmetic.

Elements are integers 0 <= a < p^m encoding coefficient vectors in base p
(constant term first), so F_p sits inside as 0..p-1.  The defining polynomial
is the primitive modulus of GR(p, m) from padic_core, which makes x a
generator of the multiplicative group and gives log/exp tables directly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .padic_core import gr_construct

MAX_FIELD_SIZE = 2_000_000


class FiniteField:
    def __init__(self, p: int, m: int):
        Q = p**m
        if Q > MAX_FIELD_SIZE:
            raise MemoryError(f"F_{p}^{m} has {Q} elements, above the {MAX_FIELD_SIZE} cap")
        self.p, self.m, self.Q = p, m, Q
        f = gr_construct(p, 1, m).modulus
        self.modulus = f
        powers = p ** np.arange(m, dtype=np.int64)
        self._powers = powers
        codes = np.arange(Q, dtype=np.int64)
        self.digits = (codes[:, None] // powers[None, :]) % p
        # exp table by repeated multiplication by x (the root of the primitive modulus)
        exp = np.empty(Q - 1, dtype=np.int64)
        cur = [1] + [0] * (m - 1)
        for k in range(Q - 1):
            exp[k] = sum(c * int(w) for c, w in zip(cur, powers))
            if m == 1:
                cur = [(cur[0] * (-f[0])) % p]
            else:
                top = cur[-1]
                cur = [0] + cur[:-1]
                cur = [(c - top * fk) % p for c, fk in zip(cur, f[:m])]
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(Q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("modulus is not primitive")
        self.exp, self.log = exp, log
        chi = np.zeros(Q, dtype=np.int64)
        if p != 2:
            chi[1:] = np.where(log[1:] % 2 == 0, 1, -1)
        self.chi_table = chi
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        self._cube_digits = None

    def __repr__(self) -> str:
        return f"F_{self.p}^{self.m}"

    # arithmetic on codes (scalars or arrays)
    def encode(self, digits) -> np.ndarray:
        digits = np.asarray(digits) % self.p
        out = digits[..., 0].copy()
        for k in range(1, self.m):
            out += digits[..., k] * int(self._powers[k])
        return out

    def add(self, a, b):
        return self.encode(self.digits[a] + self.digits[b])

    def sub(self, a, b):
        return self.encode(self.digits[a] - self.digits[b])

    def neg(self, a):
        return self.encode(-self.digits[a])

    def mul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        prod = self.exp[(self.log[a] + self.log[b]) % (self.Q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of 0")
        return self.exp[(-self.log[a]) % (self.Q - 1)]

    def power(self, a, e: int):
        a = np.asarray(a)
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, self.exp[(self.log[a] * e) % (self.Q - 1)])

    def frob(self, a, k: int = 1):
        """a^(p^k)."""
        return self.power(a, self.p**k)

    def chi(self, a):
        """Quadratic character."""
        return self.chi_table[a]

    def const(self, c: int) -> int:
        return int(c) % self.p

    def eval_poly(self, coeffs, x):
        """Evaluate a polynomial with F_p coefficients (low to high) at codes x."""
        acc = np.zeros_like(np.asarray(x))
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), np.full_like(acc, c % self.p))
        return acc

    def elements(self) -> np.ndarray:
        return np.arange(self.Q, dtype=np.int64)

    # pure-Python scalar arithmetic (much cheaper than numpy for single elements)
    def sadd(self, a: int, b: int) -> int:
        p, out, w = self.p, 0, 1
        for _ in range(self.m):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * w
            w *= p
        return out

    def smul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.Q - 1)]

    def seval(self, coeffs, x: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = self.sadd(self.smul(acc, x), c % self.p)
        return acc

    def cubic_char_sum(self, A: int, B: int) -> int:
        """sum over x of chi(x^3 + A x + B)."""
        if self._cube_digits is None:
            self._cube_digits = self.digits[self.power(self.elements(), 3)]
        x = self.elements()
        ax = self.mul(np.full_like(x, A), x)
        val = self.encode(self._cube_digits + self.digits[ax] + self.digits[B])
        return int(self.chi_table[val].sum())


@lru_cache(maxsize=32)
def finite_field(p: int, m: int) -> FiniteField:
    return FiniteField(p, m)
