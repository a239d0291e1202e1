"""Orbits of multiplication by p on finite signed carriers, and their words.

A carrier is a finite set with a partition into classes 0 and 1 and a
permutation (usually x -> p x).  Orbits on a product I x J are encoded by a
word over {u, l, m}: `u` for elements of I1 x J0, `l` for I0 x J1 and `m`
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

Element = Hashable


@dataclass(frozen=True)
class SignedIndexSet:
    """A carrier with a 0/1 partition and a permutation standing in for x -> p x.

    `moduli` describes the ambient group: (d,) for Z/d, (r, d) for Z/r x Z/d,
    and () for an explicit set with a user supplied permutation.
    """

    moduli: tuple[int, ...]
    elements: tuple
    labels: dict = field(repr=False)
    p: int
    action: dict = field(repr=False)

    def __post_init__(self):
        if set(self.labels) != set(self.elements) or len(self.elements) != len(set(self.elements)):
            raise ValueError("labels must tag every carrier element exactly once")
        if any(v not in (0, 1) for v in self.labels.values()):
            raise ValueError("partition labels must be 0 or 1")
        if set(self.action) != set(self.elements) or set(self.action.values()) != set(self.elements):
            raise ValueError("the action must be a bijection of the carrier")
        for m in self.moduli:
            if gcd(m, self.p) != 1:
                raise ValueError(f"p = {self.p} must be coprime to the modulus {m}")

    @property
    def ambient(self) -> str:
        if not self.moduli:
            return "explicit"
        return " x ".join(f"Z/{m}" for m in self.moduli)

    def __len__(self) -> int:
        return len(self.elements)

    def part(self, label: int) -> list:
        return [x for x in self.elements if self.labels[x] == label]

    def negate(self, x):
        if not self.moduli:
            raise ValueError("negation needs an arithmetic carrier")
        if len(self.moduli) == 1:
            return (-x) % self.moduli[0]
        return tuple((-c) % m for c, m in zip(x, self.moduli))


def _multiply(x, p: int, moduli: tuple[int, ...]):
    if len(moduli) == 1:
        return (p * x) % moduli[0]
    return tuple((p * c) % m for c, m in zip(x, moduli))


def arithmetic_carrier(
    moduli: Sequence[int], p: int, elements: Iterable, label: Callable[[object], int]
) -> SignedIndexSet:
    """Carrier inside Z/d or Z/r x Z/d acted on by multiplication by p."""
    moduli = tuple(moduli)
    for m in moduli:
        if gcd(m, p) != 1:
            raise ValueError(f"p = {p} divides the modulus {m}")
    elems = tuple(sorted(elements))
    labels = {x: label(x) for x in elems}
    action = {x: _multiply(x, p, moduli) for x in elems}
    return SignedIndexSet(moduli, elems, labels, p, action)


def explicit_carrier(elements: Sequence, labels: Sequence[int], perm: Sequence, p: int) -> SignedIndexSet:
    """Carrier given by explicit elements, labels and images under the action."""
    elems = tuple(elements)
    return SignedIndexSet((), elems, dict(zip(elems, labels)), p, dict(zip(elems, perm)))


def orbits(S: SignedIndexSet) -> list[list]:
    """Cycles of the action, sorted by minimal element and starting there."""
    seen = set()
    out = []
    for x in S.elements:  # elements are stored sorted
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = S.action[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = S.action[y]
        out.append(cyc)
    return out


@dataclass(frozen=True)
class PairedOrbit:
    """One orbit with its {u,l,m} word, running profile and invariants."""

    cycle: tuple
    word: str
    profile: tuple[int, ...]
    d_invariant: int
    height: int

    @property
    def base(self):
        return self.cycle[0]

    @property
    def size(self) -> int:
        return len(self.cycle)

    @property
    def n_u(self) -> int:
        return self.word.count("u")

    @property
    def n_l(self) -> int:
        return self.word.count("l")

    @property
    def degenerate(self) -> bool:
        """True unless the word contains both u and l."""
        return self.n_u == 0 or self.n_l == 0

    @classmethod
    def from_cycle(cls, cycle: Sequence, letter: Callable[[object], str]) -> PairedOrbit:
        word = "".join(letter(x) for x in cycle)
        return cls.from_word(tuple(cycle), word)

    @classmethod
    def from_word(cls, cycle: tuple, word: str) -> PairedOrbit:
        step = {"u": 1, "l": -1, "m": 0}
        prof = [0]
        for ch in word:
            prof.append(prof[-1] + step[ch])
        return cls(
            cycle=tuple(cycle),
            word=word,
            profile=tuple(prof),
            d_invariant=min(word.count("u"), word.count("l")),
            height=max(prof) - min(prof),
        )

    def rotated(self, k: int) -> PairedOrbit:
        k %= self.size
        return PairedOrbit.from_word(self.cycle[k:] + self.cycle[:k], self.word[k:] + self.word[:k])


def pair_letter(I: SignedIndexSet, J: SignedIndexSet) -> Callable[[tuple], str]:
    def letter(ij) -> str:
        a, b = I.labels[ij[0]], J.labels[ij[1]]
        if a == 1 and b == 0:
            return "u"
        if a == 0 and b == 1:
            return "l"
        return "m"

    return letter


def lettered_orbits(S: SignedIndexSet, letter: Callable[[object], str]) -> list[PairedOrbit]:
    """PairedOrbits of a single carrier whose letters come from `letter`."""
    return [PairedOrbit.from_cycle(c, letter) for c in orbits(S)]


def pair_orbits(I: SignedIndexSet, J: SignedIndexSet, restriction: str = "all") -> list[PairedOrbit]:
    """Orbits of the diagonal action on I x J (or on its anti-diagonal)."""
    if I.p != J.p:
        raise ValueError("I and J carry different primes")
    letter = pair_letter(I, J)
    if restriction == "all":
        elems = [(i, j) for i in I.elements for j in J.elements]
    elif restriction == "anti-diagonal":
        if I.moduli != J.moduli or not I.moduli:
            raise ValueError("anti-diagonal pairing needs J to be the negation carrier of I")
        jset = set(J.elements)
        elems = [(i, I.negate(i)) for i in I.elements]
        if any(j not in jset for _, j in elems):
            raise ValueError("J does not contain the negatives of I")
    else:
        raise ValueError(f"unknown restriction {restriction!r}")
    action = {(i, j): (I.action[i], J.action[j]) for i, j in elems}
    if set(action.values()) != set(action):
        raise ValueError("paired carrier is not stable under the action")
    carrier = SignedIndexSet((), tuple(elems), {x: 0 for x in elems}, I.p, action)
    return lettered_orbits(carrier, letter)


def sum_d(orbs: Iterable[PairedOrbit]) -> int:
    return sum(o.d_invariant for o in orbs)


def _frac_label(num: int, den: int) -> int:
    """Label 1 when num/den < 1/2, 0 when > 1/2 (used by Legendre style carriers)."""
    return 1 if 2 * num < den else 0


def legendre_index(d: int, p: int) -> SignedIndexSet:
    """Z/d minus {0, d/2}; class 1 below one half, class 0 above."""
    elems = [i for i in range(1, d) if 2 * i != d]
    return arithmetic_carrier((d,), p, elems, lambda i: _frac_label(i, d))


def fermat_characters(d: int, p: int) -> SignedIndexSet:
    """Triples (a0,a1,a2) in (Z/d)^3 summing to 0 with no zero entry.

    Class 0 collects fractional-part sum 2, class 1 fractional-part sum 1.
    """
    if gcd(d, p) != 1:
        raise ValueError("p must not divide d")
    if d < 2:
        raise ValueError("need d >= 2")
    elems = []
    for a0 in range(1, d):
        for a1 in range(1, d):
            a2 = (-a0 - a1) % d
            if a2:
                elems.append((a0, a1, a2))

    def label(a):
        s = sum(a)
        if s == 2 * d:
            return 0
        if s == d:
            return 1
        raise AssertionError("fractional parts must sum to 1 or 2")

    return arithmetic_carrier((d, d, d), p, elems, label)


def superelliptic_index(r: int, d: int, p: int) -> SignedIndexSet:
    """Pairs (a, b) in Z/r x Z/d, both nonzero, with <a/r> + <b/d> != 1.

    Class 0 when the sum exceeds 1, class 1 when it is below 1.
    """
    if gcd(p, r * d) != 1:
        raise ValueError("p must be coprime to r d")
    elems = [(a, b) for a in range(1, r) for b in range(1, d) if a * d + b * r != r * d]
    return arithmetic_carrier((r, d), p, elems, lambda ab: 0 if ab[0] * d + ab[1] * r > r * d else 1)


def orbits_json(orbs: Sequence[PairedOrbit], d: int, p: int) -> dict:
    def plain(x):
        if isinstance(x, tuple):
            return [plain(c) for c in x]
        return x

    return {
        "d": d,
        "p": p,
        "orbits": [
            {"cycle": [plain(x) for x in o.cycle], "word": o.word, "d": o.d_invariant, "ht": o.height}
            for o in orbs
        ],
    }
