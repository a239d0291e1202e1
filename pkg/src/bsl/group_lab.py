"""Exhaustive and randomized checks of finite group statements used by the towers.

Groups are explicit multiplication tables on 0..n-1 with 0 the identity.  An
action of Gamma on G (by automorphisms), of Gamma on T and of G on T are stored
as permutation tables; every instance is validated before it is measured.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import divisors, mobius, n_order

from ._rng import child_rng

SUITES = ("orbits", "pointed", "towers", "all")


class IncompatibleAction(ValueError):
    pass


# ---------------------------------------------------------------- groups


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    table: tuple  # table[a][b] = a*b

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def inverses(self) -> tuple:
        return tuple(row.index(0) for row in self.table)

    def power(self, a: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x, k = self.table[x][a], k + 1
        return k

    def exponent(self) -> int:
        return math.lcm(*(self.element_order(a) for a in range(self.order)))

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in range(self.order) for b in range(a))

    def closure(self, gens) -> frozenset:
        seen, todo = {0}, [0]
        gens = list(gens)
        while todo:
            x = todo.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)


def _check_table(name: str, table) -> FiniteGroup:
    n = len(table)
    table = tuple(tuple(int(x) for x in row) for row in table)
    if any(sorted(row) != list(range(n)) for row in table) or table[0] != tuple(range(n)):
        raise ValueError(f"{name}: not a group table with identity 0")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise ValueError(f"{name}: not associative at {(a, b, c)}")
    return FiniteGroup(name, table)


def _mixed_radix(moduli) -> list[tuple]:
    return list(itertools.product(*(range(m) for m in moduli)))


def cyclic_product(moduli) -> FiniteGroup:
    moduli = tuple(int(m) for m in moduli) or (1,)
    elems = _mixed_radix(moduli)
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[tuple((x + y) % m for x, y, m in zip(a, b, moduli))] for b in elems] for a in elems]
    name = "x".join(f"Z{m}" for m in moduli)
    return FiniteGroup(name, tuple(tuple(r) for r in table))


def permutation_group(name: str, generators) -> FiniteGroup:
    """Group generated by permutations (tuples); element 0 is the identity."""
    deg = len(generators[0])
    ident = tuple(range(deg))
    elems, todo = [ident], [ident]
    seen = {ident}
    while todo:
        x = todo.pop(0)
        for g in generators:
            y = tuple(x[g[i]] for i in range(deg))
            if y not in seen:
                seen.add(y)
                elems.append(y)
                todo.append(y)
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[tuple(a[b[i]] for i in range(deg))] for b in elems] for a in elems]
    return _check_table(name, table)


def symmetric3() -> FiniteGroup:
    return permutation_group("S3", [(1, 0, 2), (1, 2, 0)])


def dihedral(n: int) -> FiniteGroup:
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return permutation_group(f"D{n}", [rot, ref])


def alternating4() -> FiniteGroup:
    return permutation_group("A4", [(1, 2, 0, 3), (1, 0, 3, 2)])


def symmetric4() -> FiniteGroup:
    return permutation_group("S4", [(1, 0, 2, 3), (1, 2, 3, 0)])


def quaternion8() -> FiniteGroup:
    # elements (sign, unit) with unit in 1, i, j, k
    units = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]
    index = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        s, u = units[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return _check_table("Q8", [[index[mul(a, b)] for b in elems] for a in elems])


def catalogue() -> list[FiniteGroup]:
    """Groups of order <= 24 used by the randomized suite."""
    out = [cyclic_product((m,)) for m in range(1, 13)]
    out += [cyclic_product(ms) for ms in ((2, 2), (2, 4), (2, 6), (3, 3), (2, 2, 2), (4, 4), (2, 2, 3))]
    out += [symmetric3(), dihedral(4), quaternion8(), dihedral(5), dihedral(6), alternating4(), symmetric4()]
    return out


def _generating_set(G: FiniteGroup) -> list[int]:
    by_order = sorted(range(1, G.order), key=lambda a: (-G.element_order(a), a))
    gens, span = [], frozenset({0})
    for a in by_order:
        if a not in span:
            gens.append(a)
            span = G.closure(gens)
        if len(span) == G.order:
            break
    return gens


def _extend(G: FiniteGroup, gens, images) -> tuple | None:
    phi = {0: 0}
    todo = [0]
    while todo:
        x = todo.pop()
        for g, h in zip(gens, images):
            y, w = G.table[x][g], G.table[phi[x]][h]
            if y in phi:
                if phi[y] != w:
                    return None
            else:
                phi[y] = w
                todo.append(y)
    if len(phi) != G.order or len(set(phi.values())) != G.order:
        return None
    return tuple(phi[x] for x in range(G.order))


@lru_cache(maxsize=None)
def automorphisms(G: FiniteGroup) -> tuple:
    """All automorphisms as permutation tuples, identity first."""
    gens = _generating_set(G)
    if not gens:
        return (tuple(range(G.order)),)
    pools = [[b for b in range(G.order) if G.element_order(b) == G.element_order(g)] for g in gens]
    auts = set()
    for images in itertools.product(*pools):
        phi = _extend(G, gens, images)
        if phi is not None:
            auts.add(phi)
    ident = tuple(range(G.order))
    return (ident,) + tuple(sorted(auts - {ident}))


def _compose(f, g) -> tuple:
    return tuple(f[g[x]] for x in range(len(g)))


def perm_order(f) -> int:
    k, x, ident = 1, f, tuple(range(len(f)))
    while x != ident:
        x, k = _compose(f, x), k + 1
    return k


# ---------------------------------------------------------------- actions


@dataclass(frozen=True)
class FiniteAction:
    G: FiniteGroup
    Gamma: FiniteGroup
    on_G: tuple  # on_G[gamma][g]
    on_T: tuple  # on_T[gamma][t]
    act: tuple  # act[g][t] = g t
    name: str = ""
    principal: bool = False

    @property
    def T_size(self) -> int:
        return len(self.act[0])

    def validate(self, transitive: bool = True) -> None:
        G, Gm, nT = self.G, self.Gamma, self.T_size
        if len(self.on_G) != Gm.order or len(self.on_T) != Gm.order or len(self.act) != G.order:
            raise IncompatibleAction("table sizes do not match the groups")
        for name, tab, size in (("Gamma on G", self.on_G, G.order), ("Gamma on T", self.on_T, nT)):
            if tab[0] != tuple(range(size)):
                raise IncompatibleAction(f"{name}: identity does not act trivially")
            for a, b in itertools.product(range(Gm.order), repeat=2):
                if tab[Gm.table[a][b]] != _compose(tab[a], tab[b]):
                    raise IncompatibleAction(f"{name}: not an action at {(a, b)}")
        for s in self.on_G:
            if any(s[G.table[a][b]] != G.table[s[a]][s[b]] for a in range(G.order) for b in range(G.order)):
                raise IncompatibleAction("Gamma does not act by automorphisms")
        if self.act[0] != tuple(range(nT)):
            raise IncompatibleAction("G on T: identity does not act trivially")
        for a, b in itertools.product(range(G.order), repeat=2):
            if self.act[G.table[a][b]] != _compose(self.act[a], self.act[b]):
                raise IncompatibleAction(f"G on T: not an action at {(a, b)}")
        for c in range(Gm.order):
            for g in range(G.order):
                for t in range(nT):
                    if self.on_T[c][self.act[g][t]] != self.act[self.on_G[c][g]][self.on_T[c][t]]:
                        raise IncompatibleAction(f"gamma(g t) != gamma(g) gamma(t) at {(c, g, t)}")
        if transitive and len({self.act[g][0] for g in range(G.order)}) != nT:
            raise IncompatibleAction("G is not transitive on T")


def _cyclic_powers(sigma, k: int) -> tuple:
    out = [tuple(range(len(sigma)))]
    for _ in range(k - 1):
        out.append(_compose(sigma, out[-1]))
    return tuple(out)


def left_cosets(G: FiniteGroup, H) -> list[frozenset]:
    cosets, seen = [], set()
    for x in range(G.order):
        if x not in seen:
            c = frozenset(G.table[x][h] for h in H)
            seen |= c
            cosets.append(c)
    return cosets


def coset_action(G: FiniteGroup, H, Gamma: FiniteGroup, on_G, cocycle, name: str = "") -> FiniteAction:
    """T = G/H with g(xH) = gxH and gamma(xH) = gamma(x) c_gamma H."""
    H = frozenset(H)
    cosets = left_cosets(G, H)
    where = {x: i for i, c in enumerate(cosets) for x in c}
    reps = [min(c) for c in cosets]
    act = tuple(tuple(where[G.table[g][r]] for r in reps) for g in range(G.order))
    on_T = tuple(tuple(where[G.table[on_G[c][r]][cocycle[c]]] for r in reps) for c in range(Gamma.order))
    return FiniteAction(G, Gamma, tuple(on_G), on_T, act, name, principal=len(H) == 1)


def cyclic_coset_action(G: FiniteGroup, H, sigma, k: int, c: int = 0, name: str = "") -> FiniteAction:
    """Gamma = Z/k acting through sigma, with gamma = sigma^j sending xH to sigma^j(x) c_j H."""
    Gamma = cyclic_product((k,))
    on_G = _cyclic_powers(sigma, k)
    coc = [0]
    for _ in range(k - 1):
        coc.append(G.table[sigma[coc[-1]]][c])
    return coset_action(G, H, Gamma, on_G, coc, name)


def _admissible_twists(G: FiniteGroup, H: frozenset, sigma, k: int) -> list[int]:
    """c with c^-1 sigma(H) c = H and c_k = sigma^{k-1}(c)...sigma(c)c in H."""
    inv = G.inverses
    sH = frozenset(sigma[h] for h in H)
    out = []
    for c in range(G.order):
        if frozenset(G.table[G.table[inv[c]][x]][c] for x in sH) != H:
            continue
        n, s = 0, tuple(range(G.order))
        for _ in range(k):
            n = G.table[s[c]][n]
            s = _compose(sigma, s)
        if n in H:
            out.append(c)
    return out


# ---------------------------------------------------------------- orbit inequalities


def _fixed(perm) -> list[int]:
    return [x for x, y in enumerate(perm) if x == y]


def _orbit_count_direct(perms, size: int) -> int:
    seen, count = set(), 0
    for x in range(size):
        if x in seen:
            continue
        count += 1
        todo = [x]
        seen.add(x)
        while todo:
            y = todo.pop()
            for p in perms:
                z = p[y]
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
    return count


@dataclass(frozen=True)
class GammaRow:
    gamma: int
    fix_G: int
    fix_T: int
    lower: Fraction | None  # max over t0 in T^gamma of |G^gamma|/|G_0^gamma|


@dataclass(frozen=True)
class OrbitInequalityResult:
    name: str
    t_orbits: int
    g_orbits: int
    rows: list[GammaRow]
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "t_orbits": self.t_orbits,
            "g_orbits": self.g_orbits,
            "per_gamma": [[r.gamma, r.fix_G, r.fix_T, None if r.lower is None else str(r.lower)] for r in self.rows],
            "checks": dict(sorted(self.checks.items())),
            "pass": self.passed,
        }


def orbit_inequality_check(act: FiniteAction, validate: bool = True) -> OrbitInequalityResult:
    if validate:
        act.validate()
    G, Gm, nT = act.G, act.Gamma, act.T_size
    rows = []
    lower_ok = upper_ok = free_ok = principal_ok = True
    for c in range(Gm.order):
        fG = set(_fixed(act.on_G[c]))
        fT = _fixed(act.on_T[c])
        lower = None
        for t0 in fT:
            G0 = [g for g in range(G.order) if act.act[g][t0] == t0]
            F = [g for g in range(G.order) if act.on_T[c][act.act[g][t0]] == act.act[g][t0]]
            free_ok &= len(F) == len(G0) * len(fT) and len(F) <= len(fG) * len(G0)
            ratio = Fraction(len(fG), len(fG.intersection(G0)))
            lower_ok &= ratio <= len(fT)
            lower = ratio if lower is None else max(lower, ratio)
        upper_ok &= len(fT) <= len(fG)
        if act.principal and fT:
            principal_ok &= len(fT) == len(fG)
        rows.append(GammaRow(c, len(fG), len(fT), lower))
    sum_G, sum_T = sum(r.fix_G for r in rows), sum(r.fix_T for r in rows)
    checks = {
        "burnside_integral": sum_G % Gm.order == 0 and sum_T % Gm.order == 0,
        "burnside_G": sum_G // Gm.order == _orbit_count_direct(act.on_G, G.order),
        "burnside_T": sum_T // Gm.order == _orbit_count_direct(act.on_T, nT),
        "orbit_inequality": sum_T <= sum_G,
        "fixed_upper": upper_ok,
        "fixed_lower": lower_ok,
        "stabilizer_counts": free_ok,
    }
    if act.principal:
        checks["principal_equality"] = principal_ok
    return OrbitInequalityResult(act.name, sum_T // Gm.order, sum_G // Gm.order, rows, checks)


def random_action(rng, groups=None) -> FiniteAction:
    """Transitive instance T = G/H with |G| <= 24 and |Gamma| <= 6."""
    groups = groups or catalogue()
    G = groups[int(rng.integers(len(groups)))]
    auts = [a for a in automorphisms(G) if perm_order(a) <= 6]
    sigma = auts[int(rng.integers(len(auts)))]
    o = perm_order(sigma)
    k = o * int(rng.integers(1, 6 // o + 1))
    for _ in range(20):
        gens = [int(x) for x in rng.integers(0, G.order, size=int(rng.integers(0, 3)))]
        H = G.closure(gens)
        twists = _admissible_twists(G, H, sigma, k)
        if twists:
            break
    else:
        H, twists = frozenset({0}), _admissible_twists(G, frozenset({0}), sigma, k)
    c = twists[int(rng.integers(len(twists)))]
    name = f"{G.name}/H{len(H)} sigma{list(sigma)} k={k} c={c}"
    return cyclic_coset_action(G, H, sigma, k, c, name)


def klein_s3_action() -> FiniteAction:
    """S3 = Aut((Z/2)^2) acting on G = T = (Z/2)^2; Gamma is not cyclic."""
    G = cyclic_product((2, 2))
    auts = automorphisms(G)
    index = {a: i for i, a in enumerate(auts)}
    Gm = _check_table("Aut(Z2xZ2)", [[index[_compose(a, b)] for b in auts] for a in auts])
    return coset_action(G, {0}, Gm, auts, [0] * len(auts), "S3 on Z2xZ2")


def z4_inversion_cases() -> list[OrbitInequalityResult]:
    """G = Z/4, Gamma = Z/2 by inversion, T = G/<2>, every admissible twist c."""
    G = cyclic_product((4,))
    sigma = tuple((-x) % 4 for x in range(4))
    H = G.closure([2])
    return [orbit_inequality_check(cyclic_coset_action(G, H, sigma, 2, c, f"Z4/<2> inversion c={c}"))
            for c in _admissible_twists(G, H, sigma, 2)]


def translation_action(G: FiniteGroup, sigma, k: int) -> FiniteAction:
    return cyclic_coset_action(G, {0}, sigma, k, 0, f"{G.name} translation")


# ---------------------------------------------------------------- pointed maps


@dataclass(frozen=True)
class PointedMapTable:
    A: tuple  # moduli of A
    G: tuple  # moduli of G
    f: tuple  # f[i] is the G-tuple image of the i-th element of A (mixed radix order)

    def __post_init__(self):
        if len(self.f) != math.prod(self.A):
            raise ValueError("table is not total on A")


@dataclass(frozen=True)
class PointedMapResult:
    pointed: bool
    degree2: bool
    antisymmetric: bool
    witnesses: dict  # relation -> first failing input
    conclusions: dict  # name -> bool

    @property
    def passed(self) -> bool:
        return all(self.conclusions.values())


def _elems(moduli) -> list[tuple]:
    return _mixed_radix(moduli)


def _combine(moduli, *terms):
    return tuple(sum(c * x[i] for c, x in terms) % m for i, m in enumerate(moduli))


def pointed_map_check(tbl: PointedMapTable, antisymmetric: bool | None = None) -> PointedMapResult:
    A, G = tbl.A, tbl.G
    elems = _elems(A)
    index = {e: i for i, e in enumerate(elems)}

    def f(x):
        return tuple(tbl.f[index[tuple(v % m for v, m in zip(x, A))]])

    def add(*xs):
        return tuple(sum(v) % m for v, m in zip(zip(*xs), A))

    witnesses = {}
    zero = tuple(0 for _ in A)
    pointed = all(v == 0 for v in f(zero))
    if not pointed:
        witnesses["pointed"] = zero
    degree2 = True
    for x1, x2, x3 in itertools.product(elems, repeat=3):
        val = _combine(G, (1, f(add(x1, x2, x3))), (-1, f(add(x1, x2))), (-1, f(add(x1, x3))),
                       (-1, f(add(x2, x3))), (1, f(x1)), (1, f(x2)), (1, f(x3)))
        if any(val):
            degree2 = False
            witnesses["degree2"] = (x1, x2, x3)
            break
    neg = lambda x: tuple((-v) % m for v, m in zip(x, A))  # noqa: E731
    anti = all(f(neg(x)) == _combine(G, (-1, f(x))) for x in elems)
    if not anti:
        witnesses["antisymmetric"] = next(x for x in elems if f(neg(x)) != _combine(G, (-1, f(x))))
    use_anti = anti if antisymmetric is None else antisymmetric
    conclusions = {}
    if pointed and degree2:
        c = math.lcm(*A)
        ns = range(0, 2 * c + 1)
        mult = lambda n, x: tuple((n * v) % m for v, m in zip(x, A))  # noqa: E731
        if use_anti:
            conclusions["f(nx)=nf(x)"] = all(f(mult(n, x)) == _combine(G, (n, f(x))) for n in ns for x in elems)
            conclusions["cf=0"] = all(not any(_combine(G, (c, f(x)))) for x in elems)
        else:
            conclusions["mumford_shape"] = all(
                f(mult(n, x)) == _combine(G, (n * (n + 1) // 2, f(x)), (n * (n - 1) // 2, f(neg(x))))
                for n in ns for x in elems
            )
    return PointedMapResult(pointed, degree2, anti, witnesses, conclusions)


SMALL_ABELIAN = ((1,), (2,), (3,), (4,), (2, 2), (5,), (6,))


@dataclass(frozen=True)
class ExhaustiveRow:
    A: tuple
    G: tuple
    tables: int
    degree2: int
    antisymmetric: int
    homomorphisms: int
    failures: int

    def to_json(self) -> dict:
        return {"A": list(self.A), "G": list(self.G), "tables": self.tables, "degree2": self.degree2,
                "antisymmetric": self.antisymmetric, "homomorphisms": self.homomorphisms, "failures": self.failures}


def exhaustive_pointed(A: tuple, G: tuple) -> ExhaustiveRow:
    """Every pointed table A -> G, filtered by the degree-2 relation with numpy."""
    ea, eg = _elems(A), _elems(G)
    na, ng = len(ea), len(eg)
    ia = {e: i for i, e in enumerate(ea)}
    addA = np.array([[ia[tuple((x + y) % m for x, y, m in zip(a, b, A))] for b in ea] for a in ea])
    negA = np.array([ia[tuple((-x) % m for x, m in zip(a, A))] for a in ea])
    gm = np.array(G)
    comps = np.array(eg)  # (ng, r)
    # all tables with f(0) = 0, as G-component arrays of shape (N, na, r)
    codes = np.array(list(itertools.product(range(ng), repeat=na - 1)), dtype=np.int64).reshape(ng ** (na - 1), na - 1)
    codes = np.concatenate([np.zeros((len(codes), 1), dtype=np.int64), codes], axis=1)
    F = comps[codes]
    i1, i2, i3 = (x.ravel() for x in np.meshgrid(np.arange(na), np.arange(na), np.arange(na), indexing="ij"))
    rel = (F[:, addA[addA[i1, i2], i3]] - F[:, addA[i1, i2]] - F[:, addA[i1, i3]] - F[:, addA[i2, i3]]
           + F[:, i1] + F[:, i2] + F[:, i3]) % gm
    deg2 = ~rel.any(axis=(1, 2))
    D = F[deg2]
    anti = ((D[:, negA] + D) % gm == 0).all(axis=(1, 2))
    hom = ((D[:, addA] - D[:, :, None] - D[:, None, :]) % gm == 0).all(axis=(1, 2, 3))
    # conclusions, checked on every degree-2 table
    c = math.lcm(*A)
    failures = 0
    for n in range(0, 2 * c + 1):
        nx = np.array([ia[tuple((n * v) % m for v, m in zip(a, A))] for a in ea])
        lhs = D[:, nx]
        mum = (n * (n + 1) // 2 * D + n * (n - 1) // 2 * D[:, negA] - lhs) % gm
        failures += int(mum.any(axis=(1, 2)).sum())
        lin = (n * D - lhs) % gm
        failures += int((lin.any(axis=(1, 2)) & anti).sum())
    failures += int((((c * D) % gm).any(axis=(1, 2)) & anti).sum())
    failures += int((~anti & hom).sum())  # homomorphisms are antisymmetric
    return ExhaustiveRow(A, G, len(F), int(deg2.sum()), int(anti.sum()), int(hom.sum()), failures)


def count_homomorphisms(A: tuple, G: tuple) -> int:
    """Independent count: prod over cyclic factors Z/a, Z/b of gcd(a, b)."""
    return math.prod(math.gcd(a, b) for a in A for b in G)


# ---------------------------------------------------------------- towers


@dataclass(frozen=True)
class TowerRow:
    e: int
    size: int  # orbit size of the Frobenius
    bound: float  # log e / log q (Kummer) or e / (log q / log p) (Artin-Schreier)
    ok: bool

    @property
    def margin(self) -> float:
        return self.size - self.bound


@dataclass(frozen=True)
class TowerTable:
    tower: str
    q: int
    rows: list[TowerRow]
    decomposition_ok: bool
    brute_ok: bool

    @property
    def passed(self) -> bool:
        return self.decomposition_ok and self.brute_ok and all(r.ok for r in self.rows)

    def to_json(self) -> dict:
        worst = min(self.rows, key=lambda r: r.margin) if self.rows else None
        return {
            "tower": self.tower,
            "q": self.q,
            "rows": len(self.rows),
            "min_margin": None if worst is None else round(worst.margin, 12),
            "min_margin_e": None if worst is None else worst.e,
            "decomposition_ok": self.decomposition_ok,
            "brute_ok": self.brute_ok,
            "pass": self.passed,
        }


def _prime_power(q: int) -> tuple[int, int]:
    from sympy import factorint

    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, a), = fac.items()
    return p, a


def _totients(n: int) -> list[int]:
    phi = list(range(n + 1))
    for i in range(2, n + 1):
        if phi[i] == i:
            for j in range(i, n + 1, i):
                phi[j] -= phi[j] // i
    return phi


def kummer_bounds(q: int, e_max: int = 10_000, brute_max: int = 400) -> TowerTable:
    """Orbit of an e-th root of unity under x -> x^q has size ord_e(q) >= log e / log q."""
    rows = []
    brute_ok = True
    for e in range(1, e_max + 1):
        if math.gcd(e, q) != 1:
            continue
        f = 1 if e == 1 else int(n_order(q, e))
        if e <= brute_max:  # orbit of 1 in Z/e under multiplication by q
            x, size = q % e, 1
            while x != 1 % e:
                x, size = (x * q) % e, size + 1
            brute_ok &= size == f
        rows.append(TowerRow(e, f, math.log(e) / math.log(q), q**f >= e))
    phi = _totients(e_max)
    decomposition = all(sum(phi[k] for k in divisors(d)) == d for d in range(1, e_max + 1))
    return TowerTable("kummer", q, rows, decomposition, brute_ok)


def _primitive_count(p: int, e: int) -> int:
    """#{alpha : F_p(alpha) = F_{p^e}} by Moebius inversion over subfields."""
    return sum(int(mobius(e // k)) * p**k for k in divisors(e))


def _brute_as(p: int, a: int, e: int) -> tuple[int, list[int]]:
    """Elements of exact degree e in F_{p^e} and their q-Frobenius orbit sizes, by enumeration."""
    from .finite_field import finite_field

    F = finite_field(p, e)
    Q1 = F.Q - 1
    proper = [k for k in divisors(e) if k < e]
    count, sizes = 0, set()
    for x in range(1, F.Q):
        lg = int(F.log[x])
        if any((lg * (p**k - 1)) % Q1 == 0 for k in proper):
            continue
        count += 1
        s, y = 1, (lg * p**a) % Q1
        while y != lg:
            y, s = (y * p**a) % Q1, s + 1
        sizes.add(s)
    if e == 1:
        count += 1  # the zero element generates F_p as well
        sizes.add(1)
    return count, sorted(sizes)


def artin_schreier_bounds(q: int, e_max: int = 10_000, brute_field_max: int = 5000, decomposition_max: int = 600) -> TowerTable:
    """Orbit of alpha with F_p(alpha) = F_{p^e} under x -> x^q has size e/gcd(e, a) >= e/a."""
    p, a = _prime_power(q)
    rows = [TowerRow(e, e // math.gcd(e, a), e / a, a * (e // math.gcd(e, a)) >= e) for e in range(1, e_max + 1)]
    brute_ok = True
    e = 1
    while p**e <= brute_field_max:
        count, sizes = _brute_as(p, a, e)
        brute_ok &= count == _primitive_count(p, e) and sizes == [e // math.gcd(e, a)]
        e += 1
    prim = {k: _primitive_count(p, k) for k in range(1, decomposition_max + 1)}
    decomposition = all(sum(prim[k] for k in divisors(d)) == p**d for d in range(1, decomposition_max + 1))
    return TowerTable("artin_schreier", q, rows, decomposition, brute_ok)


def tower_orbit_bounds(tower: str, q: int, e_max: int = 10_000) -> TowerTable:
    tower = tower.lower().replace("-", "_")
    if tower == "kummer":
        return kummer_bounds(q, e_max)
    if tower in ("artin_schreier", "as"):
        return artin_schreier_bounds(q, e_max)
    raise ValueError(f"unknown tower {tower!r}; choose kummer or artin_schreier")


# ---------------------------------------------------------------- suites


def suite_orbits(seed: int, n_random: int = 500) -> dict:
    fixed = [orbit_inequality_check(klein_s3_action())] + z4_inversion_cases()
    for G in (cyclic_product((6,)), symmetric3(), quaternion8()):
        for sigma in automorphisms(G)[:3]:
            fixed.append(orbit_inequality_check(translation_action(G, sigma, perm_order(sigma))))
    groups = catalogue()
    randoms = [orbit_inequality_check(random_action(child_rng(seed, "orbits", i), groups)) for i in range(n_random)]
    strict = sum(1 for r in randoms if r.t_orbits < r.g_orbits)
    return {
        "fixed": [r.to_json() for r in fixed],
        "random_instances": len(randoms),
        "random_failures": [r.to_json() for r in randoms if not r.passed],
        "random_strict": strict,
        "pass": all(r.passed for r in fixed) and all(r.passed for r in randoms),
    }


def suite_pointed() -> dict:
    rows = [exhaustive_pointed(A, G) for A in SMALL_ABELIAN for G in SMALL_ABELIAN]
    homs_ok = all(r.homomorphisms == count_homomorphisms(r.A, r.G) for r in rows)
    return {
        "pairs": [r.to_json() for r in rows],
        "homomorphism_counts_ok": homs_ok,
        "pass": homs_ok and all(r.failures == 0 for r in rows),
    }


def suite_towers(e_max: int = 10_000) -> dict:
    tables = [kummer_bounds(q, e_max) for q in (2, 3, 4, 5, 7, 9)]
    tables += [artin_schreier_bounds(q, e_max) for q in (2, 3, 4, 8, 9)]
    return {"tables": [t.to_json() for t in tables], "pass": all(t.passed for t in tables)}


def run_suite(suite: str, seed: int, n_random: int = 500, e_max: int = 10_000) -> dict:
    suite = suite.lower()
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    out = {"suite": suite, "seed": seed}
    if suite in ("orbits", "all"):
        out["orbits"] = suite_orbits(seed, n_random)
    if suite in ("pointed", "all"):
        out["pointed"] = suite_pointed()
    if suite in ("towers", "all"):
        out["towers"] = suite_towers(e_max)
    out["pass"] = all(v["pass"] for k, v in out.items() if isinstance(v, dict))
    return out
