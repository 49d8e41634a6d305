"""The polymatroid cone: Shannon rows, extremality, extreme rays and λₙ."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd
from typing import Sequence

import numpy as np

from . import dd
from .lp import Infeasible, LinearProgram, exact_lp_max
from .setfn import (
    MAX_N,
    CapError,
    PolymatroidError,
    SetFunction,
    b1_constraints,
    b2_constraints,
    check_axioms,
    popcount,
)

MAX_ENUM_N = 5
TIGHTENED_PROVENANCE = "claimed without proof; reported only"


@dataclass(frozen=True)
class Row:
    kind: str  # "B1", "B2" or "pointed"
    data: tuple  # (i,) for B1, (a, b, K) for B2, () for pointed
    terms: tuple[tuple[int, int], ...]  # (mask, ±1)

    def evaluate(self, f) -> Fraction:
        return sum((c * f.value(m) for m, c in self.terms), Fraction(0))

    def dense(self, n: int) -> list[int]:
        v = [0] * (1 << n)
        for m, c in self.terms:
            v[m] += c
        return v


@dataclass(frozen=True)
class ShannonSystem:
    n: int
    rows: tuple[Row, ...]

    def count(self, kind: str) -> int:
        return sum(r.kind == kind for r in self.rows)

    def matrix(self) -> np.ndarray:
        return np.array([r.dense(self.n) for r in self.rows], dtype=np.int64)

    def inequality_matrix(self) -> np.ndarray:
        """(B1)/(B2) rows in coordinates f(A), A ≠ ∅ (f(∅) = 0 eliminated)."""
        return self.matrix()[: len(self.rows) - 1, 1:]


def shannon_system(n: int, *, max_n: int = MAX_N) -> ShannonSystem:
    """B1 rows by i, B2 rows by (a, b) then K ascending, then the pointed equality."""
    if not 2 <= n <= max_n:
        raise CapError(f"shannon_system needs 2 <= n <= {max_n}, got n={n}")
    full = (1 << n) - 1
    rows = []
    for i in b1_constraints(n):
        rows.append(Row("B1", (i,), ((full, 1), (full & ~(1 << i), -1))))
    for a, b, K in b2_constraints(n):
        A, B = 1 << a, 1 << b
        rows.append(Row("B2", (a, b, K), ((K | A, 1), (K | B, 1), (K | A | B, -1), (K, -1))))
    rows.append(Row("pointed", (), ((0, 1),)))
    return ShannonSystem(n, tuple(rows))


def _require_polymatroid(f):
    report = check_axioms(f)
    if not report.ok:
        v = report.violations[0]
        raise PolymatroidError(f"input is not a polymatroid: {v.kind}{v.data} = {v.value}")


def tight_set(f: SetFunction, system: ShannonSystem | None = None) -> list[int]:
    _require_polymatroid(f)
    system = system or shannon_system(f.n)
    return [i for i, r in enumerate(system.rows) if r.evaluate(f) == 0]


def is_extremal(f: SetFunction, system: ShannonSystem | None = None) -> bool:
    if f.is_zero():
        raise PolymatroidError("the zero function spans no ray")
    system = system or shannon_system(f.n)
    tight = tight_set(f, system)
    return dd.rational_rank([system.rows[i].dense(f.n) for i in tight]) == (1 << f.n) - 1


# -- enumeration ---------------------------------------------------------------


def insertion_order(system: ShannonSystem) -> list[int]:
    """B1 rows first, then B2 rows sorted by (|K|, a, b, K)."""
    ineq = [i for i, r in enumerate(system.rows) if r.kind != "pointed"]
    b1 = [i for i in ineq if system.rows[i].kind == "B1"]
    b2 = [i for i in ineq if system.rows[i].kind == "B2"]

    def key(i):
        a, b, K = system.rows[i].data
        return (popcount(K), a, b, K)

    return b1 + sorted(b2, key=key)


def canonical_ray(values: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector is not a ray")
    return tuple(int(x) // g for x in values)


def enumerate_rays(n: int, *, threads: int = 1, adjacency: str = "combinatorial") -> list[tuple[int, ...]]:
    """All extreme rays of the polymatroid cone on n elements, canonical and sorted.

    Each ray is the tuple of its 2**n values (f(∅) = 0 first).
    """
    if not 2 <= n <= MAX_ENUM_N:
        raise CapError(f"ray enumeration supports 2 <= n <= {MAX_ENUM_N}, got n={n}")
    system = shannon_system(n)
    H = system.inequality_matrix()
    R = dd.extreme_rays(H, insertion_order(system), threads=threads, adjacency=adjacency)
    rays = sorted(canonical_ray([0, *r.tolist()]) for r in R)
    return rays


def ray_function(ray: Sequence[int], n: int | None = None) -> SetFunction:
    if n is None:
        n = len(ray).bit_length() - 1
    return SetFunction(n, ray)


def permute_ray(ray: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    """The ray with element i renamed to perm[i]."""
    n = len(perm)
    out = [0] * len(ray)
    for m, v in enumerate(ray):
        pm = 0
        for i in range(n):
            if m >> i & 1:
                pm |= 1 << perm[i]
        out[pm] = v
    return tuple(out)


def lambda_from_rays(rays, n: int, *, element: int = 0) -> Fraction:
    """max over rays e with e(a) > 0 of max_b e(b) / e(a)."""
    abit = 1 << element
    best = None
    for e in rays:
        ea = e[abit]
        if ea > 0:
            r = Fraction(max(e[1 << b] for b in range(n)), ea)
            if best is None or r > best:
                best = r
    if best is None:
        raise ValueError("no ray is positive on the anchor element")
    return best


def lambda_n(n: int, rays=None, *, threads: int = 1, all_elements: bool = False) -> Fraction:
    """λₙ from the complete ray list, anchored at element 0.

    With ``all_elements`` every anchor is evaluated and required to agree.
    """
    if rays is None:
        rays = enumerate_rays(n, threads=threads)
    value = lambda_from_rays(rays, n)
    if all_elements:
        for a in range(1, n):
            other = lambda_from_rays(rays, n, element=a)
            if other != value:
                raise AssertionError(f"anchor {a} gives {other}, anchor 0 gives {value}")
    return value


def hadamard_bound(n: int) -> dict:
    if n < 2:
        raise ValueError("hadamard_bound needs n >= 2")
    return {
        "proved": 2 ** (2**n - 1),
        "tightened": 2 ** (2**n - n - 2),
        "tightened_provenance": TIGHTENED_PROVENANCE,
    }


# -- conic decomposition ---------------------------------------------------------


@dataclass
class ConicCombination:
    terms: list[tuple[int, Fraction]]  # (ray index, coefficient)

    def evaluate(self, rays, n: int) -> SetFunction:
        vals = [Fraction(0)] * (1 << n)
        for idx, mu in self.terms:
            for m, v in enumerate(rays[idx]):
                vals[m] += mu * v
        return SetFunction(n, vals)


def conic_decompose(f: SetFunction, rays) -> ConicCombination:
    """Non-negative coefficients with Σ μᵢ eᵢ = f, found by an exact LP."""
    _require_polymatroid(f)
    n = f.n
    size = 1 << n
    for r in rays:
        if len(r) != size:
            raise ValueError(f"ray of length {len(r)} does not match n={n}")
    A_eq = [[r[m] for r in rays] for m in range(1, size)]
    b_eq = list(f.values[1:])
    lp = LinearProgram(c=[0] * len(rays), A_eq=A_eq, b_eq=b_eq)
    try:
        res = exact_lp_max(lp)
    except Infeasible:
        raise PolymatroidError("no conic combination exists: ray list incomplete for this function") from None
    return ConicCombination([(i, mu) for i, mu in enumerate(res.x) if mu])


def symmetric_closure_ok(rays, n: int) -> bool:
    """Every coordinate permutation maps the ray set onto itself."""
    s = set(rays)
    for perm in permutations(range(n)):
        for r in rays:
            if permute_ray(r, perm) not in s:
                return False
    return True
