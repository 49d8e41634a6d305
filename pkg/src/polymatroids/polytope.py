"""Base polytope of a polymatroid: greedy vertices, membership and its box."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .setfn import SetFunction, as_rational, c_ratio

Point = tuple[Fraction, ...]
Box = tuple[tuple[Fraction, Fraction], ...]


def greedy_vertex(f: SetFunction, perm: Sequence[int]) -> Point:
    """Vertex with x[perm[j]] = f(perm[:j+1]) - f(perm[:j])."""
    n = f.n
    if sorted(perm) != list(range(n)):
        raise ValueError(f"invalid permutation of {n} elements: {list(perm)}")
    x = [Fraction(0)] * n
    prefix = 0
    for i in perm:
        x[i] = f.value(prefix | 1 << i) - f.value(prefix)
        prefix |= 1 << i
    return tuple(x)


def contains(f: SetFunction, p: Sequence) -> bool:
    """Membership in the base polytope by scanning all 2**n subset sums."""
    n = f.n
    if len(p) != n:
        raise ValueError(f"point has {len(p)} coordinates, ground set has {n}")
    x = [as_rational(v) for v in p]
    sums = [Fraction(0)] * (1 << n)
    for m in range(1, 1 << n):
        low = (m & -m).bit_length() - 1
        sums[m] = sums[m & (m - 1)] + x[low]
        if sums[m] > f.value(m):
            return False
    return sums[-1] == f.value((1 << n) - 1)


def bounding_box(f: SetFunction) -> Box:
    return tuple((Fraction(0), f.singleton(i)) for i in range(f.n))


def in_box(box: Box, p: Sequence) -> bool:
    return all(lo <= as_rational(v) <= hi for (lo, hi), v in zip(box, p))


def elongation(f: SetFunction, a: int) -> Fraction:
    """Longest box edge over the edge at ``a``."""
    box = bounding_box(f)
    side = box[a][1]
    if side == 0:
        # same error as c_ratio
        return c_ratio(f, a)
    return max(hi for _, hi in box) / side


def edge_direction(p: Point, q: Point) -> tuple[int, int] | None:
    """(i, j) when q - p is a positive multiple of e_i - e_j, else None."""
    diff = [b - a for a, b in zip(p, q)]
    nz = [i for i, v in enumerate(diff) if v]
    if len(nz) != 2 or diff[nz[0]] != -diff[nz[1]]:
        return None
    i, j = nz if diff[nz[0]] > 0 else nz[::-1]
    return i, j
