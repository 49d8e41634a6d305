"""Split a polymatroid into an a-reduced part plus a part that ignores ``a``.

``reduce(f, a)`` maximizes ``h(N∖a)`` over decompositions ``f = g + h`` with
``g`` and ``h`` polymatroids and ``h(aA) = h(A)``.  The variables are the
values of ``h`` on subsets of ``N∖a``; the extension to all of ``N`` is built
into the constraints on ``g``, so independence of ``a`` holds by
construction.  When several optimal ``h`` exist the vertex chosen by the
simplex pivot rule is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lp import LinearProgram, exact_lp_max
from .setfn import (
    CapError,
    PolymatroidError,
    SetFunction,
    b1_constraints,
    b2_constraints,
    check_axioms,
)

MAX_REDUCE_N = 7


def axiom_rows(n: int):
    """(B1) then (B2) rows as ``{mask: ±1}`` dicts over the 2**n subsets."""
    full = (1 << n) - 1
    for i in b1_constraints(n):
        yield {full: 1, full & ~(1 << i): -1}
    for a, b, K in b2_constraints(n):
        row: dict[int, int] = {}
        for m, c in ((K | 1 << a, 1), (K | 1 << b, 1), (K | 1 << a | 1 << b, -1), (K, -1)):
            row[m] = row.get(m, 0) + c
        yield row


@dataclass
class Decomposition:
    g: SetFunction
    h: SetFunction
    optimum: Fraction  # h(N∖a)


def _spread(sub: int, others: list[int]) -> int:
    """Map a mask over the reduced ground set back into N."""
    m = 0
    for j, i in enumerate(others):
        if sub >> j & 1:
            m |= 1 << i
    return m


def reduction_lp(f: SetFunction, a: int) -> LinearProgram:
    """The LP whose optimum is the largest h(N∖a) over admissible decompositions.

    Variable ``j`` is ``h`` on the subset of ``N∖a`` recorded in
    ``lp.variables[j]`` (a mask in ``N``); the empty set is fixed at zero.
    """
    n = f.n
    others = [i for i in range(n) if i != a]
    abit = 1 << a
    nsub = 1 << (n - 1)
    var_masks = [_spread(s, others) for s in range(1, nsub)]
    col = {m: j for j, m in enumerate(var_masks)}
    A_ub, b_ub = [], []

    # h is a polymatroid on N∖a:  -row·h <= 0
    for row in axiom_rows(n - 1):
        coefs = {}
        for sub, c in row.items():
            if sub:
                j = col[_spread(sub, others)]
                coefs[j] = coefs.get(j, 0) - c
        coefs = {j: c for j, c in coefs.items() if c}
        if coefs:
            A_ub.append(coefs)
            b_ub.append(0)

    # g = f - h~ is a polymatroid on N:  row·h~ <= row·f
    for row in axiom_rows(n):
        coefs = {}
        rhs = Fraction(0)
        for m, c in row.items():
            rhs += c * f.values[m]
            base = m & ~abit
            if base:
                j = col[base]
                coefs[j] = coefs.get(j, 0) + c
        coefs = {j: c for j, c in coefs.items() if c}
        if coefs:
            A_ub.append(coefs)
            b_ub.append(rhs)

    c = [0] * len(var_masks)
    c[col[f.ground.full & ~abit]] = 1
    return LinearProgram(c=c, A_ub=A_ub, b_ub=b_ub, variables=var_masks)


def _validate(f: SetFunction, a: int, max_n: int):
    if f.n > max_n:
        raise CapError(f"reduce supports n <= {max_n}, got n={f.n}")
    if not 0 <= a < f.n:
        raise IndexError(f"element index {a} out of range for n={f.n}")
    report = check_axioms(f)
    if not report.ok:
        v = report.violations[0]
        raise PolymatroidError(f"input is not a polymatroid: {v.kind}{v.data} = {v.value}")
    if f.singleton(a) == 0:
        raise PolymatroidError(f"reduction target degenerate: f({f.ground.labels[a]}) = 0")


def reduce(f: SetFunction, a: int, *, max_n: int = MAX_REDUCE_N) -> Decomposition:
    _validate(f, a, max_n)
    lp = reduction_lp(f, a)
    res = exact_lp_max(lp)
    abit = 1 << a
    hvals = [Fraction(0)] * (1 << f.n)
    for j, m in enumerate(lp.variables):
        hvals[m] = res.x[j]
        hvals[m | abit] = res.x[j]
    h = SetFunction(f.ground, hvals)
    return Decomposition(g=f - h, h=h, optimum=res.optimum)


def is_a_reduced(f: SetFunction, a: int, *, max_n: int = MAX_REDUCE_N) -> bool:
    return reduce(f, a, max_n=max_n).optimum == 0
