"""Exact rational simplex method (two-phase, Bland's rule).

Solves ``max c·x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``
over :class:`~fractions.Fraction`.  The tableau is kept in compact (Tucker)
form: one row per basic variable, one column per non-basic variable, so the
work per pivot is rows × structural variables rather than rows × all columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


class LPError(ArithmeticError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LinearProgram:
    """Dense LP data; rows are sequences of rationals (or dicts column -> value)."""

    c: Sequence
    A_ub: list = field(default_factory=list)
    b_ub: list = field(default_factory=list)
    A_eq: list = field(default_factory=list)
    b_eq: list = field(default_factory=list)
    variables: list = field(default_factory=list)  # optional labels

    @property
    def num_vars(self) -> int:
        return len(self.c)


@dataclass
class LPResult:
    optimum: Fraction
    x: list[Fraction]
    pivots: int


def _sparse(row, nvars: int) -> dict[int, Fraction]:
    if isinstance(row, dict):
        items = row.items()
    else:
        if len(row) != nvars:
            raise ValueError(f"constraint row has {len(row)} entries, expected {nvars}")
        items = enumerate(row)
    return {j: Fraction(v) for j, v in items if v}


class _Tableau:
    # Variables are labelled 0..nvars-1 (structural), then one label per row
    # (slack or artificial).  rows[i] maps non-basic label -> coefficient of
    # x_basic[i] = rhs[i] - sum(coef * x_label).

    def __init__(self, rows, rhs, basis, nonbasic):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.nonbasic = nonbasic
        self.pivots = 0

    def objective_row(self, cost: dict[int, Fraction]):
        """Reduced costs d and constant z0 with z = z0 + sum(d[j] x_j) over non-basics."""
        d = {j: cost.get(j, ZERO) for j in self.nonbasic}
        z0 = ZERO
        for i, b in enumerate(self.basis):
            cb = cost.get(b)
            if cb:
                z0 += cb * self.rhs[i]
                for j, a in self.rows[i].items():
                    d[j] -= cb * a
        return d, z0

    def pivot(self, r: int, s: int, d: dict, z0: Fraction):
        row = self.rows[r]
        piv = row[s]
        leaving = self.basis[r]
        # new row for entering variable s
        new = {j: a / piv for j, a in row.items() if j != s}
        new[leaving] = 1 / piv
        new_rhs = self.rhs[r] / piv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            a = other.pop(s, None)
            if a is None:
                continue
            for j, v in new.items():
                w = other.get(j, ZERO) - a * v
                if w:
                    other[j] = w
                else:
                    other.pop(j, None)
            self.rhs[i] -= a * new_rhs
        self.rows[r] = new
        self.rhs[r] = new_rhs
        ds = d.pop(s)
        for j, v in new.items():
            w = d.get(j, ZERO) - ds * v
            d[j] = w
        z0 += ds * new_rhs
        self.basis[r] = s
        self.nonbasic.remove(s)
        self.nonbasic.add(leaving)
        self.pivots += 1
        return z0

    def optimize(self, cost: dict[int, Fraction]):
        d, z0 = self.objective_row(cost)
        while True:
            entering = None
            for j in sorted(self.nonbasic):
                if d.get(j, ZERO) > 0:
                    entering = j
                    break
            if entering is None:
                return z0
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded")
            z0 = self.pivot(best[1], entering, d, z0)


def exact_lp_max(lp: LinearProgram) -> LPResult:
    """Optimal value and vertex of ``lp``; raises Infeasible / Unbounded."""
    nvars = lp.num_vars
    if len(lp.A_ub) != len(lp.b_ub) or len(lp.A_eq) != len(lp.b_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")
    rows, rhs, basis, artificial = [], [], [], set()
    label = nvars
    for A, b, is_eq in [(lp.A_ub, lp.b_ub, False), (lp.A_eq, lp.b_eq, True)]:
        for row, bi in zip(A, b):
            coefs = _sparse(row, nvars)
            bi = Fraction(bi)
            if is_eq or bi < 0:
                # artificial basic variable; for a negated inequality the
                # slack stays behind as a non-basic column with coefficient -1
                if bi < 0:
                    coefs = {j: -a for j, a in coefs.items()}
                    bi = -bi
                    if not is_eq:
                        coefs[label] = Fraction(-1)
                        label += 1
                artificial.add(label)
            rows.append(coefs)
            rhs.append(bi)
            basis.append(label)
            label += 1
    structural_and_slack = set(range(label)) - set(basis)
    tab = _Tableau(rows, rhs, basis, structural_and_slack)

    if artificial:
        z = tab.optimize({j: Fraction(-1) for j in artificial})
        if z < 0:
            raise Infeasible("no feasible point")
        # drive remaining artificials (at zero level) out of the basis
        for i in range(len(tab.rows)):
            if tab.basis[i] not in artificial:
                continue
            cand = sorted(j for j in tab.rows[i] if j not in artificial)
            if cand:
                d = {j: ZERO for j in tab.nonbasic}
                tab.pivot(i, cand[0], d, ZERO)
        keep = [i for i, b in enumerate(tab.basis) if b not in artificial]
        tab.rows = [{j: a for j, a in tab.rows[i].items() if j not in artificial} for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        tab.nonbasic -= artificial

    cost = {j: Fraction(v) for j, v in enumerate(lp.c) if v}
    optimum = tab.optimize(cost)
    x = [ZERO] * nvars
    for i, b in enumerate(tab.basis):
        if b < nvars:
            x[b] = tab.rhs[i]
    return LPResult(optimum, x, tab.pivots)
