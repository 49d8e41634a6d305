"""The GF(2) linear-source polymatroid with a large singleton ratio.

For ``k >= 2`` the ground set is ``{a} ∪ X ∪ Y`` with ``|X| = k`` and
``|Y| = 2**k``, so ``n = 1 + k + 2**k``.  Element ``a`` holds one random bit
``r``; ``x_i`` holds the ``2**(i-1)`` bits ``r[i, J]`` for ``J ⊆ {1..i-1}``;
``y_K`` holds the single bit ``r + sum(r[j, K restricted below j] for j in K)``.
The entropy of a uniform linear source is the GF(2) rank of its vectors, so
the polymatroid is ``A ↦ rank(vectors owned by A)``.

Element order in the ground set: ``a``, ``x1..xk``, then ``y0..y{2**k-1}``
where ``y<i>`` is ``y_K`` for the ``K`` at position ``i`` of
:func:`subset_order`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .setfn import (
    CapError,
    GroundSet,
    SetFunction,
    check_axioms,
    cmi,
    cond,
    popcount,
)

MAX_BRUTE_DIM = 16
MAX_TABLE_K = 4


def gf2_rank(rows) -> int:
    """Rank over GF(2) of integer bit rows."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


@dataclass(frozen=True)
class ConstructionParams:
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"construction needs k >= 2, got k={self.k}")

    @property
    def n(self) -> int:
        return 1 + self.k + 2**self.k

    @property
    def dim(self) -> int:
        return 2**self.k

    # element indices in the ground set
    a = 0

    def x(self, i: int) -> int:
        """Index of x_i, 1 <= i <= k."""
        return i

    def y(self, i: int) -> int:
        """Index of y_i, 0 <= i < 2**k."""
        return self.k + 1 + i

    @property
    def X(self) -> int:
        return ((1 << self.k) - 1) << 1

    def X_at(self, i: int) -> int:
        """Ground-set mask of the i-th subset of X in the subset order."""
        return subset_order(self.k)[i] << 1

    def Y_upto(self, i: int) -> int:
        """Ground-set mask of Y_i = {y_0, ..., y_i}; empty for i < 0."""
        return ((1 << (i + 1)) - 1) << (self.k + 1)


@lru_cache(maxsize=None)
def subset_order(k: int) -> tuple[int, ...]:
    """All subsets of {1..k} (bit j-1 for j) with no earlier subset contained in a later one.

    Sorted by decreasing size, ties by decreasing mask, so X comes first and
    the empty set last.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    return tuple(sorted(range(1 << k), key=lambda m: (-popcount(m), -m)))


@dataclass(frozen=True)
class LinearSource:
    ground: GroundSet
    dim: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.ground.n:
            raise ValueError("one row list per element is required")
        for vecs in self.rows:
            for v in vecs:
                if v == 0 or v >> self.dim:
                    raise ValueError(f"vector {v:#x} is zero or exceeds dimension {self.dim}")

    @property
    def n(self) -> int:
        return self.ground.n

    def vectors(self, A: int) -> list[int]:
        out = []
        i = 0
        while A:
            if A & 1:
                out.extend(self.rows[i])
            A >>= 1
            i += 1
        return out


def _bit(i: int, J: int) -> int:
    """Ambient coordinate of r[i, J]; coordinate 0 is r."""
    return 1 << (2 ** (i - 1) + J)


def build_source(params: ConstructionParams) -> LinearSource:
    k = params.k
    order = subset_order(k)
    labels = ["a"] + [f"x{i}" for i in range(1, k + 1)] + [f"y{i}" for i in range(2**k)]
    rows: list[tuple[int, ...]] = [(1,)]
    for i in range(1, k + 1):
        rows.append(tuple(_bit(i, J) for J in range(1 << (i - 1))))
    for K in order:
        v = 1
        for j in range(1, k + 1):
            if K >> (j - 1) & 1:
                v ^= _bit(j, K & ((1 << (j - 1)) - 1))
        rows.append((v,))
    return LinearSource(GroundSet(tuple(labels)), params.dim, tuple(rows))


def rank_value(src: LinearSource, A: int) -> int:
    return gf2_rank(src.vectors(A))


def brute_entropy(src: LinearSource, A: int) -> Fraction:
    """log2 of the number of distinct values A's bits take over all 2**dim assignments."""
    if src.dim > MAX_BRUTE_DIM:
        raise CapError(f"ambient dimension {src.dim} exceeds brute-force limit {MAX_BRUTE_DIM}")
    vecs = src.vectors(A)
    seen = set()
    for r in range(1 << src.dim):
        seen.add(tuple(popcount(v & r) & 1 for v in vecs))
    count = len(seen)
    if count & (count - 1):
        raise ValueError(f"{count} distinct projections: entropy is not an integer")
    return Fraction(count.bit_length() - 1)


class RankOracle:
    """Lazy set function A ↦ rank_value(src, A) with memoisation."""

    def __init__(self, src: LinearSource):
        self.src = src
        self.ground = src.ground
        self._cache: dict[int, Fraction] = {}

    @property
    def n(self) -> int:
        return self.ground.n

    def value(self, mask: int) -> Fraction:
        v = self._cache.get(mask)
        if v is None:
            if not 0 <= mask < 1 << self.n:
                raise IndexError(f"subset mask {mask} out of range for n={self.n}")
            v = self._cache[mask] = Fraction(rank_value(self.src, mask))
        return v

    __call__ = value


def rank_function(src: LinearSource) -> SetFunction:
    return SetFunction.from_callable(src.ground, lambda m: rank_value(src, m))


def build_polymatroid(params: ConstructionParams, *, max_k: int = MAX_TABLE_K) -> SetFunction:
    if params.k > max_k:
        raise CapError(
            f"table too large: k={params.k} gives n={params.n}; dense tables allowed up to k={max_k}"
        )
    return rank_function(build_source(params))


def log2_bracket(n: int, frac_bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rationals lo <= log2(n) <= hi with hi - lo <= 2**-frac_bits + tiny rounding."""
    if n < 1:
        raise ValueError("log2 needs n >= 1")
    e = n.bit_length() - 1
    prec = frac_bits + 64
    one = 1 << prec

    def digits(round_up: bool) -> int:
        # fixed-point x = n / 2**e in [1, 2), scaled by 2**prec
        x = -((-n << prec) >> e) if round_up else (n << prec) >> e
        acc = 0
        for _ in range(frac_bits):
            sq = x * x
            x = -((-sq) >> prec) if round_up else sq >> prec
            acc <<= 1
            if x >= 2 * one:
                acc |= 1
                x = -((-x) >> 1) if round_up else x >> 1
        return acc

    scale = Fraction(1, 1 << frac_bits)
    lo = e + digits(False) * scale
    hi = e + (digits(True) + 1) * scale
    return lo, hi


@dataclass
class ConditionReport:
    k: int
    n: int
    cond_i: bool
    cond_ii: bool
    fX: Fraction
    fa: Fraction
    c_ratio: Fraction
    lower_bound: Fraction  # (2**k - 1) / k
    threshold_upper: Fraction  # n / (2 * lower bracket of log2 n) >= n / (2 log2 n)
    y_gains: bool  # each y_i adds at least f(a) to X given the earlier y
    chain_rule: bool
    tight_chain: bool

    @property
    def exceeds_threshold(self) -> bool:
        return self.c_ratio >= self.lower_bound > self.threshold_upper


def verify_conditions(params: ConstructionParams, f=None) -> ConditionReport:
    """Check Conditions (i)/(ii) and the chain of inequalities on the construction.

    ``f`` defaults to a lazy :class:`RankOracle`, so no table is built.
    """
    if f is None:
        f = RankOracle(build_source(params))
    k, a = params.k, 1 << params.a
    size = 2**k
    X = params.X
    fa = f.value(a)
    cond_i = all(cond(f, a, params.X_at(i) | 1 << params.y(i)) == 0 for i in range(size))
    cond_ii = all(cond(f, a, params.X_at(i) | params.Y_upto(i - 1)) == fa for i in range(1, size))

    y0 = 1 << params.y(0)
    terms = [cmi(f, X, 1 << params.y(i), params.Y_upto(i - 1)) for i in range(1, size)]
    y_gains = all(t >= fa for t in terms)
    chain_rule = all(
        cmi(f, X, params.Y_upto(i), y0) == sum(terms[:i]) for i in range(1, size)
    )
    fX = f.value(X)
    chain = [fX, cond(f, X, y0), cmi(f, X, params.Y_upto(size - 1), y0)]
    tight_chain = chain[0] >= chain[1] >= chain[2] >= size - 1 and fX == size - 1

    c = max(f.value(1 << b) for b in range(f.n)) / fa
    lo, _ = log2_bracket(params.n)
    return ConditionReport(
        k=k,
        n=params.n,
        cond_i=cond_i,
        cond_ii=cond_ii,
        fX=fX,
        fa=fa,
        c_ratio=c,
        lower_bound=Fraction(size - 1, k),
        threshold_upper=Fraction(params.n) / (2 * lo),
        y_gains=y_gains,
        chain_rule=chain_rule,
        tight_chain=tight_chain,
    )


def check_lazy_axioms(params: ConstructionParams, samples: int = 100_000, seed: int = 0):
    """(B1) in full plus ``samples`` random (B2) rows on the lazy rank oracle."""
    return check_axioms(RankOracle(build_source(params)), samples=samples, seed=seed)
