"""Exact-rational set functions over the subset lattice of a small ground set.

Subsets are integer bit masks: element ``i`` of the ground set is bit ``i``.
A :class:`SetFunction` stores one :class:`~fractions.Fraction` per mask.
Anything exposing ``n`` and ``value(mask)`` (for instance the lazy rank
oracle in :mod:`polymatroids.construct`) can be passed to the information
expressions and to :func:`check_axioms`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_N = 21
FULL_B2_SCAN_MAX_N = 14
DEFAULT_B2_SAMPLES = 100_000


class PolymatroidError(ValueError):
    """A mathematical precondition on the input function does not hold."""


class CapError(ValueError):
    """The requested ground set size exceeds a configured cap."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use int, str or Fraction")
    return Fraction(x)


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if len(self.labels) < 1:
            raise ValueError("ground set must have at least one element")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"element labels must be distinct: {self.labels}")

    @classmethod
    def of_size(cls, n: int) -> GroundSet:
        return cls(tuple(str(i) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, element) -> int:
        """Index of an element given by label, or by index if it is an int."""
        if isinstance(element, int) and not isinstance(element, bool):
            if not 0 <= element < self.n:
                raise IndexError(f"element index {element} out of range for n={self.n}")
            return element
        try:
            return self.labels.index(str(element))
        except ValueError:
            raise KeyError(f"unknown element {element!r}; known: {list(self.labels)}") from None

    def mask(self, elements: Iterable) -> int:
        m = 0
        for e in elements:
            m |= 1 << self.index(e)
        return m

    def members(self, mask: int) -> list[str]:
        return [self.labels[i] for i in range(self.n) if mask >> i & 1]


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in ascending order."""
    members = list(bits(mask))
    for code in range(1 << len(members)):
        s = 0
        for j, i in enumerate(members):
            if code >> j & 1:
                s |= 1 << i
        yield s


class SetFunction:
    """Immutable table of exact rationals indexed by subset mask."""

    __slots__ = ("ground", "values")

    def __init__(self, ground: GroundSet | int, values: Sequence, *, max_n: int = MAX_N):
        if isinstance(ground, int):
            ground = GroundSet.of_size(ground)
        if ground.n > max_n:
            raise CapError(f"ground set size n={ground.n} exceeds table cap {max_n}")
        vals = tuple(as_rational(v) for v in values)
        if len(vals) != 1 << ground.n:
            raise ValueError(f"expected {1 << ground.n} values for n={ground.n}, got {len(vals)}")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("SetFunction is immutable")

    @classmethod
    def from_callable(cls, ground: GroundSet | int, fn, **kw) -> SetFunction:
        if isinstance(ground, int):
            ground = GroundSet.of_size(ground)
        return cls(ground, [fn(m) for m in range(1 << ground.n)], **kw)

    @classmethod
    def zero(cls, ground: GroundSet | int) -> SetFunction:
        if isinstance(ground, int):
            ground = GroundSet.of_size(ground)
        return cls(ground, [0] * (1 << ground.n))

    @property
    def n(self) -> int:
        return self.ground.n

    def value(self, mask: int) -> Fraction:
        if not 0 <= mask < len(self.values):
            raise IndexError(f"subset mask {mask} out of range for n={self.n}")
        return self.values[mask]

    __call__ = value
    __getitem__ = value

    def singleton(self, i: int) -> Fraction:
        return self.values[1 << i]

    def is_zero(self) -> bool:
        return not any(self.values)

    def __eq__(self, other):
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self.ground == other.ground and self.values == other.values

    def __hash__(self):
        return hash((self.ground, self.values))

    def __add__(self, other: SetFunction) -> SetFunction:
        return add(self, other)

    def __sub__(self, other: SetFunction) -> SetFunction:
        _same_ground(self, other)
        return SetFunction(self.ground, [x - y for x, y in zip(self.values, other.values)])

    def __repr__(self):
        body = ", ".join(str(v) for v in self.values)
        return f"SetFunction(n={self.n}, [{body}])"


def _same_ground(f, g):
    if f.ground != g.ground:
        raise ValueError(f"mismatched ground sets: {f.ground.labels} vs {g.ground.labels}")


def evaluate(f, A: int) -> Fraction:
    return f.value(A)


def cond(f, A: int, B: int) -> Fraction:
    """f(A‖B) = f(A∪B) − f(B)."""
    return f.value(A | B) - f.value(B)


def mi(f, A: int, B: int) -> Fraction:
    """f(A,B) = f(A) + f(B) − f(A∪B)."""
    return f.value(A) + f.value(B) - f.value(A | B)


def cmi(f, A: int, B: int, C: int) -> Fraction:
    """f(A,B‖C) = f(A∪C) + f(B∪C) − f(A∪B∪C) − f(C)."""
    return f.value(A | C) + f.value(B | C) - f.value(A | B | C) - f.value(C)


def add(f: SetFunction, g: SetFunction) -> SetFunction:
    _same_ground(f, g)
    return SetFunction(f.ground, [x + y for x, y in zip(f.values, g.values)])


def scale(f: SetFunction, c) -> SetFunction:
    c = as_rational(c)
    if c < 0:
        raise ValueError(f"scalar must be non-negative, got {c}")
    return SetFunction(f.ground, [c * x for x in f.values])


def modular(ground: GroundSet | int, weights: Sequence) -> SetFunction:
    if isinstance(ground, int):
        ground = GroundSet.of_size(ground)
    w = [as_rational(x) for x in weights]
    if len(w) != ground.n:
        raise ValueError(f"need {ground.n} weights, got {len(w)}")
    vals = [Fraction(0)] * (1 << ground.n)
    for m in range(1, 1 << ground.n):
        low = (m & -m).bit_length() - 1
        vals[m] = vals[m & (m - 1)] + w[low]
    return SetFunction(ground, vals)


def uniform_matroid(ground: GroundSet | int, rank: int) -> SetFunction:
    """The rank function A ↦ min(|A|, rank)."""
    return SetFunction.from_callable(ground, lambda m: min(popcount(m), rank))


# -- Shannon axiom rows ------------------------------------------------------


def b1_constraints(n: int) -> Iterator[int]:
    """Elements i, one per final-marginal constraint f(i‖N∖i) ≥ 0."""
    return iter(range(n))


def b2_constraints(n: int) -> Iterator[tuple[int, int, int]]:
    """Triples (a, b, K) with a < b and K ⊆ N∖{a,b}, K ascending."""
    full = (1 << n) - 1
    for a, b in combinations(range(n), 2):
        rest = full & ~(1 << a) & ~(1 << b)
        for K in submasks(rest):
            yield a, b, K


def b1_value(f, i: int) -> Fraction:
    full = (1 << f.n) - 1
    return cond(f, 1 << i, full & ~(1 << i))


def b2_value(f, a: int, b: int, K: int) -> Fraction:
    return cmi(f, 1 << a, 1 << b, K)


def random_b2(n: int, rng: random.Random) -> tuple[int, int, int]:
    a, b = sorted(rng.sample(range(n), 2))
    K = rng.getrandbits(n) & ~(1 << a) & ~(1 << b)
    return a, b, K


@dataclass(frozen=True)
class Violation:
    kind: str  # "pointed", "B1" or "B2"
    data: tuple
    value: Fraction


@dataclass
class AxiomReport:
    pointed: bool
    b1_ok: bool
    b2_ok: bool
    violations: list[Violation] = field(default_factory=list)
    sampled: bool = False
    b2_rows_checked: int = 0

    @property
    def ok(self) -> bool:
        return self.pointed and self.b1_ok and self.b2_ok


def check_axioms(f, *, samples: int | None = None, seed: int = 0) -> AxiomReport:
    """Evaluate every (B1) row and the (B2) rows of ``f``.

    All B2 rows are scanned when ``n <= 14`` and ``samples`` is None.  Otherwise
    ``samples`` random B2 rows (default 100000) are drawn with a seeded RNG and
    the report is marked ``sampled``.
    """
    n = f.n
    violations = []
    empty = f.value(0)
    pointed = empty == 0
    if not pointed:
        violations.append(Violation("pointed", (), empty))
    b1_ok = pointed
    for i in b1_constraints(n):
        v = b1_value(f, i)
        if v < 0:
            b1_ok = False
            violations.append(Violation("B1", (i,), v))

    b2_ok = True
    sampled = samples is not None or n > FULL_B2_SCAN_MAX_N
    if sampled:
        rng = random.Random(seed)
        count = DEFAULT_B2_SAMPLES if samples is None else samples
        rows = (random_b2(n, rng) for _ in range(count))
    else:
        count = 0
        rows = b2_constraints(n)
    checked = 0
    for a, b, K in rows:
        checked += 1
        v = b2_value(f, a, b, K)
        if v < 0:
            b2_ok = False
            violations.append(Violation("B2", (a, b, K), v))
    return AxiomReport(pointed, b1_ok, b2_ok, violations, sampled, checked)


def is_polymatroid(f) -> bool:
    return check_axioms(f).ok


def is_monotone(f) -> bool:
    n = f.n
    for A in range(1 << n):
        fa = f.value(A)
        for i in range(n):
            if not A >> i & 1 and f.value(A | 1 << i) < fa:
                return False
    return True


def c_ratio(f, a: int) -> Fraction:
    """max over b of f(b)/f(a); includes b = a, so the result is at least 1."""
    fa = f.value(1 << a)
    if fa == 0:
        raise PolymatroidError(f"ratio undefined: f({a}) = 0")
    return max(f.value(1 << b) for b in range(f.n)) / fa


def depends_on(h, a: int) -> bool:
    bit = 1 << a
    for A in range(1 << h.n):
        if not A & bit and h.value(A | bit) != h.value(A):
            return True
    return False
