"""Double description method for pointed polyhedral cones ``{x : Hx >= 0}``.

Rays are integer vectors kept in primitive form; zero sets are bitsets over
the constraints inserted so far, stored as ``uint64`` words so the pairing
step is vectorized.  Two adjacency tests are available:

``"combinatorial"``
    no third ray's zero set contains the common zero set (numba kernel).
``"algebraic"``
    the common tight rows have rank ``d - 2`` over the rationals.

Both are exact and must agree; the combinatorial one is much faster.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd, lcm

import numba
import numpy as np

log = logging.getLogger(__name__)

_SAFE = 1 << 61


def rational_rank(rows) -> int:
    """Exact rank of an integer (or rational) matrix given as a list of rows."""
    work = [[Fraction(x) for x in r] for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        p = work[rank]
        for i in range(rank + 1, len(work)):
            r = work[i]
            if r[c]:
                t = r[c] / p[c]
                for j in range(c, ncols):
                    if p[j]:
                        r[j] -= t * p[j]
        rank += 1
        if rank == len(work):
            break
    return rank


def _inverse_columns(M: list[list[int]]) -> list[list[int]]:
    """Columns of M^{-1}, each scaled to a primitive integer vector."""
    d = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(M)]
    for c in range(d):
        piv = next(i for i in range(c, d) if aug[i][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(d):
            if i != c and aug[i][c]:
                t = aug[i][c]
                aug[i] = [x - t * y for x, y in zip(aug[i], aug[c])]
    cols = []
    for j in range(d):
        col = [aug[i][d + j] for i in range(d)]
        den = lcm(*(x.denominator for x in col))
        ints = [int(x * den) for x in col]
        g = 0
        for x in ints:
            g = gcd(g, x)
        cols.append([x // g for x in ints])
    return cols


def _popcount_rows(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def _primitive(v: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(np.abs(v), axis=-1, keepdims=True)
    g[g == 0] = 1
    return v // g


@numba.njit(cache=True, nogil=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@numba.njit(cache=True, nogil=True)
def _adjacent_pairs(Z, pos, neg, need):
    # combinatorial test: the pair is adjacent iff no third ray is zero on
    # every constraint where both p and q are zero
    m, W = Z.shape
    cap = 1024
    P = np.empty(cap, np.int64)
    Q = np.empty(cap, np.int64)
    k = 0
    inter = np.empty(W, np.uint64)
    for p in pos:
        for q in neg:
            cnt = 0
            for w in range(W):
                inter[w] = Z[p, w] & Z[q, w]
                cnt += _popcount64(inter[w])
            if cnt < need:
                continue
            adjacent = True
            for r in range(m):
                if r == p or r == q:
                    continue
                inside = True
                for w in range(W):
                    if Z[r, w] & inter[w] != inter[w]:
                        inside = False
                        break
                if inside:
                    adjacent = False
                    break
            if adjacent:
                if k == cap:
                    cap *= 2
                    P2 = np.empty(cap, np.int64)
                    Q2 = np.empty(cap, np.int64)
                    P2[:k] = P[:k]
                    Q2[:k] = Q[:k]
                    P = P2
                    Q = Q2
                P[k] = p
                Q[k] = q
                k += 1
    return P[:k], Q[:k]


class DoubleDescription:
    """Incremental ray representation of ``{x : H[i]·x >= 0 for inserted i}``."""

    def __init__(self, H, order=None, *, threads: int = 1, adjacency: str = "combinatorial"):
        H = np.asarray(H, dtype=np.int64)
        self.H = H
        self.m, self.d = H.shape
        self.order = list(range(self.m)) if order is None else list(order)
        if sorted(self.order) != list(range(self.m)):
            raise ValueError("order must be a permutation of the constraint indices")
        if adjacency not in ("combinatorial", "algebraic"):
            raise ValueError(f"unknown adjacency test {adjacency!r}")
        self.adjacency = adjacency
        self.threads = max(1, int(threads))
        self.words = (self.m + 63) // 64
        self.inserted: list[int] = []
        self.stats: list[tuple[int, int]] = []  # (constraint, ray count after insertion)
        self._initialize()

    # -- setup ---------------------------------------------------------------

    def _initialize(self):
        basis: list[int] = []
        for i in self.order:
            if rational_rank(self.H[basis + [i]].tolist()) == len(basis) + 1:
                basis.append(i)
            if len(basis) == self.d:
                break
        if len(basis) < self.d:
            raise ValueError("constraint matrix does not define a pointed cone")
        cols = _inverse_columns(self.H[basis].tolist())
        self.R = np.array(cols, dtype=np.int64)
        self.Z = np.zeros((self.d, self.words), dtype=np.uint64)
        self.pos_of: dict[int, int] = {}
        for i in basis:
            self._mark_inserted(i)
        # ray j is tight on every basis row except row j
        for j in range(self.d):
            for t, i in enumerate(basis):
                if t != j:
                    self._set_bit(self.Z[j], self.pos_of[i])
        self.pending = [i for i in self.order if i not in set(basis)]

    def _mark_inserted(self, i: int):
        self.pos_of[i] = len(self.inserted)
        self.inserted.append(i)

    @staticmethod
    def _set_bit(row: np.ndarray, pos: int):
        row[pos >> 6] |= np.uint64(1) << np.uint64(pos & 63)

    # -- main loop -----------------------------------------------------------

    def run(self) -> np.ndarray:
        for i in self.pending:
            self.insert(i)
        self.pending = []
        return self.R

    def insert(self, i: int):
        h = self.H[i]
        s = self.R @ h
        pos = np.flatnonzero(s > 0)
        neg = np.flatnonzero(s < 0)
        zer = np.flatnonzero(s == 0)
        new_R, new_Z = self._combine(s, pos, neg)
        self._mark_inserted(i)
        p = self.pos_of[i]
        keep = np.concatenate([pos, zer])
        keep.sort()
        Z_keep = self.Z[keep].copy()
        zmask = np.isin(keep, zer)
        Z_keep[zmask, p >> 6] |= np.uint64(1) << np.uint64(p & 63)
        if len(new_R):
            new_Z[:, p >> 6] |= np.uint64(1) << np.uint64(p & 63)
            self.R = np.concatenate([self.R[keep], new_R])
            self.Z = np.concatenate([Z_keep, new_Z])
        else:
            self.R = self.R[keep]
            self.Z = Z_keep
        self.stats.append((i, len(self.R)))
        log.debug("inserted row %d: %d rays (+%d -%d)", i, len(self.R), len(new_R), len(neg))

    def _combine(self, s, pos, neg):
        d = self.d
        if len(pos) == 0 or len(neg) == 0:
            return np.zeros((0, d), np.int64), np.zeros((0, self.words), np.uint64)
        bound = int(np.abs(s).max()) * int(np.abs(self.R).max()) * 2
        if bound >= _SAFE:
            raise OverflowError("ray coordinates grew beyond int64 range")
        chunks = np.array_split(pos, min(len(pos), self.threads * 4)) if self.threads > 1 else [pos]
        if self.threads > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                parts = list(ex.map(lambda c: self._pairs(c, neg), chunks))
        else:
            parts = [self._pairs(c, neg) for c in chunks]
        P = np.concatenate([p for p, _, _ in parts])
        Q = np.concatenate([q for _, q, _ in parts])
        inter = np.concatenate([z for _, _, z in parts])
        if len(P) == 0:
            return np.zeros((0, d), np.int64), np.zeros((0, self.words), np.uint64)
        sp = s[P][:, None]
        sq = s[Q][:, None]
        w = sp * self.R[Q] - sq * self.R[P]
        return _primitive(w), inter

    def _pairs(self, pos_chunk, neg):
        """Adjacent (p, q) pairs with p in ``pos_chunk``, q in ``neg``."""
        if self.adjacency == "combinatorial":
            P, Q = _adjacent_pairs(self.Z, np.ascontiguousarray(pos_chunk), neg, self.d - 2)
            return P, Q, self.Z[P] & self.Z[Q]
        need = self.d - 2
        Zn = self.Z[neg]
        out_p, out_q = [], []
        for p in pos_chunk:
            inter = self.Z[p] & Zn
            cand = np.flatnonzero(_popcount_rows(inter) >= need)
            ok = [c for c in cand if self._algebraic(inter[c])]
            out_p.extend([p] * len(ok))
            out_q.extend(neg[ok].tolist())
        P = np.array(out_p, dtype=np.int64)
        Q = np.array(out_q, dtype=np.int64)
        return P, Q, self.Z[P] & self.Z[Q]

    def _algebraic(self, z: np.ndarray) -> bool:
        rows = [self.H[self.inserted[t]] for t in range(len(self.inserted)) if int(z[t >> 6]) >> (t & 63) & 1]
        return rational_rank([r.tolist() for r in rows]) == self.d - 2

    def zero_sets(self) -> list[frozenset[int]]:
        """Zero sets of the current rays as sets of original constraint indices."""
        out = []
        for z in self.Z:
            out.append(frozenset(self.inserted[t] for t in range(len(self.inserted)) if int(z[t >> 6]) >> (t & 63) & 1))
        return out


def warmup():
    """Compile the numba kernel ahead of a timed run."""
    Z = np.zeros((3, 1), np.uint64)
    _adjacent_pairs(Z, np.array([0], np.int64), np.array([1], np.int64), 0)


def extreme_rays(H, order=None, *, threads: int = 1, adjacency: str = "combinatorial") -> np.ndarray:
    dd = DoubleDescription(H, order, threads=threads, adjacency=adjacency)
    return dd.run()
