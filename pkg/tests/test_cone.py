import json
import random
from fractions import Fraction
from math import comb, gcd
from pathlib import Path

import numpy as np
import pytest

from conftest import random_conic, rays_for
from oracles import brute_force_rays
from polymatroids import dd
from polymatroids.cone import (
    conic_decompose,
    enumerate_rays,
    hadamard_bound,
    is_extremal,
    lambda_n,
    permute_ray,
    shannon_system,
    symmetric_closure_ok,
    tight_set,
)
from polymatroids.fileio import dumps_rays, read_rays
from polymatroids.reduce import reduce
from polymatroids.setfn import (
    CapError,
    PolymatroidError,
    SetFunction,
    b1_value,
    b2_value,
    is_polymatroid,
    modular,
    uniform_matroid,
)

DATA = Path(__file__).parent / "data"
GOLDENS = json.loads((DATA / "goldens.json").read_text())


class TestShannonSystem:
    @pytest.mark.parametrize("n,b1,b2", [(2, 2, 1), (3, 3, 6), (4, 4, 24)])
    def test_counts(self, n, b1, b2):
        s = shannon_system(n)
        assert (s.count("B1"), s.count("B2"), s.count("pointed")) == (b1, b2, 1)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_count_formula(self, n):
        s = shannon_system(n)
        assert s.count("B1") == n and s.count("B2") == comb(n, 2) * 2 ** (n - 2)

    def test_rows_evaluate_expressions(self):
        f = SetFunction(4, [random.Random(1).randint(-9, 9) for _ in range(16)])
        for row in shannon_system(4).rows:
            if row.kind == "B1":
                assert row.evaluate(f) == b1_value(f, *row.data)
            elif row.kind == "B2":
                assert row.evaluate(f) == b2_value(f, *row.data)
            else:
                assert row.evaluate(f) == f.value(0)

    def test_row_shape(self):
        for row in shannon_system(5).rows:
            assert len(row.terms) <= 4 and all(c in (1, -1) for _, c in row.terms)

    def test_range(self):
        with pytest.raises(CapError):
            shannon_system(1)


class TestTightSet:
    def test_modular(self):
        s = shannon_system(2)
        ids = tight_set(modular(2, [1, 1]), s)
        assert [(s.rows[i].kind, s.rows[i].data) for i in ids] == [("B2", (0, 1, 0)), ("pointed", ())]

    def test_uniform_n2(self):
        s = shannon_system(2)
        ids = tight_set(uniform_matroid(2, 1), s)
        assert [(s.rows[i].kind, s.rows[i].data) for i in ids] == [("B1", (0,)), ("B1", (1,)), ("pointed", ())]

    def test_uniform_n3(self):
        s = shannon_system(3)
        rows = [s.rows[i] for i in tight_set(uniform_matroid(3, 1), s)]
        assert sum(r.kind == "B1" for r in rows) == 3
        b2 = [r.data for r in rows if r.kind == "B2"]
        assert len(b2) == 3 and all(bin(K).count("1") == 1 for _, _, K in b2)
        assert len(rows) == 7

    def test_rejects_non_polymatroid(self):
        with pytest.raises(PolymatroidError):
            tight_set(SetFunction(2, [0, 1, 1, 3]))


class TestIsExtremal:
    def test_examples(self):
        assert is_extremal(uniform_matroid(2, 1))
        assert not is_extremal(modular(2, [1, 1]))
        assert is_extremal(uniform_matroid(3, 1))

    def test_zero(self):
        with pytest.raises(PolymatroidError):
            is_extremal(SetFunction.zero(2))


class TestEnumerateRays:
    def test_n2(self):
        expected = {tuple(modular(2, [1, 0]).values), tuple(modular(2, [0, 1]).values), tuple(uniform_matroid(2, 1).values)}
        assert set(enumerate_rays(2)) == expected

    def test_n3_contains_uniform(self):
        assert tuple(uniform_matroid(3, 1).values) in enumerate_rays(3)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_rays_valid(self, n):
        s = shannon_system(n)
        rays = rays_for(n)
        for r in rays:
            f = SetFunction(n, r)
            assert r[0] == 0 and min(r) >= 0
            g = 0
            for v in r:
                g = gcd(g, v)
            assert g == 1
            assert is_polymatroid(f) and is_extremal(f, s)
        assert rays == sorted(rays)

    @pytest.mark.parametrize("n", [2, 3])
    def test_brute_force_oracle(self, n):
        assert enumerate_rays(n) == brute_force_rays(n)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_goldens(self, n):
        assert len(rays_for(n)) == GOLDENS["ray_counts"][str(n)]

    def test_n4_golden_file(self):
        n, rays = read_rays(DATA / "rays_n4.txt")
        assert rays == rays_for(4)

    @pytest.mark.parametrize("n", [3, 4])
    def test_adjacency_tests_agree(self, n):
        assert enumerate_rays(n, adjacency="algebraic") == rays_for(n)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_symmetric_closure(self, n):
        assert symmetric_closure_ok(rays_for(n), n)

    @pytest.mark.parametrize("threads", [2, 4, 8])
    def test_threads_identical(self, threads):
        assert dumps_rays(4, enumerate_rays(4, threads=threads)) == dumps_rays(4, rays_for(4))

    def test_range(self):
        with pytest.raises(CapError):
            enumerate_rays(1)
        with pytest.raises(CapError):
            enumerate_rays(6)

    @pytest.mark.parametrize("n", [3, 4])
    def test_rays_positive_on_a_are_a_reduced(self, n):
        for r in rays_for(n):
            if r[1] > 0:
                assert reduce(SetFunction(n, r), 0).h.is_zero()


def test_permute_ray():
    r = tuple(modular(3, [1, 2, 3]).values)
    assert permute_ray(r, [1, 2, 0]) == tuple(modular(3, [3, 1, 2]).values)


class TestLambda:
    def test_small(self):
        assert lambda_n(3) == 1
        assert lambda_n(4) == 2

    def test_all_anchors_agree(self):
        assert lambda_n(4, rays_for(4), all_elements=True) == 2

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_below_hadamard(self, n):
        assert lambda_n(n, rays_for(n)) < hadamard_bound(n)["proved"]


class TestHadamard:
    def test_values(self):
        assert hadamard_bound(3)["proved"] == 128
        assert hadamard_bound(2)["proved"] == 8
        assert hadamard_bound(3)["tightened"] == 8

    def test_range(self):
        with pytest.raises(ValueError):
            hadamard_bound(1)


class TestConicDecompose:
    def test_modular(self):
        rays = rays_for(2)
        comb_ = conic_decompose(modular(2, [1, 1]), rays)
        got = {rays[i]: mu for i, mu in comb_.terms}
        assert got == {tuple(modular(2, [1, 0]).values): 1, tuple(modular(2, [0, 1]).values): 1}

    @pytest.mark.parametrize("n", [3, 4])
    def test_self(self, n):
        rays = rays_for(n)
        for i, r in enumerate(rays):
            assert conic_decompose(SetFunction(n, r), rays).terms == [(i, 1)]

    def test_uniform(self):
        rays = rays_for(3)
        f = uniform_matroid(3, 2)
        c = conic_decompose(f, rays)
        assert all(mu > 0 for _, mu in c.terms)
        assert c.evaluate(rays, 3) == f

    def test_fuzz(self):
        rng = random.Random(4)
        rays = rays_for(4)
        for _ in range(15):
            f = random_conic(rng, rays, 4)
            c = conic_decompose(f, rays)
            assert all(mu >= 0 for _, mu in c.terms)
            assert c.evaluate(rays, 4) == f

    def test_convex_when_normalized(self):
        # a convex mix of rays with e(a) = 1 decomposes with weights summing to 1
        rays = rays_for(4)
        unit = [r for r in rays if r[1] == 1]
        f = SetFunction(4, [Fraction(1, 3) * x + Fraction(2, 3) * y for x, y in zip(unit[0], unit[-1])])
        c = conic_decompose(f, unit)
        assert sum(mu for _, mu in c.terms) == 1

    def test_incomplete(self):
        rays = rays_for(2)[:2]
        with pytest.raises(PolymatroidError, match="incomplete"):
            conic_decompose(uniform_matroid(2, 1), rays)


class TestDoubleDescription:
    def test_orthant(self):
        R = dd.extreme_rays(np.eye(3, dtype=np.int64))
        assert sorted(map(tuple, R.tolist())) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    def test_square_cone(self):
        # x3 >= |x1|, x3 >= |x2|: four rays (±1, ±1, 1)
        H = [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]
        R = dd.extreme_rays(H)
        assert sorted(map(tuple, R.tolist())) == [(-1, -1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, 1)]

    def test_not_pointed(self):
        with pytest.raises(ValueError, match="pointed"):
            dd.extreme_rays([[1, 0]])

    def test_rational_rank(self):
        assert dd.rational_rank([[1, 2], [2, 4]]) == 1
        assert dd.rational_rank([[1, 2, 3], [0, 1, 1], [1, 3, 5]]) == 3
        assert dd.rational_rank([]) == 0
