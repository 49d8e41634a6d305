import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from polymatroids import cone
from polymatroids.construct import LinearSource, rank_function
from polymatroids.setfn import GroundSet, SetFunction

_RAYS = {}


def rays_for(n):
    if n not in _RAYS:
        _RAYS[n] = cone.enumerate_rays(n)
    return _RAYS[n]


@pytest.fixture(scope="session")
def rays():
    return rays_for


def random_conic(rng, rays, n, terms=4, max_den=6):
    vals = [Fraction(0)] * (1 << n)
    for _ in range(terms):
        r = rng.choice(rays)
        mu = Fraction(rng.randint(0, 12), rng.randint(1, max_den))
        for m, v in enumerate(r):
            vals[m] += mu * v
    return SetFunction(n, vals)


def random_source(rng, n, dim, max_vecs=2):
    rows = []
    for _ in range(n):
        k = rng.randint(1, max_vecs)
        rows.append(tuple(rng.randrange(1, 1 << dim) for _ in range(k)))
    return LinearSource(GroundSet.of_size(n), dim, tuple(rows))


def random_rank_function(rng, n, dim):
    return rank_function(random_source(rng, n, dim))


# -- acceptance report --------------------------------------------------------

ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a one-line pass/fail verdict for an acceptance criterion."""

    def record(label, passed, detail=""):
        ACCEPTANCE.append((label, "PASS" if passed else "FAIL", detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, detail in ACCEPTANCE:
        terminalreporter.write_line(f"[{verdict}] {label}" + (f" -- {detail}" if detail else ""))
