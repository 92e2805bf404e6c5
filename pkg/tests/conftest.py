"""Shared builders and generators for the test suite."""

import os
import random

import pytest

from gapbasis import GapFunction, ReductionMap
from gapbasis.core import INF


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    """Keep catalog caches inside the test tree, never in $HOME."""
    path = tmp_path_factory.mktemp("catalog-cache")
    old = os.environ.get("GAPBASIS_CACHE")
    os.environ["GAPBASIS_CACHE"] = str(path)
    yield str(path)
    if old is None:
        os.environ.pop("GAPBASIS_CACHE", None)
    else:
        os.environ["GAPBASIS_CACHE"] = old


def gap(n, rows):
    return GapFunction(m=len(rows), n=n, table=tuple(tuple(r) for r in rows))


def gap_from_ideals(m, n, ideals):
    """Build a table from per-color generator pair lists; other cells INF."""
    rows = [[INF] * m for _ in range(m)]
    for color, pairs in enumerate(ideals):
        for i, j in pairs:
            rows[i][j] = color
    return gap(n, rows)


# 4-gap on a 3-letter alphabet: diagonal 3, off-diagonal 3-i-j.  Its unique
# minimal type is A={3}, C={0,1,2} with singleton blocks, yet the gap itself
# is not minimal.
G4 = gap(4, [[3, 2, 1], [2, 3, 0], [1, 0, 3]])


def random_gap(rng, m, n, inf_weight=1):
    """Uniform-ish random n-gap table (rejection until all colors occur)."""
    assert m * m >= n
    palette = [INF] * inf_weight + list(range(n))
    while True:
        rows = [[rng.choice(palette) for _ in range(m)] for _ in range(m)]
        f = gap(n, rows)
        if f.is_n_gap:
            return f


def random_reduction(rng, m0, m1, k_max=None):
    """Uniform random valid reduction map with k <= m0 + 1."""
    k_max = k_max or m0 + 1
    while True:
        k = rng.randrange(1, k_max + 1)
        if m1 ** k >= m0:
            break
    xlen = rng.randrange(k)
    x = tuple(rng.randrange(m1) for _ in range(xlen))
    seen = set()
    e = []
    while len(e) < m0:
        cand = tuple(rng.randrange(m1) for _ in range(k))
        if cand not in seen:
            seen.add(cand)
            e.append(cand)
    return ReductionMap(m0=m0, m1=m1, k=k, e=tuple(e), x=x)


def pull_back(g, r):
    """The table g(r(u, v)); r witnesses pull_back(g, r) <= g by construction."""
    rows = tuple(
        tuple(g(*r.induced(u, v)) for v in range(r.m0)) for u in range(r.m0)
    )
    return GapFunction(m=r.m0, n=g.n, table=rows)


def seeded(seed):
    return random.Random(seed)
