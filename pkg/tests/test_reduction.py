"""Reduction maps, the two search engines, and composition."""

import pytest

from conftest import gap, pull_back, random_gap, random_reduction, seeded
from gapbasis import (
    ReductionMap,
    brute_search_reduction,
    compose,
    identity_reduction,
    is_witness,
    search_reduction,
)
from gapbasis.core import INF
from gapbasis.errors import DimensionMismatchError, NotAnNGapError


def test_reduction_map_invariants():
    with pytest.raises(ValueError):
        ReductionMap(m0=2, m1=2, k=1, e=((0,), (0,)), x=())  # not injective
    with pytest.raises(ValueError):
        ReductionMap(m0=1, m1=2, k=1, e=((0,),), x=(0,))  # |x| not < k
    with pytest.raises(ValueError):
        ReductionMap(m0=1, m1=2, k=2, e=((0, 5),), x=())  # letter out of range


def test_identity_induced_pairs():
    r = identity_reduction(3)
    for u in range(3):
        for v in range(3):
            assert r.induced(u, v) == (u, v)
    table = r.induced_table()
    assert table[(0, 1)] == (0, 1) and table[(1, 1)] == (1, 1)


def test_induced_examples_depth_three():
    r = ReductionMap(m0=3, m1=3, k=3, e=((1, 0, 0), (0, 0, 0), (1, 2, 0)), x=(1, 0))
    assert r.induced(1, 1) == (0, 1)
    assert r.induced(2, 2) == (2, 0)
    assert r.induced(0, 0) == (0, 0)  # x is a prefix of e(0)


def test_induced_table_laws_random():
    rng = seeded(31)
    for _ in range(500):
        r = random_reduction(rng, rng.randrange(1, 5), rng.randrange(2, 5))
        table = r.induced_table()
        for u in range(r.m0):
            for v in range(r.m0):
                if u == v:
                    continue
                i, j = table[(u, v)]
                assert i != j
                assert table[(v, u)] == (j, i)


def test_is_witness_examples():
    f = gap(2, [[0, INF], [INF, 1]])
    assert is_witness(identity_reduction(2), f, f)

    f9 = gap(3, [[0, INF, INF], [1, 1, 1], [2, INF, 2]])
    g9 = gap(3, [[0, 1, INF], [INF, 1, INF], [2, 2, 2]])
    r9 = ReductionMap(m0=3, m1=3, k=3, e=((1, 0, 0), (0, 0, 0), (1, 2, 0)), x=(1, 0))
    assert is_witness(r9, f9, g9)

    flipped = gap(2, [[1, INF], [INF, 0]])
    assert not is_witness(identity_reduction(2), f, flipped)
    with pytest.raises(DimensionMismatchError):
        is_witness(identity_reduction(3), f, f)


def test_search_self_returns_identity():
    rng = seeded(17)
    for _ in range(50):
        n = rng.randrange(1, 4)
        f = random_gap(rng, rng.randrange(2, 4), n)
        assert search_reduction(f, f) == identity_reduction(f.m)
        assert brute_search_reduction(f, f, f.m + 1) == identity_reduction(f.m)


def test_search_distinct_two_color_classes():
    f = gap(2, [[0, INF], [INF, 1]])
    g = gap(2, [[0, INF], [1, 1]])
    assert search_reduction(f, g) is None
    assert search_reduction(g, f) is None


def test_search_requires_n_gaps():
    f = gap(2, [[0, 0], [0, 0]])
    g = gap(2, [[0, INF], [INF, 1]])
    with pytest.raises(NotAnNGapError):
        search_reduction(f, g)
    with pytest.raises(DimensionMismatchError):
        search_reduction(g, gap(2, [[0, 1], [2, 2]]))


def test_brute_k_max_zero_is_none():
    f = gap(2, [[0, INF], [INF, 1]])
    assert brute_search_reduction(f, f, 0) is None


def test_search_finds_documented_witness_shape():
    f9 = gap(3, [[0, INF, INF], [1, 1, 1], [2, INF, 2]])
    g9 = gap(3, [[0, 1, INF], [INF, 1, INF], [2, 2, 2]])
    r = search_reduction(f9, g9)
    assert r is not None and is_witness(r, f9, g9)
    rb = brute_search_reduction(f9, g9, 4)
    assert rb is not None and is_witness(rb, f9, g9)


def test_oracle_equivalence_random():
    rng = seeded(20260809)
    for _ in range(200):
        n = rng.randrange(1, 4)
        lo = 1 if n == 1 else 2
        f = random_gap(rng, rng.randrange(lo, 4), n)
        g = random_gap(rng, rng.randrange(lo, 4), n)
        a = search_reduction(f, g)
        b = brute_search_reduction(f, g, f.m + 1)
        assert (a is None) == (b is None), (f.to_json(), g.to_json())
        if a is not None:
            assert is_witness(a, f, g) and is_witness(b, f, g)


def test_compose_identities():
    r = ReductionMap(m0=2, m1=2, k=2, e=((0, 1), (1, 0)), x=(1,))
    left = compose(identity_reduction(2), r)
    right = compose(r, identity_reduction(2))
    assert left.induced_table() == r.induced_table() == right.induced_table()
    assert right == r
    both = compose(identity_reduction(2), identity_reduction(2))
    assert both.induced_table() == identity_reduction(2).induced_table()
    with pytest.raises(DimensionMismatchError):
        compose(r, ReductionMap(m0=3, m1=3, k=1, e=((0,), (1,), (2,)), x=()))


def test_compose_witnesses_chains():
    rng = seeded(99)
    for _ in range(200):
        n = rng.randrange(1, 4)
        h = random_gap(rng, rng.randrange(max(2, n), 5), n)
        r2 = random_reduction(rng, rng.randrange(2, 5), h.m)
        g = pull_back(h, r2)
        r1 = random_reduction(rng, rng.randrange(2, 5), g.m)
        f = pull_back(g, r1)
        comp = compose(r1, r2)
        assert is_witness(comp, f, h)
        assert len(comp.x) < comp.k
        t1, t2, tc = r1.induced_table(), r2.induced_table(), comp.induced_table()
        assert all(tc[key] == t2[pair] for key, pair in t1.items())


def test_search_transitivity_on_found_chains():
    rng = seeded(7)
    found = 0
    while found < 20:
        n = rng.randrange(1, 3)
        f = random_gap(rng, 2, n)
        g = random_gap(rng, 2, n)
        h = random_gap(rng, 2, n)
        r1 = search_reduction(f, g)
        r2 = search_reduction(g, h)
        if r1 is None or r2 is None:
            continue
        found += 1
        assert is_witness(compose(r1, r2), f, h)
        assert search_reduction(f, h) is not None


def test_reduction_json_round_trip():
    r = ReductionMap(m0=2, m1=3, k=2, e=((0, 1), (2, 0)), x=(1,))
    data = r.to_json()
    assert data == {"k": 2, "x": [1], "e": [[0, 1], [2, 0]]}
    back = ReductionMap.from_json(data)
    assert back == r  # m1 inferred from the letters
    assert ReductionMap.from_json(data, m1=4).m1 == 4
