"""Tree node primitives, gap function tables, color permutations."""

import itertools

import pytest

from conftest import G4, gap, random_gap, seeded
from gapbasis import (
    GapFunction,
    apply_color_permutation,
    inc,
    meet,
    validate_gap_function,
)
from gapbasis.core import INF, color_from_json
from gapbasis.errors import BadPermutationError, EqualNodesError


def test_meet_examples():
    assert meet((0, 1, 0), (0, 2)) == (0,)
    assert meet((1,), (2,)) == ()
    assert meet((0, 1), (0, 1, 1)) == (0, 1)


def test_inc_examples():
    assert inc((0, 1), (0,)) == (1, 1)
    assert inc((0, 1, 0), (0, 2)) == (1, 2)
    assert inc((1,), (2,)) == (1, 2)
    assert inc((2,), (1,)) == (2, 1)
    with pytest.raises(EqualNodesError):
        inc((0,), (0,))


def test_inc_comparable_is_symmetric():
    assert inc((0,), (0, 1)) == inc((0, 1), (0,)) == (1, 1)
    assert inc((), (3, 1)) == (3, 3)


def test_inc_laws_random():
    rng = seeded(11)
    for _ in range(300):
        m = rng.randrange(2, 5)
        s = tuple(rng.randrange(m) for _ in range(rng.randrange(6)))
        t = tuple(rng.randrange(m) for _ in range(rng.randrange(6)))
        if s == t:
            continue
        i, j = inc(s, t)
        assert 0 <= i < m and 0 <= j < m
        if len(s) == len(t):
            assert i != j  # equal-length distinct nodes are incomparable
        if i != j:
            assert inc(t, s) == (j, i)
        else:
            assert inc(t, s) == (i, j)


def test_gap_function_validation():
    f = gap(2, [[0, INF], [INF, 1]])
    rep = validate_gap_function(f)
    assert rep.total and rep.n_gap and rep.missing_colors == ()

    rep = validate_gap_function(gap(2, [[0, 0], [0, 0]]))
    assert rep.total and not rep.n_gap and rep.missing_colors == (1,)

    rep = validate_gap_function(G4)
    assert rep.total and rep.n_gap


def test_gap_function_rejects_bad_cells():
    with pytest.raises(ValueError):
        gap(1, [[3]])
    with pytest.raises(ValueError):
        gap(2, [[0, 1]])
    with pytest.raises(ValueError):
        GapFunction(m=0, n=1, table=())


def test_json_round_trip():
    f = gap(2, [[0, INF], [1, 1]])
    data = f.to_json()
    assert data == {"m": 2, "n": 2, "table": [[0, "inf"], [1, 1]]}
    assert GapFunction.from_json(data) == f
    with pytest.raises(ValueError):
        color_from_json("oops", 2)
    with pytest.raises(ValueError):
        color_from_json(5, 2)


def test_color_permutation_examples():
    f = gap(2, [[0, INF], [INF, 1]])
    assert apply_color_permutation((0, 1), f) == f
    swapped = apply_color_permutation((1, 0), f)
    assert swapped.table == ((1, INF), (INF, 0))
    assert apply_color_permutation((1, 0), swapped) == f
    with pytest.raises(BadPermutationError):
        apply_color_permutation((0, 0), f)


def test_color_permutation_group_action():
    rng = seeded(5)
    for _ in range(100):
        n = rng.randrange(1, 4)
        f = random_gap(rng, rng.randrange(2, 4), n)
        perms = list(itertools.permutations(range(n)))
        p1, p2 = rng.choice(perms), rng.choice(perms)
        combined = tuple(p2[p1[i]] for i in range(n))
        assert apply_color_permutation(p2, apply_color_permutation(p1, f)) == \
            apply_color_permutation(combined, f)
        assert apply_color_permutation(p1, f).is_n_gap == f.is_n_gap
