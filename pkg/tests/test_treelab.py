"""Combs, chains, extraction, tree images, and subtree color checks."""

import itertools

import pytest

from conftest import gap, random_reduction, seeded
from gapbasis import (
    NType,
    SubtreeDescriptor,
    build_representative,
    comb_type_of,
    enumerate_types,
    extract_comb,
    identity_reduction,
    make_comb,
    subtree_comb_colors,
    tree_image,
)
from gapbasis.core import INF
from gapbasis.errors import (
    BadAlphabetError,
    BadDirectionError,
    DimensionMismatchError,
    TooSmallError,
)


def test_make_comb_examples():
    chain = make_comb(0, 0, 3)
    assert chain.nodes == ((0,), (0, 0), (0, 0, 0)) and chain.kind == (0, 0)
    assert chain.spine == ()

    comb = make_comb(0, 1, 3)
    assert comb.nodes == ((1,), (0, 0, 1), (0, 0, 0, 0, 1))
    assert comb.spine == ((), (0, 0), (0, 0, 0, 0))

    with pytest.raises(BadDirectionError):
        make_comb(2, 0, 2, m=2)


def test_comb_type_examples():
    assert comb_type_of([(0,), (0, 0)]) == (0, 0)
    assert comb_type_of([(1,), (0, 0, 1)]) == (0, 1)
    assert comb_type_of([(0,), (1, 1)]) is None
    with pytest.raises(TooSmallError):
        comb_type_of([(0,)])


def test_comb_type_rejects_mixed_sets():
    assert comb_type_of([(0,), (0, 0), (0, 0, 1)]) is None
    assert comb_type_of([(0,), (1,), (0, 0)]) is None
    assert comb_type_of([(0, 1), (1, 0)]) is None  # equal lengths


def test_make_classify_round_trip():
    rng = seeded(15)
    for m in (2, 3, 4):
        for u in range(m):
            for v in range(m):
                for length in range(2, 9):
                    det = make_comb(u, v, length, m=m)
                    assert comb_type_of(det.nodes) == (u, v)
                    rnd = make_comb(u, v, length, m=m, rng=rng.randrange(10 ** 9))
                    assert comb_type_of(rnd.nodes) == (u, v)


def test_kind_disjointness_random():
    rng = seeded(1234)
    for _ in range(400):
        m = rng.randrange(2, 4)
        nodes = {
            tuple(rng.randrange(m) for _ in range(rng.randrange(1, 6)))
            for _ in range(rng.randrange(2, 6))
        }
        if len(nodes) < 2:
            continue
        kind = comb_type_of(nodes)
        if kind is not None:
            u, v = kind
            # re-building a comb of that kind from the classified nodes agrees
            assert extract_comb(nodes).kind is not None


def test_extract_returns_input_when_already_comb():
    comb = make_comb(0, 1, 4)
    out = extract_comb(comb.nodes)
    assert out.kind == (0, 1)
    assert set(out.nodes) == set(comb.nodes)


def test_extract_two_singletons():
    out = extract_comb([(0,), (1,)])
    assert out.kind is None
    assert out.nodes == ((0,),)
    with pytest.raises(TooSmallError):
        extract_comb([(0,)])


def test_extract_full_binary_tree_regression():
    # depth-6 binary tree: the longest pattern is the all-zero chain of 7 nodes
    nodes = [t for L in range(7) for t in itertools.product((0, 1), repeat=L)]
    out = extract_comb(nodes)
    assert out.kind == (0, 0)
    assert len(out.nodes) == 7
    assert set(out.nodes) <= set(nodes)
    assert comb_type_of(out.nodes) == (0, 0)


def test_extract_monotone_under_supersets():
    rng = seeded(55)
    for _ in range(60):
        m = rng.randrange(2, 4)
        pool = [
            tuple(rng.randrange(m) for _ in range(rng.randrange(1, 7)))
            for _ in range(24)
        ]
        family = [set(pool[:k]) for k in (6, 12, 18, 24)]
        last = 0
        for nodes in family:
            if len(nodes) < 2:
                continue
            got = len(extract_comb(nodes).nodes)
            assert got >= last
            last = got


def test_extract_output_is_subset_and_valid():
    rng = seeded(321)
    for _ in range(150):
        m = rng.randrange(2, 4)
        nodes = {
            tuple(rng.randrange(m) for _ in range(rng.randrange(7)))
            for _ in range(rng.randrange(2, 30))
        }
        if len(nodes) < 2:
            continue
        out = extract_comb(nodes)
        assert set(out.nodes) <= set(nodes)
        if out.kind is not None and len(out.nodes) >= 2:
            assert comb_type_of(out.nodes) == out.kind


def test_tree_image_examples():
    assert tree_image(identity_reduction(2), (0, 1)) == (0, 1)
    from gapbasis import ReductionMap

    r = ReductionMap(m0=2, m1=2, k=2, e=((0, 1), (1, 0)), x=(1,))
    assert tree_image(r, (0, 1)) == (0, 1, 1, 0, 1)
    assert tree_image(r, ()) == (1,)
    with pytest.raises(BadAlphabetError):
        tree_image(r, (5,))


def test_tree_image_injective_random():
    rng = seeded(88)
    for _ in range(100):
        r = random_reduction(rng, rng.randrange(2, 4), rng.randrange(2, 4))
        seen = {}
        for _ in range(40):
            node = tuple(rng.randrange(r.m0) for _ in range(rng.randrange(5)))
            img = tree_image(r, node)
            assert seen.setdefault(img, node) == node


def test_images_of_combs_have_induced_kind():
    rng = seeded(500)
    for _ in range(300):
        m0 = rng.randrange(2, 5)
        r = random_reduction(rng, m0, rng.randrange(2, 5))
        u, v = rng.randrange(m0), rng.randrange(m0)
        comb = make_comb(u, v, rng.randrange(2, 6), m=m0, rng=rng.randrange(10 ** 9))
        images = [tree_image(r, t) for t in comb.nodes]
        assert comb_type_of(images) == r.induced(u, v)


def test_subtree_descriptor_validation():
    with pytest.raises(ValueError):
        SubtreeDescriptor(m=2)
    with pytest.raises(ValueError):
        SubtreeDescriptor(m=2, allowed=(), forbidden_even=None)
    with pytest.raises(ValueError):
        SubtreeDescriptor(m=1, forbidden_even=0)
    d = SubtreeDescriptor(m=3, forbidden_even=1)
    assert d.contains(()) and d.contains((0, 1)) and not d.contains((1, 0))
    assert not d.contains((0,))  # odd length
    letters = SubtreeDescriptor(m=3, allowed=(0, 2))
    assert letters.contains((2, 0, 2)) and not letters.contains((1,))


def test_subtree_descriptor_json_round_trip():
    for d in (
        SubtreeDescriptor(m=3, forbidden_even=1),
        SubtreeDescriptor(m=4, allowed=(0, 2)),
    ):
        assert SubtreeDescriptor.from_json(d.to_json()) == d


def test_subtree_colors_full_tree():
    f = gap(2, [[0, 1], [0, 0]])
    d = SubtreeDescriptor(m=2, allowed=(0, 1))
    assert subtree_comb_colors(f, d) == {0, 1}
    with pytest.raises(DimensionMismatchError):
        subtree_comb_colors(f, SubtreeDescriptor(m=3, allowed=(0,)))


def test_subtree_colors_on_a_indices():
    t = NType.make(3, A=(0, 1), B=(2,), psi={(0, 1): 2, (1, 0): 2})
    rep = build_representative(t)
    d = SubtreeDescriptor(m=rep.f.m, allowed=(0, 1))
    assert subtree_comb_colors(rep.f, d, 6) == {0, 1, 2}


def test_subtree_colors_block_restriction():
    t = NType.make(4, C=(0, 1, 2, 3), P=((0, 1), (2, 3)))
    rep = build_representative(t)
    d = SubtreeDescriptor(m=rep.f.m, allowed=(0, 1))  # placeholder + first block
    assert subtree_comb_colors(rep.f, d, 6) == {0, 1}


def test_subtree_colors_stable_in_depth():
    # letter restrictions realize all their colors by depth 4 already
    for t in enumerate_types(3):
        if not t.A:
            continue
        rep = build_representative(t)
        idx = tuple(i for i, lab in enumerate(rep.labels) if lab[0] == "A")
        d = SubtreeDescriptor(m=rep.f.m, allowed=idx)
        depth6 = subtree_comb_colors(rep.f, d, 6)
        assert subtree_comb_colors(rep.f, d, 8) == depth6
        assert depth6 == frozenset(t.A) | frozenset(t.B)
