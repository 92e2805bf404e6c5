"""Type enumeration, validation, representatives, orbits, J-notation."""

import itertools

import pytest

from conftest import gap, gap_from_ideals, seeded
from gapbasis import (
    NType,
    apply_color_permutation,
    build_representative,
    enumerate_types,
    j_notation,
    j_string,
    permute_type,
    type_orbits,
    validate_type,
)
from gapbasis.core import INF
from gapbasis.errors import BadPermutationError, InvalidTypeError
from gapbasis.types import enumerate_types_crosscheck


def test_validate_examples():
    ok = NType.make(2, A=(0, 1), psi={(0, 1): INF, (1, 0): INF})
    assert validate_type(ok).valid

    ok = NType.make(2, C=(0, 1), P=((0, 1),))
    assert validate_type(ok).valid

    bad = NType.make(2, C=(0, 1), P=((0,), (1,)))
    report = validate_type(bad)
    assert not report.valid
    assert any("size 2" in v for v in report.violations)


def test_validate_gamma_constraints():
    bad = NType.make(3, A=(0,), D=(1,), E=(2,), gamma={1: 2})
    assert not validate_type(bad).valid  # E needs two gamma preimages
    ok = NType.make(4, A=(0,), D=(1, 2), E=(3,), gamma={1: 3, 2: 3})
    assert validate_type(ok).valid


def test_counts():
    assert len(enumerate_types(1)) == 1
    assert len(enumerate_types(2)) == 6
    assert len(enumerate_types(3)) == 31


def test_single_type_for_one_color():
    (only,) = enumerate_types(1)
    assert only.A == (0,) and not only.B and not only.C and not only.D and not only.E


def test_enumeration_valid_and_duplicate_free():
    for n in (1, 2, 3):
        types = enumerate_types(n)
        assert len(set(types)) == len(types)
        assert all(validate_type(t).valid for t in types)
        keys = [t.canonical_key() for t in types]
        assert keys == sorted(keys)


def test_crosscheck_enumeration_agrees():
    for n in (1, 2, 3):
        assert enumerate_types(n) == enumerate_types_crosscheck(n)


def test_representative_tables_for_two_colors():
    cases = {
        ((), ((0, 1),)): ((0, 1), (0, 0)),
        ((0, 1), ()): ((0, INF), (INF, 1)),
    }
    for t in enumerate_types(2):
        key = (t.A, t.P)
        if key in cases:
            assert build_representative(t).f.table == cases[key]
    a0d1 = NType.make(2, A=(0,), D=(1,), gamma={1: INF})
    assert build_representative(a0d1).f.table == ((0, INF), (1, 1))
    a0c1 = NType.make(2, A=(0,), C=(1,), P=((1,),))
    assert build_representative(a0c1).f.table == ((0, 1), (1, 1))


def test_representative_three_color_examples():
    t = NType.make(3, A=(0, 1), D=(2,), psi={(0, 1): INF, (1, 0): INF}, gamma={2: INF})
    rep = build_representative(t)
    assert rep.f.table == ((0, INF, INF), (INF, 1, INF), (2, 2, 2))
    assert j_string(rep.f) == "{J^3_(00), J^3_(11), J^3_(20,21,22)}"


def test_invalid_type_rejected():
    bad = NType.make(2, C=(0, 1), P=((0,), (1,)))
    with pytest.raises(InvalidTypeError):
        build_representative(bad)


def test_sigma_injective_off_a_star():
    for n in (1, 2, 3, 4):
        for t in enumerate_types(n):
            rep = build_representative(t)
            non_a = [
                rep.sigma[i]
                for i, lab in enumerate(rep.labels)
                if lab[0] in ("P", "D")
            ]
            assert len(set(non_a)) == len(non_a)


def test_permute_type_examples():
    t = NType.make(2, A=(0,), C=(1,), P=((1,),))
    assert permute_type((0, 1), t) == t
    flipped = permute_type((1, 0), t)
    assert flipped.A == (1,) and flipped.C == (0,)
    with pytest.raises(BadPermutationError):
        permute_type((0, 0), t)


def test_permute_type_group_action():
    rng = seeded(9)
    types = enumerate_types(3)
    perms = list(itertools.permutations(range(3)))
    for _ in range(150):
        t = rng.choice(types)
        p1, p2 = rng.choice(perms), rng.choice(perms)
        combined = tuple(p2[p1[i]] for i in range(3))
        assert permute_type(p2, permute_type(p1, t)) == permute_type(combined, t)
        assert validate_type(permute_type(p1, t)).valid


def test_equivariance_of_representatives():
    # permuted type's table equals the permuted table after realigning indices
    for n in (2, 3):
        types = enumerate_types(n)
        for t in types:
            rep = build_representative(t)
            for perm in itertools.permutations(range(n)):
                rep2 = build_representative(permute_type(perm, t))
                expected = apply_color_permutation(perm, rep.f)

                def image_label(lab):
                    if lab == ("*",):
                        return lab
                    if lab[0] == "A":
                        return ("A", perm[lab[1]])
                    if lab[0] == "P":
                        return ("P", tuple(sorted(perm[c] for c in lab[1])))
                    return ("D", perm[lab[1]])

                realign = [rep2.labels.index(image_label(lab)) for lab in rep.labels]
                for i in range(rep.f.m):
                    for j in range(rep.f.m):
                        assert rep2.f(realign[i], realign[j]) == expected(i, j)


def test_orbit_counts():
    o1 = type_orbits(1)
    assert len(o1.orbits) == 1 and o1.sizes() == (1,)
    o2 = type_orbits(2)
    assert len(o2.orbits) == 4 and sorted(o2.sizes()) == [1, 1, 2, 2]
    o3 = type_orbits(3)
    assert len(o3.orbits) == 9
    assert sorted(o3.sizes()) == [1, 3, 3, 3, 3, 3, 3, 6, 6]
    assert sum(o3.sizes()) == 31


def test_orbit_representative_is_least_member():
    orbits = type_orbits(3)
    for o in orbits.orbits:
        assert o.representative == min(o.members)


def test_j_notation_examples():
    f = gap(2, [[0, INF], [1, 1]])
    assert j_notation(f) == (((0, 0),), ((1, 0), (1, 1)))
    f = gap(2, [[0, 1], [0, 0]])
    assert j_notation(f) == (((0, 0), (1, 0), (1, 1)), ((0, 1),))
    blank = gap(2, [[INF, INF], [INF, INF]])
    assert j_notation(blank) == ((), ())
    assert not blank.is_n_gap


def test_monotone_tail_enumeration():
    # any subset of M with at most one A*-index admits an ordering whose
    # rows/columns toward later elements are constant
    def monotone(f, order):
        for a in range(len(order)):
            for b in range(a + 1, len(order)):
                for c in range(b + 1, len(order)):
                    i, j, k = order[a], order[b], order[c]
                    if f(i, j) != f(i, k) or f(j, i) != f(k, i):
                        return False
        return True

    for n in (2, 3, 4):
        for t in enumerate_types(n):
            rep = build_representative(t)
            a_star = [i for i, lab in enumerate(rep.labels) if lab[0] in ("A", "*")]
            rest = [i for i in range(rep.f.m) if i not in a_star]
            for extra in [()] + [(i,) for i in a_star]:
                indices = tuple(rest) + extra
                ascending = tuple(sorted(indices, key=lambda i: rep.sigma[i]))
                found = monotone(rep.f, ascending)
                if not found:
                    found = any(
                        monotone(rep.f, perm)
                        for perm in itertools.permutations(indices)
                    )
                assert found, (t, indices)


def test_type_json_round_trip():
    for t in enumerate_types(3):
        assert NType.from_json(t.to_json()) == t


def test_listed_ideal_transcriptions_match_types():
    # the m=2 three-color tables used in the classification listing
    f = gap_from_ideals(2, 3, [[(0, 0)], [(1, 1)], [(0, 1), (1, 0)]])
    assert f.table == ((0, 2), (2, 1))
    t = NType.make(3, A=(0, 1), B=(2,), psi={(0, 1): 2, (1, 0): 2})
    assert build_representative(t).f == f
