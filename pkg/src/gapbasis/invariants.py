"""Structural invariants of gap functions preserved under the reduction order.

pbranch collects the colors living only on the diagonal; attachment records
which color is forced at the swapped cell of another; branch-reducedness says
off-diagonal values between diagonal-only colors are a function of the two
diagonal colors.  All three can only grow/persist when passing down a
reduction, which is what makes them classification invariants.

``ensure_pbranch`` realizes the dichotomy: either every color has a distinct
partner attached to it (and pbranch is empty for a reason), or an explicit
reduction produces a gap function below g with nonempty pbranch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .core import (
    INF,
    GapFunction,
    apply_color_permutation,
    color_to_json,
)
from .errors import NotAnNGapError, PsiDomainError
from .reduction import ReductionMap, identity_reduction, is_witness


def pbranch(f: GapFunction) -> frozenset:
    """Finite colors whose every occurrence lies on the diagonal."""
    off_diag = {
        f(i, j)
        for i in range(f.m)
        for j in range(f.m)
        if i != j and f(i, j) is not INF
    }
    return frozenset(range(f.n)) - off_diag


def is_attached(f: GapFunction, k, l) -> bool:
    """True iff every off-diagonal cell carrying k forces l at the swapped cell.

    Vacuously true (for every l) when k never occurs off the diagonal.
    """
    for i in range(f.m):
        for j in range(f.m):
            if i == j:
                continue
            if f(i, j) is k or f(i, j) == k:
                swapped = f(j, i)
                if swapped is not l and swapped != l:
                    return False
    return True


def attachment_profile(f: GapFunction) -> dict:
    """For each finite color k, the set of l (colors or INF) it is attached to."""
    targets = list(range(f.n)) + [INF]
    return {
        k: frozenset(l for l in targets if is_attached(f, k, l))
        for k in range(f.n)
    }


def _check_psi(psi: Mapping, A: frozenset):
    pairs = {(i, j) for i in A for j in A if i != j}
    if set(psi.keys()) != pairs:
        raise PsiDomainError(
            f"branch function domain must be ordered distinct pairs of {sorted(A)}"
        )
    for value in psi.values():
        if value is not INF and value in A:
            raise PsiDomainError(f"branch function value {value} lies inside A")


def is_branch_reduced(f: GapFunction, A, psi: Mapping) -> bool:
    """True iff f(i, j) = psi(f(i, i), f(j, j)) whenever both diagonals hit distinct A-colors."""
    A = frozenset(A)
    _check_psi(psi, A)
    for i in range(f.m):
        di = f(i, i)
        if di is INF or di not in A:
            continue
        for j in range(f.m):
            if i == j:
                continue
            dj = f(j, j)
            if dj is INF or dj not in A or di == dj:
                continue
            expected = psi[(di, dj)]
            if f(i, j) is not expected and f(i, j) != expected:
                return False
    return True


@dataclass(frozen=True)
class Condition1Report:
    """Certificate that pbranch is empty for a structural reason.

    ``attachments`` lists, for every color k, one distinct color l attached
    to k (the least such l).
    """

    attachments: tuple

    def to_json(self) -> dict:
        return {"condition": 1, "attachments": [[k, l] for k, l in self.attachments]}


@dataclass(frozen=True)
class PbranchWitness:
    """A gap function f with nonempty pbranch together with a witness f <= g."""

    f: GapFunction
    witness: ReductionMap


def _distinct_attached_partner(g: GapFunction, k: int) -> Optional[int]:
    for l in range(g.n):
        if l != k and is_attached(g, l, k):
            return l
    return None


def ensure_pbranch(g: GapFunction) -> Union[Condition1Report, PbranchWitness]:
    """Decide the pbranch dichotomy for an n-gap.

    Exactly one outcome: a Condition1Report (pbranch empty and every color
    has a distinct partner attached to it), or a gap function with nonempty
    pbranch reducing into g.  When pbranch(g) is already nonempty the second
    branch holds trivially via the identity witness.
    """
    if not g.is_n_gap:
        raise NotAnNGapError("ensure_pbranch needs an n-gap")
    if pbranch(g):
        return PbranchWitness(f=g, witness=identity_reduction(g.m))

    partners = {k: _distinct_attached_partner(g, k) for k in range(g.n)}
    bad = [k for k, l in partners.items() if l is None]
    if not bad:
        return Condition1Report(
            attachments=tuple((k, partners[k]) for k in range(g.n))
        )

    # Relabel so the color without a distinct attached partner plays 0,
    # run the explicit construction, then relabel back.
    k0 = min(bad)
    swap = list(range(g.n))
    swap[0], swap[k0] = k0, 0
    g0 = apply_color_permutation(swap, g)
    r = _dichotomy_reduction(g0)
    table = tuple(
        tuple(g(*r.induced(u, v)) for v in range(r.m0)) for u in range(r.m0)
    )
    f = GapFunction(m=r.m0, n=g.n, table=table)
    assert f.is_n_gap and pbranch(f)
    assert is_witness(r, f, g)
    return PbranchWitness(f=f, witness=r)


def _dichotomy_reduction(g0: GapFunction) -> ReductionMap:
    """Explicit reduction used when no distinct color is attached to 0.

    Picks, for every color c, the lex-least off-diagonal pair (i_c, j_c)
    carrying c whose swapped cell avoids 0 (no constraint for c = 0), then
    e(c) = (i_0, ..., i_c, j_{c+1}, 0, ...), e(n-1) = (i_0, ..., i_{n-1}),
    x = (j_0).  The induced table pins color 0 to the diagonal.
    """
    n, m1 = g0.n, g0.m
    pairs = {}
    for c in range(n):
        for i in range(m1):
            for j in range(m1):
                if i == j or g0(i, j) != c:
                    continue
                if c > 0 and g0(j, i) == 0:
                    continue
                pairs[c] = (i, j)
                break
            if c in pairs:
                break
        if c not in pairs:
            raise AssertionError(f"no admissible off-diagonal pair for color {c}")

    i_of = [pairs[c][0] for c in range(n)]
    j_of = [pairs[c][1] for c in range(n)]
    if n == 1:
        # Depth-2 variant: a single direction still needs |x| < k.
        return ReductionMap(m0=1, m1=m1, k=2, e=((i_of[0], 0),), x=(j_of[0],))
    e = []
    for c in range(n - 1):
        word = i_of[: c + 1] + [j_of[c + 1]]
        e.append(tuple(word + [0] * (n - len(word))))
    e.append(tuple(i_of))
    return ReductionMap(m0=n, m1=m1, k=n, e=tuple(e), x=(j_of[0],))
