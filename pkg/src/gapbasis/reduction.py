"""Reduction maps between gap functions and the embedding decision procedure.

A reduction map (k, e, x) sends each source direction u to a node e(u) of
length k over the target alphabet, with a shorter base node x.  It induces a
map on direction pairs via the incidence function: (u, v) -> inc(e(u), e(v))
off the diagonal and (u, u) -> inc(e(u), x).  The gap generated by f embeds
below the gap generated by g exactly when some reduction map turns g into f,
with depth k at most m0 + 1; ``search_reduction`` decides this.

Two engines are provided: a pruned class-refinement search used everywhere,
and ``brute_search_reduction``, a plain exhaustive scan over all (k, x, e)
kept as an independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import INF, GapFunction, Node, color_code, inc
from .errors import DimensionMismatchError, NotAnNGapError


@dataclass(frozen=True)
class ReductionMap:
    """Witness data (k, e, x) for one gap function reducing to another.

    e is injective, every e(u) has length exactly k, and |x| < k, so
    inc(e(u), x) is always defined.  Depths beyond m0 + 1 are legal here
    (composition can produce them); only the searches cap k.
    """

    m0: int
    m1: int
    k: int
    e: tuple
    x: Node

    def __post_init__(self):
        e = tuple(tuple(s) for s in self.e)
        x = tuple(self.x)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "x", x)
        if self.m0 < 1 or self.m1 < 1 or self.k < 1:
            raise ValueError("need m0, m1, k >= 1")
        if len(e) != self.m0:
            raise ValueError(f"e must assign a node to each of {self.m0} directions")
        if len(set(e)) != len(e):
            raise ValueError("e must be injective")
        if any(len(s) != self.k for s in e):
            raise ValueError(f"every e(u) must have length k={self.k}")
        if len(x) >= self.k:
            raise ValueError("|x| must be smaller than k")
        for s in e + (x,):
            if any(not 0 <= w < self.m1 for w in s):
                raise ValueError(f"letters of {s!r} must lie below m1={self.m1}")

    def induced(self, u: int, v: int) -> tuple[int, int]:
        """Direction pair induced at (u, v): inc(e(u), e(v)), or inc(e(u), x) on the diagonal."""
        if u == v:
            return inc(self.e[u], self.x)
        return inc(self.e[u], self.e[v])

    def induced_table(self) -> dict:
        """Tabulation of the induced map over all of m0 x m0."""
        return {
            (u, v): self.induced(u, v)
            for u in range(self.m0)
            for v in range(self.m0)
        }

    def to_json(self) -> dict:
        return {"k": self.k, "x": list(self.x), "e": [list(s) for s in self.e]}

    @classmethod
    def from_json(cls, data: dict, m1: Optional[int] = None) -> "ReductionMap":
        try:
            k, x, e = data["k"], data["x"], data["e"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"reduction map JSON needs keys k, x, e: {exc}")
        if m1 is None:
            m1 = data.get("m1")
        if m1 is None:
            letters = [w for s in list(e) + [x] for w in s]
            m1 = max(letters) + 1 if letters else 1
        return cls(m0=len(e), m1=m1, k=k, e=tuple(tuple(s) for s in e), x=tuple(x))


def identity_reduction(m: int) -> ReductionMap:
    """The depth-1 reduction witnessing f <= f: e(u) = (u), x empty."""
    return ReductionMap(m0=m, m1=m, k=1, e=tuple((u,) for u in range(m)), x=())


def is_witness(r: ReductionMap, f: GapFunction, g: GapFunction) -> bool:
    """True iff f(u, v) = g(r(u, v)) for every cell, i.e. r witnesses f <= g."""
    if r.m0 != f.m or r.m1 != g.m or f.n != g.n:
        raise DimensionMismatchError(
            f"witness shape ({r.m0}->{r.m1}) does not match f:{f.m}, g:{g.m}, "
            f"colors {f.n} vs {g.n}"
        )
    for u in range(f.m):
        for v in range(f.m):
            i, j = r.induced(u, v)
            if g(i, j) is not f(u, v) and g(i, j) != f(u, v):
                return False
    return True


def compose(r1: ReductionMap, r2: ReductionMap) -> ReductionMap:
    """Chain two reductions: letters of r1 are expanded through r2.

    If r1 witnesses f <= g and r2 witnesses g <= h then the result witnesses
    f <= h, and its induced table is the composition of the two tables.
    """
    if r1.m1 != r2.m0:
        raise DimensionMismatchError(
            f"cannot compose: first map lands in {r1.m1}, second starts at {r2.m0}"
        )

    def expand(node):
        out = []
        for w in node:
            out.extend(r2.e[w])
        return tuple(out)

    e = tuple(expand(s) for s in r1.e)
    x = expand(r1.x) + r2.x
    return ReductionMap(m0=r1.m0, m1=r2.m1, k=r1.k * r2.k, e=e, x=x)


def _require_comparable(f: GapFunction, g: GapFunction):
    if f.n != g.n:
        raise DimensionMismatchError(f"color counts differ: {f.n} vs {g.n}")
    if not f.is_n_gap or not g.is_n_gap:
        raise NotAnNGapError("both gap functions must realize all n colors")


def _cells_realizable(f: GapFunction, g: GapFunction) -> bool:
    """Cheap necessary condition: every f-cell has a matching g-pattern.

    Off-diagonal cells need an off-diagonal g-pair matching both (u, v) and
    its swap; diagonal cells only need the color to occur somewhere in g.
    """
    g_colors = frozenset(g(i, j) if g(i, j) is INF else g(i, j)
                         for i in range(g.m) for j in range(g.m))
    swap_pairs = frozenset(
        (g(i, j), g(j, i))
        for i in range(g.m)
        for j in range(g.m)
        if i != j
    )
    for u in range(f.m):
        for v in range(f.m):
            if u == v:
                if f(u, u) not in g_colors:
                    return False
            elif (f(u, v), f(v, u)) not in swap_pairs:
                return False
    return True


def search_reduction(f: GapFunction, g: GapFunction, k_max: Optional[int] = None) -> Optional[ReductionMap]:
    """Find a reduction map witnessing f <= g, or None if none exists.

    Completeness relies on the depth bound: a witness exists iff one exists
    with k <= m0 + 1, the default cap.  The search runs over (k ascending,
    |x| ascending) and, per depth, refines prefix classes level by level:
    only letters at divergences and at the position where x ends matter, so
    letters of a class that stays together are pinned to 0.  The first
    witness in this canonical order is returned, which makes results
    reproducible; for f = g the identity reduction comes first.
    """
    _require_comparable(f, g)
    m0 = f.m
    if k_max is None:
        k_max = m0 + 1
    if not _cells_realizable(f, g):
        return None
    for k in range(1, k_max + 1):
        for xlen in range(k):
            found = _class_search(f, g, k, xlen)
            if found is not None:
                return found
    return None


def _class_search(f: GapFunction, g: GapFunction, k: int, xlen: int) -> Optional[ReductionMap]:
    """Depth-k search with |x| = xlen via independent class refinement.

    A class is a set of strings (the e(u) plus possibly x) sharing their
    prefix so far.  Constraints only ever couple strings inside one class,
    so each class is solved on its own and solutions are concatenated.
    """
    m0, m1 = f.m, g.m
    X = m0  # slot id for the base node x
    memo: dict = {}

    def diag_ok(u, w):
        c = g(w, w)
        return c is f(u, u) or c == f(u, u)

    def pair_ok(a, b, wa, wb):
        # b may be the x slot; then the single diagonal constraint applies.
        if b == X:
            c = g(wa, wb)
            return c is f(a, a) or c == f(a, a)
        return (g(wa, wb) is f(a, b) or g(wa, wb) == f(a, b)) and (
            g(wb, wa) is f(b, a) or g(wb, wa) == f(b, a)
        )

    def solve(members: tuple, level: int):
        """Letters for `members` from `level` on, or None.  x is always last."""
        key = (members, level)
        if key in memo:
            return memo[key]
        es = [i for i in members if i != X]
        has_x = members and members[-1] == X
        result = None
        if len(es) <= 1 and not has_x:
            result = {u: [0] * (k - level) for u in es}
        elif not es:
            result = {X: [0] * (xlen - level)}
        elif level == k:
            result = None  # two or more strings never diverged
        elif len(es) > m1 ** (k - level):
            result = None
        else:
            event = has_x and level == xlen
            assigned = es if event else list(members)
            if event:
                options = [[w for w in range(m1) if diag_ok(u, w)] for u in es]
            else:
                options = [range(m1)] * len(assigned)
            for letters in itertools.product(*options):
                if not event and len(set(letters)) == 1 and letters[0] != 0:
                    continue  # non-splitting letters are padding; 0 is canonical
                ok = True
                for a in range(len(assigned)):
                    for b in range(a + 1, len(assigned)):
                        if letters[a] != letters[b] and not pair_ok(
                            assigned[a], assigned[b], letters[a], letters[b]
                        ):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                groups: dict = {}
                for slot, w in zip(assigned, letters):
                    groups.setdefault(w, []).append(slot)
                combined = {}
                for w, group in groups.items():
                    sub = solve(tuple(group), level + 1)
                    if sub is None:
                        combined = None
                        break
                    for slot, tail in sub.items():
                        combined[slot] = [w] + tail
                if combined is None:
                    continue
                if event:
                    combined[X] = []
                result = combined
                break
        memo[key] = result
        return result

    top = solve(tuple(range(m0)) + (X,), 0)
    if top is None:
        return None
    r = ReductionMap(
        m0=m0,
        m1=m1,
        k=k,
        e=tuple(tuple(top[u]) for u in range(m0)),
        x=tuple(top[X]),
    )
    assert is_witness(r, f, g)
    return r


@lru_cache(maxsize=None)
def _tuples(m1: int, k: int) -> tuple:
    return tuple(itertools.product(range(m1), repeat=k))


@lru_cache(maxsize=None)
def _pair_codes(m1: int, k: int) -> np.ndarray:
    """codes[a, b] = i * m1 + j for inc of strings a, b; diagonal gets a sentinel."""
    strings = _tuples(m1, k)
    size = len(strings)
    codes = np.full((size, size), m1 * m1, dtype=np.int32)
    for a in range(size):
        sa = strings[a]
        for b in range(a + 1, size):
            i, j = inc(sa, strings[b])
            codes[a, b] = i * m1 + j
            codes[b, a] = j * m1 + i
    return codes


@lru_cache(maxsize=None)
def _base_nodes(m1: int, k: int) -> tuple:
    out = []
    for length in range(k):
        out.extend(itertools.product(range(m1), repeat=length))
    return tuple(out)


@lru_cache(maxsize=None)
def _base_codes(m1: int, k: int) -> np.ndarray:
    strings = _tuples(m1, k)
    bases = _base_nodes(m1, k)
    codes = np.empty((len(bases), len(strings)), dtype=np.int32)
    for bi, x in enumerate(bases):
        for a, s in enumerate(strings):
            i, j = inc(s, x)
            codes[bi, a] = i * m1 + j
    return codes


def brute_search_reduction(f: GapFunction, g: GapFunction, k_max: int) -> Optional[ReductionMap]:
    """Exhaustive oracle: scan every (k <= k_max, x, injective e) in order.

    Candidates are enumerated lexicographically (k ascending, x by length
    then lex, e(0), e(1), ... each in lex order) and the first witness is
    returned.  Agrees with ``search_reduction`` on Some/None whenever
    k_max >= m0 + 1.  Intended for small alphabets.
    """
    _require_comparable(f, g)
    m0, m1, n = f.m, g.m, f.n
    fcode = [[color_code(f(u, v), n) for v in range(m0)] for u in range(m0)]
    glut_base = np.full(m1 * m1 + 1, n + 1, dtype=np.int32)  # sentinel stays unmatched
    for i in range(m1):
        for j in range(m1):
            glut_base[i * m1 + j] = color_code(g(i, j), n)

    for k in range(1, k_max + 1):
        strings = _tuples(m1, k)
        pair_vals = glut_base[_pair_codes(m1, k)]
        base_vals = glut_base[_base_codes(m1, k)]
        for bi, x in enumerate(_base_nodes(m1, k)):
            diag = base_vals[bi]
            chosen: list = []

            def rec(u):
                if u == m0:
                    return True
                mask = diag == fcode[u][u]
                for v in range(u):
                    sv = chosen[v]
                    mask = mask & (pair_vals[sv] == fcode[v][u])
                    mask = mask & (pair_vals[:, sv] == fcode[u][v])
                for s in np.flatnonzero(mask):
                    chosen.append(int(s))
                    if rec(u + 1):
                        return True
                    chosen.pop()
                return False

            if rec(0):
                return ReductionMap(
                    m0=m0,
                    m1=m1,
                    k=k,
                    e=tuple(strings[s] for s in chosen),
                    x=x,
                )
    return None
