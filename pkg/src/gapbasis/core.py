"""Foundational value types: colors, tree nodes, the incidence function, gap functions.

Nodes of the m-adic tree are plain tuples of ints (letters < m).  A gap
function is a total color table f : m x m -> {0..n-1} u {INF}; the cell
(u, v) names the ideal generated by all (u, v)-combs, and INF marks comb
kinds that generate no ideal.  All values here are immutable and all
operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import BadPermutationError, EqualNodesError


class _Infinity:
    """Singleton color for cells that generate no ideal."""

    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


INF = _Infinity()

Color = Union[int, _Infinity]
Node = tuple  # tuple of ints


def color_code(c: Color, n: int) -> int:
    """Total order embedding for colors: finite colors first, INF last."""
    return n if c is INF else c


def color_to_json(c: Color):
    return "inf" if c is INF else int(c)


def color_from_json(value, n: int) -> Color:
    if value == "inf":
        return INF
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"color cell must be an int or 'inf', got {value!r}")
    if not 0 <= value < n:
        raise ValueError(f"color {value} out of range for n={n}")
    return value


def meet(s: Node, t: Node) -> Node:
    """Longest common prefix of two nodes."""
    i = 0
    limit = min(len(s), len(t))
    while i < limit and s[i] == t[i]:
        i += 1
    return s[:i]


def is_prefix(s: Node, t: Node) -> bool:
    return len(s) <= len(t) and t[: len(s)] == s


def inc(s: Node, t: Node) -> tuple[int, int]:
    """First divergent directions of two distinct nodes.

    If one node extends the other, the next letter u of the longer one gives
    (u, u) regardless of argument order.  Otherwise the letters right after
    the meet give (i, j) with i taken from s; then inc(t, s) = (j, i).
    """
    if s == t:
        raise EqualNodesError(f"inc undefined on equal nodes {s!r}")
    r = meet(s, t)
    if len(r) == len(s):
        u = t[len(r)]
        return (u, u)
    if len(r) == len(t):
        u = s[len(r)]
        return (u, u)
    return (s[len(r)], t[len(r)])


@dataclass(frozen=True)
class GapFunction:
    """Total color table f : m x m -> {0..n-1} u {INF}.

    The n-gap condition (every finite color occurs) is not enforced on
    construction; operations that need it check the ``is_n_gap`` flag.
    """

    m: int
    n: int
    table: tuple

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("need m >= 1 and n >= 1")
        rows = tuple(tuple(row) for row in self.table)
        if len(rows) != self.m or any(len(row) != self.m for row in rows):
            raise ValueError(f"table must be {self.m}x{self.m}")
        for row in rows:
            for c in row:
                if c is INF:
                    continue
                if isinstance(c, bool) or not isinstance(c, int) or not 0 <= c < self.n:
                    raise ValueError(f"cell {c!r} not in {{0..{self.n - 1}}} u {{INF}}")
        object.__setattr__(self, "table", rows)

    def __call__(self, i: int, j: int) -> Color:
        return self.table[i][j]

    def colors(self) -> frozenset:
        """Finite colors occurring anywhere in the table."""
        return frozenset(c for row in self.table for c in row if c is not INF)

    @property
    def is_n_gap(self) -> bool:
        return len(self.colors()) == self.n

    def cells_of(self, c: Color) -> tuple:
        """Sorted (i, j) positions carrying color c."""
        return tuple(
            (i, j)
            for i in range(self.m)
            for j in range(self.m)
            if self.table[i][j] is c or self.table[i][j] == c
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "table": [[color_to_json(c) for c in row] for row in self.table],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GapFunction":
        try:
            m, n, table = data["m"], data["n"], data["table"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"gap function JSON needs keys m, n, table: {exc}")
        rows = [[color_from_json(c, n) for c in row] for row in table]
        return cls(m=m, n=n, table=tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class GapReport:
    total: bool
    n_gap: bool
    missing_colors: tuple


def validate_gap_function(f: GapFunction) -> GapReport:
    """Report totality and the n-gap condition (never raises)."""
    present = f.colors()
    missing = tuple(c for c in range(f.n) if c not in present)
    # Construction already guarantees totality; reported for JSON consumers.
    return GapReport(total=True, n_gap=not missing, missing_colors=missing)


def check_permutation(perm: Sequence[int], n: int) -> tuple:
    perm = tuple(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise BadPermutationError(f"{perm!r} is not a permutation of {n}")
    return perm


def permute_color(perm: Sequence[int], c: Color) -> Color:
    return INF if c is INF else perm[c]


def apply_color_permutation(perm: Sequence[int], f: GapFunction) -> GapFunction:
    """Relabel finite colors by a permutation of n; INF is fixed."""
    perm = check_permutation(perm, f.n)
    rows = tuple(tuple(permute_color(perm, c) for c in row) for row in f.table)
    return GapFunction(m=f.m, n=f.n, table=rows)


def all_permutations(n: int) -> Iterable[tuple]:
    from itertools import permutations

    return permutations(range(n))
