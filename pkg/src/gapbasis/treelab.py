"""Finite-depth semantics on the m-adic tree: chains, combs, and subtree checks.

A u-chain is a set of nodes each extending the previous one through letter
u; a (u, v)-comb hangs v-successors off a u-chain spine, with each tooth
shorter than the next spine node.  Finite prefixes of these patterns are
already recognizable from two nodes, which is what ties comb kinds to the
incidence function and lets reduction maps act on them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import INF, GapFunction, Node, inc, is_prefix, meet
from .errors import (
    BadAlphabetError,
    BadDirectionError,
    DimensionMismatchError,
    TooSmallError,
)
from .reduction import ReductionMap


@dataclass(frozen=True)
class FiniteComb:
    """A finite chain or comb prefix.

    For kind (u, u) the nodes themselves form the chain and the spine is
    empty.  For kind (u, v) with u != v the spine holds one u-chain node per
    tooth.  kind None marks the degenerate single-node outcome of
    ``extract_comb`` when the input contains no two-node pattern.
    """

    nodes: tuple
    kind: Optional[tuple]
    spine: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(tuple(t) for t in self.nodes))
        object.__setattr__(self, "spine", tuple(tuple(s) for s in self.spine))
        if self.kind is not None:
            object.__setattr__(self, "kind", (int(self.kind[0]), int(self.kind[1])))

    def to_json(self) -> dict:
        kind = list(self.kind) if self.kind is not None else None
        return {"kind": kind, "nodes": [list(t) for t in self.nodes]}


def make_comb(u: int, v: int, length: int, m: Optional[int] = None, rng=None) -> FiniteComb:
    """Build a valid comb prefix of kind (u, v) with `length` nodes.

    Without rng the minimal deterministic pattern is produced; with an int
    seed or random.Random the spine steps and teeth get random padding, still
    deterministically per seed.
    """
    if m is None:
        m = max(u, v) + 1
    if not (0 <= u < m and 0 <= v < m):
        raise BadDirectionError(f"directions ({u}, {v}) must lie below m={m}")
    if length < 1:
        raise ValueError("need length >= 1")
    if isinstance(rng, int):
        rng = random.Random(rng)

    def tail(count):
        return tuple(rng.randrange(m) for _ in range(count)) if rng else ()

    if u == v:
        nodes = []
        current: Node = ()
        for _ in range(length):
            current = current + (u,) + (tail(rng.randrange(3)) if rng else ())
            nodes.append(current)
        return FiniteComb(nodes=tuple(nodes), kind=(u, u), spine=())

    spine = [()]
    teeth = []
    for _ in range(length):
        s = spine[-1]
        tooth = s + (v,) + (tail(rng.randrange(3)) if rng else ())
        teeth.append(tooth)
        # next spine node must outgrow the tooth
        growth = len(tooth) - len(s) + (rng.randrange(2) if rng else 0)
        pad = tail(growth) if rng else (u,) * growth
        spine.append(s + (u,) + pad)
    return FiniteComb(nodes=tuple(teeth), kind=(u, v), spine=tuple(spine[:length]))


def comb_type_of(nodes: Iterable[Node]) -> Optional[tuple]:
    """The unique kind (u, v) the node set instantiates, or None.

    Comparable sets can only be chains; incomparable ones only combs, and
    consecutive meets pin the spine, so at most one kind ever fits.
    """
    ns = sorted({tuple(t) for t in nodes}, key=lambda t: (len(t), t))
    if len(ns) < 2:
        raise TooSmallError("need at least two nodes to classify")
    if len({len(t) for t in ns}) != len(ns):
        return None  # two nodes of equal length fit no pattern

    if is_prefix(ns[0], ns[1]):
        u = ns[1][len(ns[0])]
        for a, b in zip(ns, ns[1:]):
            if not is_prefix(a, b) or b[len(a)] != u:
                return None
        return (u, u)

    meets = [meet(a, b) for a, b in zip(ns, ns[1:])]
    if any(len(r) == len(a) for a, r in zip(ns, meets)):
        return None  # mixed comparabilities
    v = ns[0][len(meets[0])]
    u = ns[1][len(meets[0])]
    for tooth, nxt, r in zip(ns, ns[1:], meets):
        if tooth[len(r)] != v or nxt[len(r)] != u:
            return None
    for r1, r2 in zip(meets, meets[1:]):
        # r2 is a prefix of the shared tooth, so r2 > r1 already forces r1^u <= r2.
        if len(r2) <= len(r1):
            return None
    for tooth, r_next in zip(ns, meets[1:]):
        if len(tooth) >= len(r_next):
            return None
    last, prev = ns[-1], ns[-2]
    if not any(last[L] == v for L in range(len(prev) + 1, len(last))):
        return None  # no admissible final spine node
    return (u, v)


def _longest_chain(ns: list, u: int) -> tuple:
    """Longest subset forming a u-chain; returns (teeth, spine=())."""
    node_set = set(ns)
    best = {}
    parent = {}
    for t in ns:  # ns sorted by length: predecessors are strictly shorter
        b, par = 1, None
        for L in range(len(t)):
            if t[L] != u:
                continue
            prefix = t[:L]
            if prefix in node_set and best.get(prefix, 0) + 1 > b:
                b, par = best[prefix] + 1, prefix
        best[t] = b
        parent[t] = par
    top = max(ns, key=lambda t: (best[t], -len(t)))
    chain = []
    while top is not None:
        chain.append(top)
        top = parent[top]
    return tuple(reversed(chain)), ()


def _longest_comb(ns: list, u: int, v: int) -> tuple:
    """Longest subset forming a (u, v)-comb; returns (teeth, spine)."""
    states = []  # (spine node, tooth index)
    for ti, t in enumerate(ns):
        for L in range(len(t)):
            if t[L] == v:
                states.append((t[:L], ti))
    states.sort(key=lambda st: (len(st[0]), st[0], st[1]))
    best = [1] * len(states)
    parent: list = [None] * len(states)
    by_spine: dict = {}
    for sid, (s, ti) in enumerate(states):
        for L in range(len(s)):
            if s[L] != u:
                continue
            for tooth_len, value, prev_sid in by_spine.get(s[:L], ()):
                if tooth_len < len(s) and value + 1 > best[sid]:
                    best[sid] = value + 1
                    parent[sid] = prev_sid
        by_spine.setdefault(s, []).append((len(ns[ti]), best[sid], sid))
    if not states:
        return (), ()
    top = max(range(len(states)), key=lambda sid: best[sid])
    teeth, spine = [], []
    while top is not None:
        s, ti = states[top]
        teeth.append(ns[ti])
        spine.append(s)
        top = parent[top]
    return tuple(reversed(teeth)), tuple(reversed(spine))


def extract_comb(nodes: Iterable[Node]) -> FiniteComb:
    """Longest chain or comb contained in a finite node set.

    Finite-scale counterpart of the fact that every infinite set of nodes
    contains an infinite comb: spines are climbed over all admissible
    positions (dynamic programming per kind) and the best kind wins, ties
    going to the lexicographically least (u, v).  Output nodes are a subset
    of the input and classify as the reported kind; if no two-node pattern
    exists the least node is returned with kind None.
    """
    ns = sorted({tuple(t) for t in nodes}, key=lambda t: (len(t), t))
    if len(ns) < 2:
        raise TooSmallError("need at least two nodes")
    letters = {w for t in ns for w in t}
    m = max(letters) + 1 if letters else 1
    best: Optional[tuple] = None  # (count, kind, teeth, spine)
    for u in range(m):
        for v in range(m):
            teeth, spine = _longest_chain(ns, u) if u == v else _longest_comb(ns, u, v)
            if best is None or len(teeth) > best[0]:
                best = (len(teeth), (u, v), teeth, spine)
    count, kind, teeth, spine = best
    if count < 2:
        return FiniteComb(nodes=(ns[0],), kind=None, spine=())
    return FiniteComb(nodes=teeth, kind=kind, spine=spine if kind[0] != kind[1] else ())


def tree_image(r: ReductionMap, node: Node) -> Node:
    """Image of a node under the tree embedding induced by a reduction map.

    Each letter expands to its e-word and x is appended; elementwise this
    maps (u, v)-comb prefixes onto comb prefixes of the induced kind.
    """
    out = []
    for w in node:
        if not 0 <= w < r.m0:
            raise BadAlphabetError(f"letter {w} outside source alphabet {r.m0}")
        out.extend(r.e[w])
    out.extend(r.x)
    return tuple(out)


@dataclass(frozen=True)
class SubtreeDescriptor:
    """Finite presentation of an infinite subtree of the m-adic tree.

    Either a letter restriction (nodes over a sub-alphabet) or a parity
    restriction: even-length nodes avoiding one letter at even positions.
    """

    m: int
    allowed: Optional[tuple] = None
    forbidden_even: Optional[int] = None

    def __post_init__(self):
        if (self.allowed is None) == (self.forbidden_even is None):
            raise ValueError("exactly one of allowed / forbidden_even must be set")
        if self.allowed is not None:
            letters = tuple(sorted(set(self.allowed)))
            if not letters or any(not 0 <= w < self.m for w in letters):
                raise ValueError("allowed letters must be a nonempty subset of the alphabet")
            object.__setattr__(self, "allowed", letters)
        else:
            if not 0 <= self.forbidden_even < self.m:
                raise ValueError("forbidden letter outside alphabet")
            if self.m < 2:
                raise ValueError("parity restriction needs m >= 2 to stay infinite")

    def contains(self, node: Node) -> bool:
        if self.allowed is not None:
            return all(w in self.allowed for w in node)
        if len(node) % 2:
            return False
        return all(node[p] != self.forbidden_even for p in range(0, len(node), 2))

    def to_json(self) -> dict:
        if self.allowed is not None:
            return {"kind": "letters", "m": self.m, "allowed": list(self.allowed)}
        return {"kind": "parity", "m": self.m, "forbidden": self.forbidden_even}

    @classmethod
    def from_json(cls, data: dict) -> "SubtreeDescriptor":
        if data.get("kind") == "letters":
            return cls(m=data["m"], allowed=tuple(data["allowed"]))
        if data.get("kind") == "parity":
            return cls(m=data["m"], forbidden_even=data["forbidden"])
        raise ValueError("subtree descriptor kind must be 'letters' or 'parity'")


def realized_kinds(d: SubtreeDescriptor, depth: int) -> frozenset:
    """Kinds (u, v) witnessed by a two-node pattern inside the truncated subtree.

    Chain nodes must lie in the subtree; comb spines may roam the full tree.
    Computed bottom-up over all nodes of length <= depth.
    """
    m = d.m
    no_len = depth + 2  # stands in for "no subtree extension"
    chain_ok = [False] * m
    comb_ok = [[False] * m for _ in range(m)]
    child_se: dict = {}
    child_ml: dict = {}
    child_ms: dict = {}
    for length in range(depth, -1, -1):
        se_map, ml_map, ms_map = {}, {}, {}
        for node in itertools.product(range(m), repeat=length):
            ins = d.contains(node)
            se = ins
            ml = length if ins else no_len
            ms = [-1] * m
            if length < depth:
                for w in range(m):
                    child = node + (w,)
                    if child_se[child]:
                        se = True
                    if child_ml[child] < ml:
                        ml = child_ml[child]
                    cms = child_ms[child]
                    for vv in range(m):
                        if cms[vv] > ms[vv]:
                            ms[vv] = cms[vv]
                for vv in range(m):
                    if child_se[node + (vv,)] and length > ms[vv]:
                        ms[vv] = length
                for uu in range(m):
                    if ins and child_se[node + (uu,)]:
                        chain_ok[uu] = True
                    for vv in range(m):
                        if uu == vv:
                            continue
                        shortest_tooth = child_ml[node + (vv,)]
                        if shortest_tooth <= depth and child_ms[node + (uu,)][vv] > shortest_tooth:
                            comb_ok[uu][vv] = True
            se_map[node] = se
            ml_map[node] = ml
            ms_map[node] = ms
        child_se, child_ml, child_ms = se_map, ml_map, ms_map
    kinds = {(u, u) for u in range(m) if chain_ok[u]}
    kinds |= {(u, v) for u in range(m) for v in range(m) if u != v and comb_ok[u][v]}
    return frozenset(kinds)


def subtree_comb_colors(f: GapFunction, d: SubtreeDescriptor, depth: int = 6) -> frozenset:
    """Finite colors realized by comb prefixes living inside the subtree."""
    if d.m != f.m:
        raise DimensionMismatchError(f"descriptor alphabet {d.m} != gap alphabet {f.m}")
    return frozenset(
        f(u, v) for u, v in realized_kinds(d, depth) if f(u, v) is not INF
    )
