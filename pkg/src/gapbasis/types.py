"""n-types and their canonical representative gap functions.

An n-type partitions the colors into five roles (A, B, C, D, E) together
with a branch function psi on ordered distinct pairs of A, a partition P of
C into blocks of size one or two, and an attachment-target map gamma on D.
Each type indexes one equivalence class of minimal gaps; its canonical
representative is a gap function on the index set M = A* u P u D.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .core import (
    INF,
    GapFunction,
    check_permutation,
    color_code,
    color_from_json,
    color_to_json,
    permute_color,
)
from .errors import InvalidTypeError


@dataclass(frozen=True)
class NType:
    """Type data (A, B, C, D, E, psi, P, gamma); see ``validate_type``.

    Construction only normalizes ordering, so invalid candidates are
    representable and can be inspected via their validation report.
    """

    n: int
    A: tuple = ()
    B: tuple = ()
    C: tuple = ()
    D: tuple = ()
    E: tuple = ()
    psi: tuple = ()  # entries ((i, j), color)
    P: tuple = ()  # blocks, each a sorted tuple of colors
    gamma: tuple = ()  # entries (color, target)

    def __post_init__(self):
        for name in "ABCDE":
            object.__setattr__(self, name, tuple(sorted(getattr(self, name))))
        psi = tuple(sorted(((tuple(p), v) for p, v in self.psi),
                           key=lambda item: item[0]))
        object.__setattr__(self, "psi", psi)
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.P))
        object.__setattr__(self, "P", blocks)
        gamma = tuple(sorted(((k, v) for k, v in self.gamma), key=lambda item: item[0]))
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def make(cls, n, A=(), B=(), C=(), D=(), E=(), psi=None, P=(), gamma=None) -> "NType":
        """Build from sets and dicts; psi maps (i, j) pairs, gamma maps colors."""
        psi_entries = tuple((pair, v) for pair, v in (psi or {}).items())
        gamma_entries = tuple((k, v) for k, v in (gamma or {}).items())
        return cls(n=n, A=tuple(A), B=tuple(B), C=tuple(C), D=tuple(D), E=tuple(E),
                   psi=psi_entries, P=tuple(tuple(b) for b in P), gamma=gamma_entries)

    def psi_map(self) -> dict:
        return {pair: v for pair, v in self.psi}

    def gamma_map(self) -> dict:
        return {k: v for k, v in self.gamma}

    def canonical_key(self) -> tuple:
        code = lambda c: color_code(c, self.n)
        return (
            self.A, self.B, self.C, self.D, self.E,
            tuple((pair, code(v)) for pair, v in self.psi),
            self.P,
            tuple((k, code(v)) for k, v in self.gamma),
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "A": list(self.A),
            "B": list(self.B),
            "C": list(self.C),
            "D": list(self.D),
            "E": list(self.E),
            "psi": [[i, j, color_to_json(v)] for (i, j), v in self.psi],
            "P": [list(b) for b in self.P],
            "gamma": [[k, color_to_json(v)] for k, v in self.gamma],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NType":
        n = data["n"]
        return cls(
            n=n,
            A=tuple(data.get("A", ())),
            B=tuple(data.get("B", ())),
            C=tuple(data.get("C", ())),
            D=tuple(data.get("D", ())),
            E=tuple(data.get("E", ())),
            psi=tuple(((i, j), color_from_json(v, n)) for i, j, v in data.get("psi", ())),
            P=tuple(tuple(b) for b in data.get("P", ())),
            gamma=tuple((k, color_from_json(v, n)) for k, v in data.get("gamma", ())),
        )


@dataclass(frozen=True)
class TypeReport:
    valid: bool
    violations: tuple


def validate_type(alpha: NType) -> TypeReport:
    """Check every structural invariant of an n-type (report style, never raises)."""
    n = alpha.n
    bad = []
    parts = [alpha.A, alpha.B, alpha.C, alpha.D, alpha.E]
    seen = [c for part in parts for c in part]
    if sorted(seen) != list(range(n)):
        bad.append("A..E must partition the colors 0..n-1")
    A, B, C, D, E = (frozenset(p) for p in parts)

    pairs = {(i, j) for i in A for j in A if i != j}
    psi = alpha.psi_map()
    if set(psi.keys()) != pairs:
        bad.append("psi must be total on ordered distinct pairs of A")
    covered = {v for v in psi.values() if v is not INF}
    if not covered <= B:
        bad.append("psi values must lie in B u {INF}")
    if not B <= covered:
        bad.append("range of psi must cover B")

    in_blocks = [c for b in alpha.P for c in b]
    if sorted(in_blocks) != sorted(C):
        bad.append("P must partition C")
    if any(len(b) not in (1, 2) or len(set(b)) != len(b) for b in alpha.P):
        bad.append("P blocks must have size 1 or 2")

    gamma = alpha.gamma_map()
    if set(gamma.keys()) != D:
        bad.append("gamma must be total on D")
    if any(v is not INF and v not in B | E for v in gamma.values()):
        bad.append("gamma values must lie in B u E u {INF}")
    for e in E:
        if sum(1 for v in gamma.values() if v == e) < 2:
            bad.append(f"gamma must hit {e} in E at least twice")

    if not A:
        if B or D or E:
            bad.append("A empty forces B = D = E = empty")
        if any(len(b) != 2 for b in alpha.P):
            bad.append("A empty forces all P blocks to size 2")
    # Consequences of the above; retained as belt-and-braces checks.
    if len(A) <= 1 and B:
        bad.append("|A| <= 1 forces B empty")
    if len(D) < 2 * len(E):
        bad.append("need |D| >= 2|E|")
    if not A and n % 2 == 1:
        bad.append("A empty forces n even")
    return TypeReport(valid=not bad, violations=tuple(bad))


def _subsets(pool: Sequence[int]) -> Iterable[tuple]:
    for size in range(len(pool) + 1):
        yield from itertools.combinations(pool, size)


def _onto_psi_maps(A: Sequence[int], B: Sequence[int]) -> list:
    """All maps from ordered distinct pairs of A into B u {INF} covering B."""
    pairs = [(i, j) for i in A for j in A if i != j]
    values = list(B) + [INF]
    needed = frozenset(B)
    out = []
    for combo in itertools.product(values, repeat=len(pairs)):
        if needed <= {v for v in combo if v is not INF}:
            out.append(tuple(zip(pairs, combo)))
    return out


def _block_partitions(items: Sequence[int], doubletons_only: bool) -> list:
    """Partitions into blocks of size 1 or 2 (or 2 only), as sorted block tuples."""
    items = sorted(items)
    if not items:
        return [()]
    head, rest = items[0], items[1:]
    out = []
    if not doubletons_only:
        for sub in _block_partitions(rest, doubletons_only):
            out.append(((head,),) + sub)
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for sub in _block_partitions(remaining, doubletons_only):
            out.append(((head, partner),) + sub)
    return out


def _gamma_maps(D: Sequence[int], B: Sequence[int], E: Sequence[int]) -> list:
    values = list(B) + list(E) + [INF]
    out = []
    for combo in itertools.product(values, repeat=len(D)):
        if all(sum(1 for v in combo if v == e) >= 2 for e in E):
            out.append(tuple(zip(D, combo)))
    return out


def enumerate_types(n: int) -> tuple:
    """All valid n-types exactly once, in canonical order.

    Generation follows the definition: pick A, then B with an onto branch
    function, split the rest into C/D/E, and enumerate block partitions and
    attachment targets under their constraints.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    colors = tuple(range(n))
    found = []
    for A in _subsets(colors):
        rest = tuple(c for c in colors if c not in A)
        if not A:
            if n % 2:
                continue
            for P in _block_partitions(rest, doubletons_only=True):
                found.append(NType(n=n, C=rest, P=P))
            continue
        for B in _subsets(rest):
            if len(A) <= 1 and B:
                continue
            psis = _onto_psi_maps(A, B)
            if not psis:
                continue
            remaining = tuple(c for c in rest if c not in B)
            for C in _subsets(remaining):
                after_c = tuple(c for c in remaining if c not in C)
                for E in _subsets(after_c):
                    D = tuple(c for c in after_c if c not in E)
                    if len(D) < 2 * len(E):
                        continue
                    gammas = _gamma_maps(D, B, E)
                    partitions = _block_partitions(C, doubletons_only=False)
                    for psi, P, gamma in itertools.product(psis, partitions, gammas):
                        found.append(
                            NType(n=n, A=A, B=B, C=C, D=D, E=E, psi=psi, P=P, gamma=gamma)
                        )
    found.sort(key=lambda t: t.canonical_key())
    for t in found:
        report = validate_type(t)
        assert report.valid, report.violations
    return tuple(found)


def enumerate_types_crosscheck(n: int) -> tuple:
    """Independent second enumeration (label assignment first, then filters).

    Exists purely as double-entry bookkeeping for ``enumerate_types``: it
    assigns each color a role out of 5^n labelings, then brute-enumerates
    psi/P/gamma and keeps whatever validates.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    roles = "ABCDE"
    found = []
    for labeling in itertools.product(range(5), repeat=n):
        part = {role: tuple(c for c in range(n) if roles[labeling[c]] == role)
                for role in roles}
        A, B, C, D, E = (part[r] for r in roles)
        pairs = [(i, j) for i in A for j in A if i != j]
        psi_candidates = [
            tuple(zip(pairs, combo))
            for combo in itertools.product(list(B) + [INF], repeat=len(pairs))
        ]
        partition_candidates = _all_set_partitions(C)
        gamma_candidates = [
            tuple(zip(D, combo))
            for combo in itertools.product(list(B) + list(E) + [INF], repeat=len(D))
        ]
        for psi in psi_candidates:
            for P in partition_candidates:
                for gamma in gamma_candidates:
                    cand = NType(n=n, A=A, B=B, C=C, D=D, E=E, psi=psi, P=P, gamma=gamma)
                    if validate_type(cand).valid:
                        found.append(cand)
    found.sort(key=lambda t: t.canonical_key())
    return tuple(found)


def _all_set_partitions(items: Sequence[int]) -> list:
    items = sorted(items)
    if not items:
        return [()]
    head, rest = items[0], items[1:]
    out = []
    for sub in _all_set_partitions(rest):
        out.append(((head,),) + sub)
        for i, block in enumerate(sub):
            merged = tuple(sorted(block + (head,)))
            out.append(sub[:i] + (merged,) + sub[i + 1:])
    return out


PLACEHOLDER = ("*",)


@dataclass(frozen=True)
class Representative:
    """Canonical gap function of a type on the index set M = A* u P u D.

    ``labels`` names each index: ("A", color), ("*",) for the placeholder
    when A is empty, ("P", block) or ("D", color).  sigma and tau are the
    per-index values used to fill the table (tau is None on A*).
    """

    type: NType
    f: GapFunction
    labels: tuple
    sigma: tuple
    tau: tuple

    def label_json(self) -> list:
        out = []
        for lab in self.labels:
            if lab == PLACEHOLDER:
                out.append({"kind": "placeholder"})
            elif lab[0] == "A":
                out.append({"kind": "A", "color": lab[1]})
            elif lab[0] == "P":
                out.append({"kind": "P", "block": list(lab[1])})
            else:
                out.append({"kind": "D", "color": lab[1]})
        return out


def build_representative(alpha: NType) -> Representative:
    """Construct the canonical representative gap function of a valid type.

    M is enumerated as A*-colors ascending, then P-blocks ascending by their
    minimum, then D-colors ascending.  Diagonals carry sigma; A-pairs carry
    psi; elsewhere the cell carries sigma of the row or tau of the column
    depending on which side is the A* part or has the smaller sigma.
    """
    report = validate_type(alpha)
    if not report.valid:
        raise InvalidTypeError("; ".join(report.violations))
    gamma = alpha.gamma_map()
    psi = alpha.psi_map()
    A = alpha.A

    labels = []
    if A:
        labels.extend(("A", a) for a in A)
    else:
        labels.append(PLACEHOLDER)
    labels.extend(("P", b) for b in sorted(alpha.P, key=min))
    labels.extend(("D", d) for d in alpha.D)
    labels = tuple(labels)
    m = len(labels)

    def sigma_of(lab):
        if lab == PLACEHOLDER:
            return 0
        if lab[0] == "P":
            return min(lab[1])
        return lab[1]

    def tau_of(lab):
        if lab[0] == "P":
            return max(lab[1])
        if lab[0] == "D":
            return gamma[lab[1]]
        return None

    sigma = tuple(sigma_of(lab) for lab in labels)
    tau = tuple(tau_of(lab) for lab in labels)
    a_star = tuple(i for i, lab in enumerate(labels) if lab == PLACEHOLDER or lab[0] == "A")

    def cell(i, j):
        if i == j:
            return sigma[i]
        if i in a_star and j in a_star:
            return psi[(labels[i][1], labels[j][1])]
        if i not in a_star and (j in a_star or sigma[i] < sigma[j]):
            return sigma[i]
        if j not in a_star and (i in a_star or sigma[i] > sigma[j]):
            return tau[j]
        raise AssertionError(f"uncovered cell ({i}, {j}) of {alpha}")

    table = tuple(tuple(cell(i, j) for j in range(m)) for i in range(m))
    f = GapFunction(m=m, n=alpha.n, table=table)
    return Representative(type=alpha, f=f, labels=labels, sigma=sigma, tau=tau)


def permute_type(perm: Sequence[int], alpha: NType) -> NType:
    """Relabel every color of the type by a permutation of n (INF fixed)."""
    perm = check_permutation(perm, alpha.n)
    img = lambda c: perm[c]
    return NType(
        n=alpha.n,
        A=tuple(img(c) for c in alpha.A),
        B=tuple(img(c) for c in alpha.B),
        C=tuple(img(c) for c in alpha.C),
        D=tuple(img(c) for c in alpha.D),
        E=tuple(img(c) for c in alpha.E),
        psi=tuple(((img(i), img(j)), permute_color(perm, v)) for (i, j), v in alpha.psi),
        P=tuple(tuple(img(c) for c in b) for b in alpha.P),
        gamma=tuple((img(k), permute_color(perm, v)) for k, v in alpha.gamma),
    )


@dataclass(frozen=True)
class OrbitInfo:
    orbit_id: int
    representative: int
    members: tuple
    size: int


@dataclass(frozen=True)
class Orbits:
    n: int
    orbit_of: tuple  # type index -> orbit id
    orbits: tuple

    def sizes(self) -> tuple:
        return tuple(o.size for o in self.orbits)


def type_orbits(n: int, types: Optional[tuple] = None) -> Orbits:
    """Partition the canonical type list into orbits of the color-permutation action.

    Orbit ids are assigned by first appearance in canonical order, so each
    orbit's representative is its least member.
    """
    if types is None:
        types = enumerate_types(n)
    index_of = {t: i for i, t in enumerate(types)}
    orbit_of = [None] * len(types)
    orbits = []
    for idx, t in enumerate(types):
        if orbit_of[idx] is not None:
            continue
        members = sorted(
            {index_of[permute_type(perm, t)] for perm in itertools.permutations(range(n))}
        )
        oid = len(orbits)
        for member in members:
            orbit_of[member] = oid
        orbits.append(
            OrbitInfo(orbit_id=oid, representative=members[0],
                      members=tuple(members), size=len(members))
        )
    return Orbits(n=n, orbit_of=tuple(orbit_of), orbits=tuple(orbits))


def j_notation(f: GapFunction) -> tuple:
    """Per finite color, the sorted generator pairs (i, j) with f(i, j) = c."""
    return tuple(f.cells_of(c) for c in range(f.n))


def j_string(f: GapFunction) -> str:
    """Render a gap function in the J^m ideal notation, one entry per color."""
    parts = []
    for pairs in j_notation(f):
        inner = ",".join(f"{i}{j}" for i, j in pairs)
        parts.append(f"J^{f.m}_({inner})")
    return "{" + ", ".join(parts) + "}"
