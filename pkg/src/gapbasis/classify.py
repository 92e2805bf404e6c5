"""Classification engine: catalogs of minimal types, type derivation, clovers.

``derive_type`` reads the invariant data (pbranch, attachments through a
minimal symmetric covering set) off any n-gap and assembles the unique type
whose representative embeds below it; ``derivation_witness`` constructs the
explicit reduction map.  ``minimal_basis`` packages the full catalog for one
n, and the verify suites re-check the classification facts mechanically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import INF, GapFunction, color_code, color_to_json
from .errors import (
    Condition1ViolatedError,
    NotAnNGapError,
    TooSmallNError,
    TraceMismatchError,
)
from .invariants import is_attached, is_branch_reduced, pbranch
from .reduction import (
    ReductionMap,
    brute_search_reduction,
    identity_reduction,
    is_witness,
    search_reduction,
)
from .treelab import SubtreeDescriptor, subtree_comb_colors
from .types import (
    NType,
    Orbits,
    Representative,
    build_representative,
    enumerate_types,
    j_notation,
    j_string,
    type_orbits,
)


def gap_leq(f: GapFunction, g: GapFunction, engine: str = "pruned") -> bool:
    """Decide whether the gap generated by f embeds below the one generated by g."""
    return gap_leq_witness(f, g, engine=engine) is not None


def gap_leq_witness(
    f: GapFunction, g: GapFunction, engine: str = "pruned"
) -> Optional[ReductionMap]:
    if engine == "pruned":
        return search_reduction(f, g)
    if engine == "brute":
        return brute_search_reduction(f, g, k_max=f.m + 1)
    raise ValueError(f"unknown engine {engine!r}")


def gap_equivalent(f: GapFunction, g: GapFunction, engine: str = "pruned") -> bool:
    """Both-direction embedding; for minimal gaps one direction implies the other."""
    return gap_leq(f, g, engine=engine) and gap_leq(g, f, engine=engine)


# ---------------------------------------------------------------------------
# Catalogs


@dataclass(frozen=True)
class CatalogEntry:
    index: int
    type: NType
    rep: Representative
    j: tuple
    orbit_id: int

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "type": self.type.to_json(),
            "f": self.rep.f.to_json(),
            "labels": self.rep.label_json(),
            "j": [[list(pair) for pair in pairs] for pairs in self.j],
            "j_string": j_string(self.rep.f),
            "orbit_id": self.orbit_id,
        }


@dataclass(frozen=True)
class Catalog:
    n: int
    version: str
    entries: tuple
    orbits: Orbits

    def types(self) -> tuple:
        return tuple(e.type for e in self.entries)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "version": self.version,
            "count": len(self.entries),
            "entries": [e.to_json() for e in self.entries],
            "orbits": [
                {
                    "orbit_id": o.orbit_id,
                    "size": o.size,
                    "representative": o.representative,
                    "members": list(o.members),
                }
                for o in self.orbits.orbits
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Catalog":
        from .types import OrbitInfo  # local to keep module surface flat

        entries = []
        for raw in data["entries"]:
            alpha = NType.from_json(raw["type"])
            rep = build_representative(alpha)
            f = GapFunction.from_json(raw["f"])
            if f != rep.f:
                raise ValueError("catalog entry table does not match its type")
            entries.append(
                CatalogEntry(
                    index=raw["index"],
                    type=alpha,
                    rep=rep,
                    j=j_notation(rep.f),
                    orbit_id=raw["orbit_id"],
                )
            )
        orbits = Orbits(
            n=data["n"],
            orbit_of=tuple(e.orbit_id for e in entries),
            orbits=tuple(
                OrbitInfo(
                    orbit_id=o["orbit_id"],
                    representative=o["representative"],
                    members=tuple(o["members"]),
                    size=o["size"],
                )
                for o in data["orbits"]
            ),
        )
        return cls(n=data["n"], version=data["version"], entries=tuple(entries), orbits=orbits)


def compute_catalog(n: int) -> Catalog:
    """Enumerate all n-types with representatives, J-notation and orbit ids."""
    from . import __version__

    types = enumerate_types(n)
    orbits = type_orbits(n, types)
    entries = []
    for i, t in enumerate(types):
        rep = build_representative(t)
        entries.append(
            CatalogEntry(index=i, type=t, rep=rep, j=j_notation(rep.f),
                         orbit_id=orbits.orbit_of[i])
        )
    return Catalog(n=n, version=__version__, entries=tuple(entries), orbits=orbits)


def minimal_basis(n: int, cache_dir=None, use_cache: bool = True) -> Catalog:
    """The full catalog for n, loaded from the on-disk cache when fresh."""
    if n < 1:
        raise ValueError("need n >= 1")
    if not use_cache:
        return compute_catalog(n)
    from .store import get_catalog

    return get_catalog(n, cache_dir=cache_dir)


# ---------------------------------------------------------------------------
# Type derivation


@dataclass(frozen=True)
class DerivationTrace:
    """Intermediate data of a type derivation, kept for witness building.

    phi is the chosen minimal symmetric set of off-diagonal cells covering
    the colors outside A u B; approx is the swap relation it induces.
    """

    A: tuple
    u: tuple  # (color, direction) pairs for A-colors
    psi: tuple
    B: tuple
    F: tuple
    phi: tuple
    approx: tuple
    E: tuple
    C: tuple
    D: tuple
    P: tuple
    gamma: tuple

    def to_json(self) -> dict:
        def cells(pairs):
            return [list(p) for p in pairs]

        return {
            "A": list(self.A),
            "u": cells(self.u),
            "psi": [[i, j, color_to_json(v)] for (i, j), v in self.psi],
            "B": list(self.B),
            "F": list(self.F),
            "phi": cells(self.phi),
            "approx": [[color_to_json(k), color_to_json(l)] for k, l in self.approx],
            "E": list(self.E),
            "C": list(self.C),
            "D": list(self.D),
            "P": [list(b) for b in self.P],
            "gamma": [[k, color_to_json(v)] for k, v in self.gamma],
        }


def _minimal_symmetric_cover(g: GapFunction, F: frozenset) -> tuple:
    """Greedy row-major symmetric set of off-diagonal cells covering F, pruned to minimality."""
    chosen: list = []
    covered: set = set()
    for i in range(g.m):
        for j in range(g.m):
            if i == j or {(i, j), (j, i)} <= set(chosen):
                continue
            gained = {g(i, j), g(j, i)} & F
            if gained - covered:
                chosen.append((i, j))
                chosen.append((j, i))
                covered |= gained
    # Later picks can make earlier ones redundant; prune in insertion order.
    idx = 0
    while idx < len(chosen):
        i, j = chosen[idx]
        trial = [p for p in chosen if p not in ((i, j), (j, i))]
        if F <= {g(a, b) for a, b in trial}:
            chosen = trial
        else:
            idx += 2
    return tuple(sorted(chosen))


def condition1_holds(g: GapFunction) -> bool:
    from .invariants import _distinct_attached_partner

    return all(_distinct_attached_partner(g, k) is not None for k in range(g.n))


def derive_type(g: GapFunction) -> tuple:
    """Read the type of some minimal gap below g off its invariant structure.

    Requires pbranch(g) nonempty or the mutual-attachment condition; callers
    with arbitrary input normalize through ``ensure_pbranch`` first.  Returns
    the valid type together with the trace needed to build a witness.
    """
    if not g.is_n_gap:
        raise NotAnNGapError("derive_type needs an n-gap")
    A = frozenset(pbranch(g))
    if not A and not condition1_holds(g):
        raise Condition1ViolatedError(
            "pbranch empty and some color lacks a distinct attached partner; "
            "normalize via ensure_pbranch first"
        )
    u_of = {}
    for color in sorted(A):
        u_of[color] = min(w for w in range(g.m) if g(w, w) == color)
    psi = {
        (i, j): g(u_of[i], u_of[j])
        for i in sorted(A)
        for j in sorted(A)
        if i != j
    }
    B = frozenset(v for v in psi.values() if v is not INF)
    F = frozenset(range(g.n)) - A - B
    phi = _minimal_symmetric_cover(g, F)
    approx = sorted(
        {(g(i, j), g(j, i)) for i, j in phi},
        key=lambda pair: (color_code(pair[0], g.n), color_code(pair[1], g.n)),
    )

    def partners(k):
        return {l for kk, l in approx if kk == k}

    E = frozenset(
        k for k in F
        if len([l for l in partners(k) if l is not INF and l in F]) >= 2
    )
    C = frozenset(
        k for k in F - E
        if any(l is not INF and l in F - E for l in partners(k))
    )
    D = F - C - E

    blocks = set()
    for k in C:
        mates = {l for l in partners(k) if l is not INF and l in C}
        assert mates, f"color {k} lost its partner"
        blocks.add(tuple(sorted({k} | mates)))
    P = tuple(sorted(blocks))

    gamma = {}
    for k in sorted(D):
        mates = partners(k)
        assert len(mates) == 1, f"attachment target of {k} not unique: {mates}"
        gamma[k] = next(iter(mates))

    alpha = NType.make(
        n=g.n, A=A, B=B, C=C, D=D, E=E, psi=psi,
        P=P, gamma=gamma,
    )
    from .types import validate_type

    report = validate_type(alpha)
    assert report.valid, report.violations
    trace = DerivationTrace(
        A=tuple(sorted(A)),
        u=tuple(sorted(u_of.items())),
        psi=alpha.psi,
        B=tuple(sorted(B)),
        F=tuple(sorted(F)),
        phi=phi,
        approx=tuple(approx),
        E=tuple(sorted(E)),
        C=tuple(sorted(C)),
        D=tuple(sorted(D)),
        P=P,
        gamma=alpha.gamma,
    )
    return alpha, trace


def derivation_witness(g: GapFunction, alpha: NType, trace: DerivationTrace) -> ReductionMap:
    """Explicit reduction showing the derived type's representative embeds below g.

    Orders D u P by their diagonal color, picks one covering cell per item
    from the trace's symmetric set, and stacks them into x and the e-words;
    A*-colors ride on top of x through their chosen diagonal directions.
    When A is empty and color 0 misses g's diagonal, the stack gets one extra
    level so the placeholder can diverge from x instead of extending it.
    """
    if tuple(sorted(alpha.A)) != trace.A or alpha.psi != trace.psi:
        raise TraceMismatchError("trace does not belong to this type")
    rep = build_representative(alpha)
    u_of = dict(trace.u)
    gamma = alpha.gamma_map()

    def sigma_of(item):
        return min(item) if isinstance(item, tuple) else item

    def tau_of(item):
        return max(item) if isinstance(item, tuple) else gamma[item]

    zs = sorted(list(alpha.P) + list(alpha.D), key=sigma_of)
    q = len(zs) + 1
    cells = []
    for z in zs:
        want_s, want_t = sigma_of(z), tau_of(z)
        pick = None
        for i, j in trace.phi:
            gt = g(j, i)
            if g(i, j) == want_s and (gt is want_t or gt == want_t):
                pick = (i, j)
                break
        if pick is None:
            raise TraceMismatchError(f"no covering cell for diagonal color {want_s}")
        cells.append(pick)
    x = tuple(j for _, j in cells)

    words = {}
    for xi, z in enumerate(zs):
        word = list(x[:xi]) + [cells[xi][0]]
        words[("z", xi)] = tuple(word + [0] * (q - len(word)))

    extra_level = False
    if alpha.A:
        for color in alpha.A:
            words[("a", color)] = x + (u_of[color],)
    else:
        on_diag = [w for w in range(g.m) if g(w, w) == 0]
        if on_diag:
            words[("a", None)] = x + (min(on_diag),)
        else:
            # Placeholder must diverge from x; add one level re-using the
            # cell that carries color 0 (the least diagonal value of M).
            extra_level = True
            i0, j0 = cells[0]
            x = x + (j0,)
            q += 1
            words = {key: word + (0,) for key, word in words.items()}
            words[("a", None)] = x[:-1] + (i0, 0)

    labels_in_order = []
    if alpha.A:
        labels_in_order.extend(("a", c) for c in alpha.A)
    else:
        labels_in_order.append(("a", None))
    labels_in_order.extend(("z", xi) for xi in range(len(zs)))
    # Match the representative's index order: A* first, then P-blocks by
    # minimum, then D ascending; zs is sorted the same way already except
    # blocks and D-colors interleave by sigma, mirroring the labels.
    order = {}
    for idx, lab in enumerate(rep.labels):
        if lab == ("*",):
            order[("a", None)] = idx
        elif lab[0] == "A":
            order[("a", lab[1])] = idx
        elif lab[0] == "P":
            order[("z", zs.index(lab[1]))] = idx
        else:
            order[("z", zs.index(lab[1]))] = idx
    e = [None] * len(rep.labels)
    for key, word in words.items():
        e[order[key]] = word
    r = ReductionMap(m0=len(e), m1=g.m, k=q, e=tuple(e), x=x)
    if not is_witness(r, rep.f, g):
        raise TraceMismatchError("constructed map does not witness the derived type")
    return r


# ---------------------------------------------------------------------------
# Queries against the catalog


def minimal_types_below(g: GapFunction, catalog: Optional[Catalog] = None) -> tuple:
    """All catalog types whose representative embeds below g (never empty)."""
    if not g.is_n_gap:
        raise NotAnNGapError("minimal_types_below needs an n-gap")
    if catalog is None:
        catalog = minimal_basis(g.n)
    return tuple(
        entry.type
        for entry in catalog.entries
        if search_reduction(entry.rep.f, g) is not None
    )


def classify_gap(f: GapFunction, catalog: Optional[Catalog] = None) -> dict:
    """Minimality test: f is minimal iff it is equivalent to some catalog representative."""
    if not f.is_n_gap:
        raise NotAnNGapError("classify needs an n-gap")
    if catalog is None:
        catalog = minimal_basis(f.n)
    below = []
    matches = []
    for entry in catalog.entries:
        if search_reduction(entry.rep.f, f) is None:
            continue
        below.append(entry.index)
        if search_reduction(f, entry.rep.f) is not None:
            matches.append(entry.index)
    return {
        "minimal": bool(matches),
        "equivalent_to": matches,
        "minimal_types_below": below,
    }


@dataclass(frozen=True)
class CloverWitness:
    X: frozenset
    Y: frozenset
    subtree: SubtreeDescriptor

    def to_json(self) -> dict:
        return {
            "X": sorted(self.X),
            "Y": sorted(self.Y),
            "subtree": self.subtree.to_json(),
        }


def clover_witness(alpha: NType) -> CloverWitness:
    """Sub-gap decomposition data showing the type's gap is not a clover.

    With a diagonal-only color i, banning its index at even positions kills
    exactly the i-chains, so X = everything else.  With A empty, restricting
    to the placeholder and the least block realizes exactly that block's two
    colors.
    """
    if alpha.n < 3:
        raise TooSmallNError("clover decompositions need n >= 3")
    rep = build_representative(alpha)
    if alpha.A:
        i = min(alpha.A)
        idx = rep.labels.index(("A", i))
        sub = SubtreeDescriptor(m=rep.f.m, forbidden_even=idx)
        X = frozenset(range(alpha.n)) - {i}
        return CloverWitness(X=X, Y=frozenset({i}), subtree=sub)
    block = min(alpha.P, key=min)
    idx = rep.labels.index(("P", block))
    sub = SubtreeDescriptor(m=rep.f.m, allowed=(0, idx))
    X = frozenset(block) | {0}
    return CloverWitness(X=X, Y=frozenset(range(alpha.n)) - X, subtree=sub)


# ---------------------------------------------------------------------------
# Verification suites


def representative_properties(alpha: NType, rep: Optional[Representative] = None) -> dict:
    """The four structural facts every representative must satisfy."""
    if rep is None:
        rep = build_representative(alpha)
    f = rep.f
    A = frozenset(alpha.A)
    checks = {
        "pbranch_is_A": pbranch(f) == A,
        "branch_reduced": is_branch_reduced(f, A, alpha.psi_map()),
        "blocks_attached": all(
            is_attached(f, b[0], b[-1]) and is_attached(f, b[-1], b[0])
            for b in alpha.P
        ),
        "gamma_attached": all(is_attached(f, k, v) for k, v in alpha.gamma),
    }
    checks["ok"] = all(checks.values())
    return checks


def verify_pairwise_incomparable(
    n: int, engine: str = "pruned", catalog: Optional[Catalog] = None
) -> dict:
    """No representative embeds below a different type's representative."""
    if catalog is None:
        catalog = minimal_basis(n)
    entries = catalog.entries
    violations = []
    for a in entries:
        for b in entries:
            if a.index == b.index:
                continue
            if gap_leq_witness(a.rep.f, b.rep.f, engine=engine) is not None:
                violations.append((a.index, b.index))
    return {
        "engine": engine,
        "ordered_pairs": len(entries) * (len(entries) - 1),
        "violations": violations,
        "passed": not violations,
    }


def verify_self_identity(n: int, engine: str = "pruned", catalog: Optional[Catalog] = None) -> dict:
    """Every representative reduces to itself through the identity witness."""
    if catalog is None:
        catalog = minimal_basis(n)
    violations = []
    for entry in catalog.entries:
        r = gap_leq_witness(entry.rep.f, entry.rep.f, engine=engine)
        if r != identity_reduction(entry.rep.f.m):
            violations.append(entry.index)
    return {
        "engine": engine,
        "count": len(catalog.entries),
        "violations": violations,
        "passed": not violations,
    }


def verify_suite(n: int, engines=("pruned",), catalog: Optional[Catalog] = None) -> dict:
    """Pairwise incomparability, identity self-pairs, structural properties,
    and derivation round-trips for one n, as a JSON-ready report."""
    if isinstance(engines, str):
        engines = (engines,)
    if catalog is None:
        catalog = minimal_basis(n)
    pairwise = {
        eng: verify_pairwise_incomparable(n, engine=eng, catalog=catalog)
        for eng in engines
    }
    selfcheck = {
        eng: verify_self_identity(n, engine=eng, catalog=catalog) for eng in engines
    }
    structural = [
        entry.index
        for entry in catalog.entries
        if not representative_properties(entry.type, entry.rep)["ok"]
    ]
    roundtrip = []
    for entry in catalog.entries:
        alpha, trace = derive_type(entry.rep.f)
        if alpha != entry.type:
            roundtrip.append(entry.index)
            continue
        witness = derivation_witness(entry.rep.f, alpha, trace)
        if not is_witness(witness, build_representative(alpha).f, entry.rep.f):
            roundtrip.append(entry.index)
    report = {
        "n": n,
        "engines": list(engines),
        "pairwise": pairwise,
        "self_pairs": selfcheck,
        "structural_violations": structural,
        "derive_roundtrip_violations": roundtrip,
    }
    report["passed"] = (
        all(r["passed"] for r in pairwise.values())
        and all(r["passed"] for r in selfcheck.values())
        and not structural
        and not roundtrip
    )
    return report
