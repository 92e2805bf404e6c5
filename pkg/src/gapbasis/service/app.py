"""FastAPI service wrapping the library.

One long-lived process holds computed catalogs in memory (and on disk via
the store), so repeated leq/classify/verify queries do not re-enumerate.
The CLI is a thin client of these endpoints.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..classify import (
    classify_gap,
    clover_witness,
    derivation_witness,
    derive_type,
    gap_leq_witness,
    minimal_types_below,
    verify_suite,
)
from ..core import GapFunction, color_to_json, validate_gap_function
from ..errors import GapbasisError
from ..invariants import (
    Condition1Report,
    attachment_profile,
    ensure_pbranch,
    pbranch,
)
from ..store import get_catalog
from ..treelab import comb_type_of, extract_comb, make_comb, tree_image
from ..types import j_string
from .models import (
    CatalogResponse,
    ClassifyResponse,
    CloverRequest,
    CombImageRequest,
    CombMakeRequest,
    CombResponse,
    DeriveResponse,
    EquivResponse,
    GapRequest,
    InvariantsResponse,
    LeqRequest,
    LeqResponse,
    NodesRequest,
    NRequest,
    OrbitsResponse,
    PairRequest,
    StatusResponse,
    TypesResponse,
    VerifyRequest,
)


def create_app(cache_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(
        title="gapbasis",
        version=__version__,
        description="Catalogs and decision procedures for comb-generated multiple gaps.",
    )
    catalogs: dict = {}

    def catalog(n: int):
        if n not in catalogs:
            catalogs[n] = get_catalog(n, cache_dir=cache_dir)
        return catalogs[n]

    @app.exception_handler(GapbasisError)
    async def domain_error(request: Request, exc: GapbasisError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.get("/health", response_model=StatusResponse)
    def health():
        return StatusResponse(status="ok", version=__version__)

    @app.post("/types", response_model=TypesResponse)
    def types(req: NRequest):
        cat = catalog(req.n)
        return TypesResponse(
            n=req.n,
            count=len(cat.entries),
            types=[e.type.to_json() for e in cat.entries],
        )

    @app.post("/basis", response_model=CatalogResponse)
    def basis(req: NRequest):
        data = catalog(req.n).to_json()
        return CatalogResponse(**data)

    @app.post("/orbits", response_model=OrbitsResponse)
    def orbits(req: NRequest):
        cat = catalog(req.n)
        payload = [
            {
                "orbit_id": o.orbit_id,
                "size": o.size,
                "representative": o.representative,
                "members": list(o.members),
                "j_string": j_string(cat.entries[o.representative].rep.f),
            }
            for o in cat.orbits.orbits
        ]
        return OrbitsResponse(n=req.n, count=len(payload), orbits=payload)

    @app.post("/leq", response_model=LeqResponse)
    def leq(req: LeqRequest):
        witness = gap_leq_witness(req.f.to_domain(), req.g.to_domain(), engine=req.engine)
        return LeqResponse(
            leq=witness is not None,
            engine=req.engine,
            witness=witness.to_json() if witness else None,
        )

    @app.post("/equiv", response_model=EquivResponse)
    def equiv(req: PairRequest):
        f, g = req.f.to_domain(), req.g.to_domain()
        fwd = gap_leq_witness(f, g)
        bwd = gap_leq_witness(g, f) if fwd is not None else None
        return EquivResponse(
            equivalent=fwd is not None and bwd is not None,
            forward=fwd.to_json() if fwd else None,
            backward=bwd.to_json() if bwd else None,
        )

    @app.post("/invariants", response_model=InvariantsResponse)
    def invariants(req: GapRequest):
        f = req.f.to_domain()
        report = validate_gap_function(f)
        profile = {
            str(k): sorted((color_to_json(l) for l in ls), key=str)
            for k, ls in attachment_profile(f).items()
        }
        dichotomy = None
        if report.n_gap:
            outcome = ensure_pbranch(f)
            if isinstance(outcome, Condition1Report):
                dichotomy = outcome.to_json()
            else:
                dichotomy = {
                    "condition": 2,
                    "f": outcome.f.to_json(),
                    "witness": outcome.witness.to_json(),
                }
        return InvariantsResponse(
            total=report.total,
            n_gap=report.n_gap,
            missing_colors=list(report.missing_colors),
            pbranch=sorted(pbranch(f)),
            attachment_profile=profile,
            dichotomy=dichotomy,
        )

    @app.post("/derive", response_model=DeriveResponse)
    def derive(req: GapRequest):
        g = req.f.to_domain()
        alpha, trace = derive_type(g)
        witness = derivation_witness(g, alpha, trace)
        return DeriveResponse(
            type=alpha.to_json(), trace=trace.to_json(), witness=witness.to_json()
        )

    @app.post("/classify", response_model=ClassifyResponse)
    def classify(req: GapRequest):
        f = req.f.to_domain()
        result = classify_gap(f, catalog=catalog(f.n))
        return ClassifyResponse(**result)

    @app.post("/clover")
    def clover(req: CloverRequest):
        from ..treelab import subtree_comb_colors

        cat = catalog(req.n)
        indices = (
            [req.type_index]
            if req.type_index is not None
            else list(range(len(cat.entries)))
        )
        out = []
        for idx in indices:
            if not 0 <= idx < len(cat.entries):
                raise HTTPException(status_code=422, detail=f"no type with index {idx}")
            entry = cat.entries[idx]
            witness = clover_witness(entry.type)
            realized = subtree_comb_colors(entry.rep.f, witness.subtree, req.depth)
            out.append(
                {
                    "index": idx,
                    **witness.to_json(),
                    "realized_colors": sorted(realized),
                    "exact": realized == witness.X,
                }
            )
        return {"n": req.n, "depth": req.depth, "witnesses": out}

    @app.post("/verify")
    def verify(req: VerifyRequest):
        engines = ("pruned", "brute") if req.engine == "both" else (req.engine,)
        return verify_suite(req.n, engines=engines, catalog=catalog(req.n))

    @app.post("/comb/make", response_model=CombResponse)
    def comb_make(req: CombMakeRequest):
        comb = make_comb(req.u, req.v, req.length, m=req.m, rng=req.seed)
        return CombResponse(
            kind=list(comb.kind) if comb.kind else None,
            nodes=[list(t) for t in comb.nodes],
            spine=[list(s) for s in comb.spine],
        )

    @app.post("/comb/classify")
    def comb_classify(req: NodesRequest):
        kind = comb_type_of([tuple(t) for t in req.nodes])
        return {"kind": list(kind) if kind else None}

    @app.post("/comb/extract", response_model=CombResponse)
    def comb_extract(req: NodesRequest):
        comb = extract_comb([tuple(t) for t in req.nodes])
        return CombResponse(
            kind=list(comb.kind) if comb.kind else None,
            nodes=[list(t) for t in comb.nodes],
            spine=[list(s) for s in comb.spine],
        )

    @app.post("/comb/image")
    def comb_image(req: CombImageRequest):
        r = req.map.to_domain()
        images = [list(tree_image(r, tuple(t))) for t in req.nodes]
        return {"nodes": images}

    return app


app = create_app()
