"""Command-line client for the gapbasis service.

Every subcommand is a thin wrapper over one service endpoint: by default the
app runs in-process, with --server pointing the same client at a remote
instance.  Exit codes: 0 success, 1 usage error, 2 invalid input, 3
verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gapbasis", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, fmt=True):
        p.add_argument("--server", help="base URL of a running service (default: in-process)")
        p.add_argument("--cache-dir", help="catalog cache directory (default: $GAPBASIS_CACHE)")
        if fmt:
            p.add_argument("--format", choices=("json", "table", "csv"), default="json")

    p = sub.add_parser("types", help="enumerate the n-types")
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = sub.add_parser("basis", help="catalog of minimal representatives")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--up-to-perm", action="store_true",
                   help="only one entry per color-permutation orbit")
    common(p)

    p = sub.add_parser("orbits", help="orbit structure under color permutations")
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = sub.add_parser("leq", help="decide whether the gap of --f embeds below --g")
    p.add_argument("--f", required=True, metavar="PATH")
    p.add_argument("--g", required=True, metavar="PATH")
    p.add_argument("--engine", choices=("pruned", "brute"), default="pruned")
    common(p)

    p = sub.add_parser("equiv", help="decide two-way embedding")
    p.add_argument("--f", required=True, metavar="PATH")
    p.add_argument("--g", required=True, metavar="PATH")
    common(p)

    p = sub.add_parser("invariants", help="pbranch, attachments, dichotomy branch")
    p.add_argument("--f", required=True, metavar="PATH")
    common(p)

    p = sub.add_parser("derive", help="derive the minimal type below a gap function")
    p.add_argument("--f", required=True, metavar="PATH")
    common(p)

    p = sub.add_parser("classify", help="minimality test against the catalog")
    p.add_argument("--f", required=True, metavar="PATH")
    common(p)

    p = sub.add_parser("clover", help="sub-gap decomposition witnesses")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--type-index", type=int)
    p.add_argument("--depth", type=int, default=6)
    common(p)

    p = sub.add_parser("verify", help="run the verification suites for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--engine", choices=("pruned", "brute", "both"), default="pruned")
    common(p)

    p = sub.add_parser("comb", help="tree utilities: make/classify/extract/image")
    p.add_argument("action", choices=("make", "classify", "extract", "image"))
    p.add_argument("--u", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--nodes", help="JSON list of nodes, e.g. '[[0],[0,0]]'")
    p.add_argument("--nodes-file", metavar="PATH")
    p.add_argument("--map", help="reduction map JSON {k, x, e}")
    p.add_argument("--map-file", metavar="PATH")
    common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--cache-dir")

    return parser


class _InProcessClient:
    """Minimal sync facade over the ASGI app; one event loop per request."""

    def __init__(self, app):
        self._app = app

    def post(self, path, json=None):
        import asyncio

        import httpx

        async def go():
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://gapbasis.local", timeout=None
            ) as client:
                return await client.post(path, json=json)

        return asyncio.run(go())

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _client(args):
    server = getattr(args, "server", None)
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    from .service.app import create_app

    return _InProcessClient(create_app(cache_dir=getattr(args, "cache_dir", None)))


def _post(client, path, payload):
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json()
        except ValueError:
            detail = resp.text
        print(f"error ({resp.status_code}): {json.dumps(detail)}", file=sys.stderr)
        raise SystemExit(2)
    return resp.json()


def _load_json_file(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _inline_or_file(inline: Optional[str], path: Optional[str], what: str):
    if inline is not None:
        try:
            return json.loads(inline)
        except json.JSONDecodeError as exc:
            print(f"bad {what} JSON: {exc}", file=sys.stderr)
            raise SystemExit(2)
    if path is not None:
        return _load_json_file(path)
    print(f"missing --{what} (or --{what}-file)", file=sys.stderr)
    raise SystemExit(1)


def _emit_json(data):
    print(json.dumps(data, indent=2, sort_keys=False))


def _render_rows(headers, rows, fmt):
    if fmt == "csv":
        print(",".join(headers))
        for row in rows:
            print(",".join(str(c) for c in row))
        return
    cells = [[str(c) for c in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    for row in cells:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)))


def _cell_str(value):
    return "*" if value == "inf" else str(value)


def _set_str(values):
    return "{" + ",".join(str(v) for v in values) + "}"


def _type_row(index, t):
    psi = ";".join(f"{i}{j}>{_cell_str(v)}" for i, j, v in t["psi"]) or "-"
    blocks = ";".join(_set_str(b) for b in t["P"]) or "-"
    gamma = ";".join(f"{k}>{_cell_str(v)}" for k, v in t["gamma"]) or "-"
    return [index, _set_str(t["A"]), _set_str(t["B"]), _set_str(t["C"]),
            _set_str(t["D"]), _set_str(t["E"]), psi, blocks, gamma]


def _cmd_types(args, client):
    data = _post(client, "/types", {"n": args.n})
    if args.format == "json":
        _emit_json(data)
        return 0
    rows = [_type_row(i, t) for i, t in enumerate(data["types"])]
    _render_rows(["index", "A", "B", "C", "D", "E", "psi", "P", "gamma"], rows, args.format)
    return 0


def _cmd_basis(args, client):
    data = _post(client, "/basis", {"n": args.n})
    entries = data["entries"]
    if args.up_to_perm:
        seen = set()
        kept = []
        for e in entries:
            if e["orbit_id"] not in seen:
                seen.add(e["orbit_id"])
                kept.append(e)
        entries = kept
    if args.format == "json":
        _emit_json({**data, "entries": entries, "count": len(entries)})
        return 0
    rows = [
        [e["index"], e["orbit_id"], e["f"]["m"], data["n"], e["j_string"]]
        for e in entries
    ]
    _render_rows(["index", "orbit", "m", "n", "ideals"], rows, args.format)
    return 0


def _cmd_orbits(args, client):
    data = _post(client, "/orbits", {"n": args.n})
    if args.format == "json":
        _emit_json(data)
        return 0
    rows = [
        [o["orbit_id"], o["size"], o["representative"],
         ";".join(str(m) for m in o["members"]), o["j_string"]]
        for o in data["orbits"]
    ]
    _render_rows(["orbit", "size", "rep", "members", "ideals"], rows, args.format)
    return 0


def _cmd_leq(args, client):
    payload = {
        "f": _load_json_file(args.f),
        "g": _load_json_file(args.g),
        "engine": args.engine,
    }
    data = _post(client, "/leq", payload)
    if args.format == "json":
        _emit_json(data)
    else:
        print(f"leq: {data['leq']}")
        if data["witness"]:
            print(f"witness: {json.dumps(data['witness'])}")
    return 0


def _cmd_equiv(args, client):
    payload = {"f": _load_json_file(args.f), "g": _load_json_file(args.g)}
    data = _post(client, "/equiv", payload)
    if args.format == "json":
        _emit_json(data)
    else:
        print(f"equivalent: {data['equivalent']}")
    return 0


def _cmd_invariants(args, client):
    data = _post(client, "/invariants", {"f": _load_json_file(args.f)})
    _emit_json(data)
    return 0


def _cmd_derive(args, client):
    data = _post(client, "/derive", {"f": _load_json_file(args.f)})
    _emit_json(data)
    return 0


def _cmd_classify(args, client):
    data = _post(client, "/classify", {"f": _load_json_file(args.f)})
    _emit_json(data)
    return 0


def _cmd_clover(args, client):
    payload = {"n": args.n, "depth": args.depth}
    if args.type_index is not None:
        payload["type_index"] = args.type_index
    data = _post(client, "/clover", payload)
    if args.format == "json":
        _emit_json(data)
        return 0
    rows = [
        [w["index"], _set_str(w["X"]), _set_str(w["Y"]),
         json.dumps(w["subtree"]), w["exact"]]
        for w in data["witnesses"]
    ]
    _render_rows(["index", "X", "Y", "subtree", "exact"], rows, args.format)
    return 0


def _cmd_verify(args, client):
    data = _post(client, "/verify", {"n": args.n, "engine": args.engine})
    if args.format == "json":
        _emit_json(data)
    else:
        for eng, rep in data["pairwise"].items():
            good = rep["ordered_pairs"] - len(rep["violations"])
            print(f"pairwise[{eng}]: {good}/{rep['ordered_pairs']} ordered pairs incomparable")
        for eng, rep in data["self_pairs"].items():
            good = rep["count"] - len(rep["violations"])
            print(f"self[{eng}]: {good}/{rep['count']} identity witnesses")
        total = data["pairwise"][data["engines"][0]]
        count = data["self_pairs"][data["engines"][0]]["count"]
        print(f"structural: {count - len(data['structural_violations'])}/{count} representatives")
        print(f"derive roundtrip: {count - len(data['derive_roundtrip_violations'])}/{count} types")
        print("PASSED" if data["passed"] else "FAILED")
    return 0 if data["passed"] else 3


def _cmd_comb(args, client):
    if args.action == "make":
        if args.u is None or args.v is None or args.length is None:
            print("comb make needs --u, --v, --length", file=sys.stderr)
            return 1
        payload = {"u": args.u, "v": args.v, "length": args.length}
        if args.m is not None:
            payload["m"] = args.m
        if args.seed is not None:
            payload["seed"] = args.seed
        _emit_json(_post(client, "/comb/make", payload))
        return 0
    if args.action in ("classify", "extract"):
        nodes = _inline_or_file(args.nodes, args.nodes_file, "nodes")
        _emit_json(_post(client, f"/comb/{args.action}", {"nodes": nodes}))
        return 0
    reduction = _inline_or_file(args.map, args.map_file, "map")
    nodes = _inline_or_file(args.nodes, args.nodes_file, "nodes")
    _emit_json(_post(client, "/comb/image", {"map": reduction, "nodes": nodes}))
    return 0


def _cmd_serve(args):
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(cache_dir=args.cache_dir), host=args.host, port=args.port)
    return 0


_HANDLERS = {
    "types": _cmd_types,
    "basis": _cmd_basis,
    "orbits": _cmd_orbits,
    "leq": _cmd_leq,
    "equiv": _cmd_equiv,
    "invariants": _cmd_invariants,
    "derive": _cmd_derive,
    "classify": _cmd_classify,
    "clover": _cmd_clover,
    "verify": _cmd_verify,
    "comb": _cmd_comb,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 1
    if args.command == "serve":
        return _cmd_serve(args)
    try:
        with _client(args) as client:
            return _HANDLERS[args.command](args, client)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
