"""On-disk catalog cache.

Catalogs are JSON files keyed by n, stamped with the package version and a
format number; stale or unreadable files are ignored and recomputed.  Writes
go through a temp file and an atomic rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from . import __version__
from .classify import Catalog, compute_catalog
from .errors import CorruptCacheError

CACHE_ENV = "GAPBASIS_CACHE"
CACHE_FORMAT = 1


def cache_dir(explicit=None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "gapbasis"


def catalog_path(n: int, directory=None) -> Path:
    return cache_dir(directory) / f"catalog-n{n}.json"


def save_catalog(catalog: Catalog, directory=None) -> Path:
    path = catalog_path(catalog.n, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "format": CACHE_FORMAT,
        "version": __version__,
        "n": catalog.n,
        "catalog": catalog.to_json(),
    }
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(payload, handle)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def load_catalog(n: int, directory=None) -> Catalog:
    """Read a cached catalog; raises CorruptCacheError on any problem."""
    path = catalog_path(n, directory)
    try:
        with open(path) as handle:
            payload = json.load(handle)
    except FileNotFoundError:
        raise
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptCacheError(f"unreadable catalog cache {path}: {exc}")
    if payload.get("format") != CACHE_FORMAT or payload.get("version") != __version__:
        raise CorruptCacheError(f"stale catalog cache {path}")
    try:
        catalog = Catalog.from_json(payload["catalog"])
    except Exception as exc:
        raise CorruptCacheError(f"corrupt catalog cache {path}: {exc}")
    if catalog.n != n:
        raise CorruptCacheError(f"catalog cache {path} holds n={catalog.n}")
    return catalog


def get_catalog(n: int, cache_dir: Optional[str] = None, refresh: bool = False) -> Catalog:
    """Load the catalog for n, recomputing (and re-saving) when needed."""
    if not refresh:
        try:
            return load_catalog(n, cache_dir)
        except (FileNotFoundError, CorruptCacheError):
            pass
    catalog = compute_catalog(n)
    save_catalog(catalog, cache_dir)
    return catalog
