"""Pydantic request/response models for the service API.

Wire formats mirror the library JSON schemas: gap-function tables use
integers or the string "inf" per cell, reduction maps are {"k", "x", "e"}.
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from ..core import GapFunction
from ..reduction import ReductionMap

Cell = Union[int, Literal["inf"]]


class GapFunctionModel(BaseModel):
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    table: list[list[Cell]]

    def to_domain(self) -> GapFunction:
        return GapFunction.from_json(self.model_dump())

    @classmethod
    def from_domain(cls, f: GapFunction) -> "GapFunctionModel":
        return cls(**f.to_json())


class ReductionMapModel(BaseModel):
    k: int = Field(ge=1)
    x: list[int]
    e: list[list[int]]
    m1: Optional[int] = None

    def to_domain(self) -> ReductionMap:
        return ReductionMap.from_json(self.model_dump(exclude_none=True))


class NRequest(BaseModel):
    # enumeration beyond n=5 explodes combinatorially; guard the service
    n: int = Field(ge=1, le=5)


class LeqRequest(BaseModel):
    f: GapFunctionModel
    g: GapFunctionModel
    engine: Literal["pruned", "brute"] = "pruned"


class PairRequest(BaseModel):
    f: GapFunctionModel
    g: GapFunctionModel


class GapRequest(BaseModel):
    f: GapFunctionModel


class CloverRequest(BaseModel):
    n: int = Field(ge=1, le=5)
    type_index: Optional[int] = None
    depth: int = Field(default=6, ge=2, le=10)


class VerifyRequest(BaseModel):
    n: int = Field(ge=1, le=4)
    engine: Literal["pruned", "brute", "both"] = "pruned"


class CombMakeRequest(BaseModel):
    u: int = Field(ge=0)
    v: int = Field(ge=0)
    length: int = Field(ge=1, le=64)
    m: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None


class NodesRequest(BaseModel):
    nodes: list[list[int]]

    @field_validator("nodes")
    @classmethod
    def _nonneg(cls, nodes):
        if any(w < 0 for node in nodes for w in node):
            raise ValueError("letters must be nonnegative")
        return nodes


class CombImageRequest(BaseModel):
    map: ReductionMapModel
    nodes: list[list[int]]


class StatusResponse(BaseModel):
    status: str
    version: str


class LeqResponse(BaseModel):
    leq: bool
    engine: str
    witness: Optional[dict] = None


class EquivResponse(BaseModel):
    equivalent: bool
    forward: Optional[dict] = None
    backward: Optional[dict] = None


class TypesResponse(BaseModel):
    n: int
    count: int
    types: list[dict]


class OrbitsResponse(BaseModel):
    n: int
    count: int
    orbits: list[dict]


class CatalogResponse(BaseModel):
    n: int
    version: str
    count: int
    entries: list[dict]
    orbits: list[dict]


class InvariantsResponse(BaseModel):
    total: bool
    n_gap: bool
    missing_colors: list[int]
    pbranch: list[int]
    attachment_profile: dict[str, list[Any]]
    dichotomy: Optional[dict] = None


class DeriveResponse(BaseModel):
    type: dict
    trace: dict
    witness: dict


class ClassifyResponse(BaseModel):
    minimal: bool
    equivalent_to: list[int]
    minimal_types_below: list[int]


class CombResponse(BaseModel):
    kind: Optional[list[int]] = None
    nodes: list[list[int]]
    spine: list[list[int]] = []
