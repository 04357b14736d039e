"""Request/response models for the service and the CLI client.

Matrix entries travel as decimal strings so arbitrary-precision integers
survive JSON; small counts (dims, levels) stay plain ints.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class GraphDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: Optional[list[str]] = None
    edges: list[tuple[str, str, str]] = Field(default_factory=list)


class FamilyDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sets: list[list[str]]


class LevelSystemDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dims: list[int]
    phi: list[list[list[str]]]
    incl: list[list[list[str]]]
    labels: Optional[list[list[str]]] = None


class FlagDoc(BaseModel):
    value: bool
    witness: Optional[str] = None


class ValidationDoc(BaseModel):
    ok: bool
    flags: dict[str, FlagDoc]


class LevelRowDoc(BaseModel):
    level: int
    class_count: int
    ker: str
    coker: str


class CheckRowDoc(BaseModel):
    level: int
    name: str
    passed: bool


class ClassificationDoc(BaseModel):
    kind: Literal["stabilized", "split_pattern", "undetermined"]
    flag: str
    stabilized_from: Optional[int] = None
    infinite_free: bool = False


class ReportDoc(BaseModel):
    mode: Literal["stabilized", "tower", "explicit_family", "graph_algebra"]
    k0: str
    k1: str
    stabilized_at: Optional[int] = None
    levels: list[LevelRowDoc] = Field(default_factory=list)
    checks: list[CheckRowDoc] = Field(default_factory=list)
    k0_classification: Optional[ClassificationDoc] = None
    k1_classification: Optional[ClassificationDoc] = None


class PartitionLevelDoc(BaseModel):
    level: int
    classes: list[list[str]]


class PartitionsDoc(BaseModel):
    stabilized_at: Optional[int]
    horizon: int
    levels: list[PartitionLevelDoc]


class CoverDoc(BaseModel):
    graph: GraphDoc
    state_map: dict[str, list[str]]
    trimmed: bool


class ValidateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphDoc
    family: Optional[FamilyDoc] = None
    horizon: int = 1


class PartitionsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphDoc
    max_level: int = 32


class KTheoryRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphDoc
    max_level: int = 32


class GraphAlgebraRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphDoc


class FamilyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphDoc
    family: Optional[FamilyDoc] = None  # omitted: generate the letter-range family


class LevelsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    system: Optional[LevelSystemDoc] = None
    generator: Optional[Literal["dyck2", "int_line"]] = None
    horizon: int = 8
    graph: Optional[GraphDoc] = None  # for exporting a graph ladder


class CoverRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph: GraphDoc
    trim: bool = True


class ErrorDoc(BaseModel):
    kind: Literal["input", "validation", "internal"]
    message: str
