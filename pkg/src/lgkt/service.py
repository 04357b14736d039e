"""FastAPI service wrapping the computation pipeline.

Every endpoint is a pure function of its request body, so responses are
deterministic byte for byte.  Error convention: HTTP 400 for malformed
inputs (on top of FastAPI's own 422 for schema violations), HTTP 409 for
domain validation failures (precondition not met by a well-formed input),
both carrying an ErrorDoc body.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from . import engine, graphs, levels
from .covers import CoverError, predecessor_cover, trim_essential
from .partitions import PartitionError, refine_tower
from .schemas import (CoverDoc, CoverRequest, ErrorDoc, FamilyRequest,
                      FlagDoc, GraphAlgebraRequest, GraphDoc, KTheoryRequest,
                      LevelsRequest, PartitionLevelDoc, PartitionsDoc,
                      PartitionsRequest, ReportDoc, ValidateRequest,
                      ValidationDoc)
from .zmodule import ZModuleError


class InputError(Exception):
    pass


class DomainError(Exception):
    pass


app = FastAPI(title="labelled-graph K-theory service", version="0.1.0")


@app.exception_handler(InputError)
async def _input_error(_, exc: InputError):
    return JSONResponse(status_code=400,
                        content=ErrorDoc(kind="input",
                                         message=str(exc)).model_dump())


@app.exception_handler(DomainError)
async def _domain_error(_, exc: DomainError):
    return JSONResponse(status_code=409,
                        content=ErrorDoc(kind="validation",
                                         message=str(exc)).model_dump())


def _graph(doc: GraphDoc) -> graphs.LabelledGraph:
    try:
        return graphs.make_graph(doc.edges, doc.vertices)
    except graphs.GraphError as exc:
        raise InputError(str(exc)) from exc


def _family(doc, g: graphs.LabelledGraph):
    sets = [frozenset(s) for s in doc.sets]
    for s in sets:
        for v in s:
            if v not in g.vertices:
                raise InputError(f"family mentions unknown vertex {v!r}")
    return sets


def _report_doc(result: engine.KTheoryResult) -> ReportDoc:
    return ReportDoc.model_validate(result.to_document())


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/validate", response_model=ValidationDoc)
def validate(req: ValidateRequest) -> ValidationDoc:
    g = _graph(req.graph)
    try:
        report = graphs.validate_graph(g, horizon=req.horizon)
        flags = dict(report.flags)
        required = ["left_resolving"]
        if req.family is not None:
            fam_report = graphs.validate_family(g, _family(req.family, g))
            flags.update(fam_report.flags)
            required = ["accommodating", "weakly_left_resolving", "regular"]
    except graphs.GraphError as exc:
        raise InputError(str(exc)) from exc
    ok = all(flags[name].value for name in required)
    return ValidationDoc(ok=ok, flags={
        name: FlagDoc(value=f.value, witness=f.witness)
        for name, f in sorted(flags.items())})


@app.post("/partitions", response_model=PartitionsDoc)
def partitions(req: PartitionsRequest) -> PartitionsDoc:
    g = _graph(req.graph)
    try:
        tower = refine_tower(g, max_level=req.max_level)
    except PartitionError as exc:
        raise DomainError(str(exc)) from exc
    return PartitionsDoc(
        stabilized_at=tower.stabilized_at, horizon=tower.horizon,
        levels=[PartitionLevelDoc(level=p.level,
                                  classes=[sorted(c) for c in p.classes])
                for p in tower.partitions])


@app.post("/ktheory", response_model=ReportDoc)
def ktheory(req: KTheoryRequest) -> ReportDoc:
    g = _graph(req.graph)
    try:
        return _report_doc(engine.ktheory_of_labelled_graph(g, req.max_level))
    except (PartitionError, engine.EngineError) as exc:
        raise DomainError(str(exc)) from exc


@app.post("/graph-algebra", response_model=ReportDoc)
def graph_algebra(req: GraphAlgebraRequest) -> ReportDoc:
    g = _graph(req.graph)
    try:
        return _report_doc(engine.graph_algebra_ktheory(g))
    except engine.EngineError as exc:
        raise DomainError(str(exc)) from exc


@app.post("/family", response_model=ReportDoc)
def family(req: FamilyRequest) -> ReportDoc:
    g = _graph(req.graph)
    fam = (graphs.build_e0minus(g) if req.family is None
           else _family(req.family, g))
    try:
        return _report_doc(engine.ktheory_explicit_family(g, fam))
    except (graphs.GraphError, engine.EngineError) as exc:
        raise DomainError(str(exc)) from exc


@app.post("/levels", response_model=ReportDoc)
def levels_endpoint(req: LevelsRequest) -> ReportDoc:
    given = [x for x in (req.system, req.generator, req.graph) if x is not None]
    if len(given) != 1:
        raise InputError("provide exactly one of system, generator, graph")
    try:
        if req.system is not None:
            ls = levels.parse_level_system(req.system.model_dump())
        elif req.generator is not None:
            ls = levels.builtin_generator(
                levels.GeneratorSpec(req.generator, max_level=req.horizon))
        else:
            g = _graph(req.graph)
            ls = levels.builtin_generator(
                levels.GeneratorSpec("from_graph", max_level=req.horizon,
                                     graph=g))
    except levels.LevelSystemError as exc:
        raise InputError(str(exc)) from exc
    except PartitionError as exc:
        raise DomainError(str(exc)) from exc
    try:
        return _report_doc(levels.limit_ktheory(ls))
    except (engine.EngineError, ZModuleError) as exc:
        raise DomainError(str(exc)) from exc


@app.post("/cover", response_model=CoverDoc)
def cover(req: CoverRequest) -> CoverDoc:
    g = _graph(req.graph)
    trimmed = False
    if req.trim:
        trimmed_graph = trim_essential(g)
        trimmed = trimmed_graph != g
        g = trimmed_graph
        if not g.vertices:
            raise DomainError("graph is empty after trimming sources/sinks")
    try:
        result = predecessor_cover(g)
    except CoverError as exc:
        raise DomainError(str(exc)) from exc
    return CoverDoc(graph=GraphDoc(**result.cover.to_document()),
                    state_map={v: sorted(s)
                               for v, s in result.state_map.items()},
                    trimmed=trimmed or result.trimmed)
