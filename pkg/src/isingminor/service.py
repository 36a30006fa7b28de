"""HTTP service exposing the toolchain: the same JSON documents the CLI
reads from disk travel in request bodies instead.

Run with: uvicorn isingminor.service:app
"""

from __future__ import annotations

from typing import Any, Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import files
from .embedding import EmbeddingError, classify, validate
from .graphs import DomainError, IsingProblem, QuboProblem, make_hardware
from .params import (
    EasyBound,
    GapTargeted,
    PreconditionError,
    TightBound,
    compute_C,
    preprocess_fix,
    set_params_easy,
    set_params_tight,
)
from .solve import EnumerationCapError, enumerate_spectrum, verify_correspondence
from .transform import ising_to_qubo, qubo_to_ising
from .wmis import StrictMinPlus, UniformPenalty, WmisInstance, wmis_to_qubo

app = FastAPI(
    title="isingminor",
    description="Minor-embedding compilation of Ising/QUBO problems onto hardware graphs.",
)


class ProblemDoc(BaseModel):
    type: Literal["ising", "qubo", "wmis"]
    n: int
    linear: dict[str, float] = Field(default_factory=dict)
    quadratic: list[list[float]] = Field(default_factory=list)

    def parse(self):
        try:
            return files.parse_problem(self.model_dump())
        except (files.ParseError, DomainError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None


class HardwareRequest(BaseModel):
    kind: Literal["square", "extended"]
    rows: int
    cols: int


class HardwareResponse(BaseModel):
    hardware: dict[str, Any]
    n: int
    edges: int
    max_degree: int


class ConvertRequest(BaseModel):
    problem: ProblemDoc
    to: Literal["ising", "qubo"]
    penalty: str | None = None  # wmis only: "strict:D" or "uniform:J"


class ConvertResponse(BaseModel):
    problem: dict[str, Any]
    affine: dict[str, Any] | None = None
    strict_penalty: bool | None = None


class EmbeddingValidateRequest(BaseModel):
    problem: ProblemDoc
    embedding: dict[str, Any]


class EmbeddingValidateResponse(BaseModel):
    ok: bool
    violations: list[str]
    embedding_class: str | None = None


class ParamsRequest(BaseModel):
    problem: ProblemDoc
    embedding: dict[str, Any]
    policy: str = "tight:0.0625"  # easy:M | tight:M | gap:G
    preprocess: bool = False


class VertexParams(BaseModel):
    vertex: int
    C: float
    leaves: int
    F: float | None


class ParamsResponse(BaseModel):
    embedded: dict[str, Any]
    table: list[VertexParams]
    fixed: dict[int, int]


class SolveRequest(BaseModel):
    problem: ProblemDoc
    max_n: int = 24
    tol: float = 1e-9


class SolveResponse(BaseModel):
    min_energy: float
    gap: float | None
    levels: list[float]
    ground_count: int
    state_count: int
    ground_states: list[dict[int, int]]


class VerifyRequest(BaseModel):
    original: ProblemDoc
    embedded: dict[str, Any]
    tol: float = 0.0


class VerifyResponse(BaseModel):
    ok: bool
    chains_aligned: bool
    offset_identity: bool
    gap_bound_ok: bool | None
    min_embedded: float
    min_original: float
    embedded_gap: float | None
    original_gap: float | None
    projected_ground_states: list[dict[int, int]]
    detail: str


def _http(exc: Exception) -> HTTPException:
    if isinstance(exc, PreconditionError):
        return HTTPException(status_code=409, detail=str(exc))
    if isinstance(exc, EnumerationCapError):
        return HTTPException(status_code=413, detail=str(exc))
    return HTTPException(status_code=422, detail=str(exc))


def _parse_policy(text: str):
    kind, _, arg = text.partition(":")
    value = float(arg) if arg else None
    if kind == "easy":
        return EasyBound(value if value is not None else 1e-6)
    if kind == "tight":
        return TightBound(value if value is not None else 1e-6)
    if kind == "gap" and value is not None:
        return ("gap", value)
    raise DomainError(f"unknown policy {text!r}; use easy:M, tight:M, or gap:G")


def _parse_penalty(text: str):
    kind, _, arg = text.partition(":")
    if kind == "strict":
        return StrictMinPlus(float(arg))
    if kind == "uniform":
        return UniformPenalty(float(arg))
    raise DomainError(f"unknown penalty rule {text!r}; use strict:D or uniform:J")


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok"}


@app.post("/hardware", response_model=HardwareResponse)
def hardware(req: HardwareRequest) -> HardwareResponse:
    kind = "square_lattice" if req.kind == "square" else "extended_grid"
    try:
        hw = make_hardware(kind, req.rows, req.cols)
    except DomainError as exc:
        raise _http(exc) from None
    return HardwareResponse(
        hardware=files.hardware_to_doc(hw),
        n=hw.base.n,
        edges=len(hw.base.edges),
        max_degree=hw.max_degree,
    )


@app.post("/convert", response_model=ConvertResponse)
def convert(req: ConvertRequest) -> ConvertResponse:
    problem = req.problem.parse()
    try:
        if isinstance(problem, WmisInstance):
            if req.to != "qubo":
                raise DomainError("wmis inputs convert to qubo only")
            if not req.penalty:
                raise DomainError("wmis conversion needs a penalty rule")
            result = wmis_to_qubo(problem, _parse_penalty(req.penalty))
            return ConvertResponse(
                problem=files.qubo_to_doc(result.qubo), strict_penalty=result.strict
            )
        if isinstance(problem, QuboProblem):
            if req.to != "ising":
                raise DomainError("qubo inputs convert to ising")
            ising, link = qubo_to_ising(problem)
            doc, affine = files.ising_to_doc(ising), link
        else:
            if req.to != "qubo":
                raise DomainError("ising inputs convert to qubo")
            qubo, link = ising_to_qubo(problem)
            doc, affine = files.qubo_to_doc(qubo), link
    except DomainError as exc:
        raise _http(exc) from None
    return ConvertResponse(
        problem=doc,
        affine={
            "scale": affine.scale,
            "offset": affine.offset,
            "direction": affine.direction.value,
        },
    )


@app.post("/embedding/validate", response_model=EmbeddingValidateResponse)
def embedding_validate(req: EmbeddingValidateRequest) -> EmbeddingValidateResponse:
    problem = req.problem.parse()
    try:
        emb = files.parse_embedding(req.embedding, problem.graph)
    except (files.ParseError, EmbeddingError, DomainError) as exc:
        return EmbeddingValidateResponse(ok=False, violations=[str(exc)])
    report = validate(emb)
    cls = classify(emb).value if report.ok else None
    return EmbeddingValidateResponse(
        ok=report.ok, violations=list(report.violations), embedding_class=cls
    )


@app.post("/params", response_model=ParamsResponse)
def params(req: ParamsRequest) -> ParamsResponse:
    problem = req.problem.parse()
    if not isinstance(problem, IsingProblem):
        raise HTTPException(status_code=422, detail="params expects an ising problem")
    try:
        policy = _parse_policy(req.policy)
        fixed: dict[int, int] = {}
        if any(compute_C(problem, i) < 0 for i in problem.graph.vertices):
            if not req.preprocess:
                raise PreconditionError(
                    "C_i < 0 present; set preprocess=true to fix dominated spins"
                )
            prep = preprocess_fix(problem)
            fixed = prep.fixed
            problem = prep.residual
        emb = files.parse_embedding(req.embedding, problem.graph)
        if isinstance(policy, EasyBound):
            embedded = set_params_easy(emb, problem, policy.margin)
        elif isinstance(policy, TightBound):
            embedded = set_params_tight(emb, problem, policy)
        else:
            _, g = policy
            embedded = set_params_tight(
                emb, problem, GapTargeted({i: g for i in problem.graph.vertices})
            )
    except (files.ParseError, EmbeddingError, DomainError, PreconditionError) as exc:
        raise _http(exc) from None
    from .embedding import leaf_count

    table = [
        VertexParams(
            vertex=i,
            C=compute_C(problem, i),
            leaves=leaf_count(embedded.source, i),
            F=next(iter(embedded.chain_edges[i].values()), None),
        )
        for i in problem.graph.vertices
    ]
    return ParamsResponse(
        embedded=files.embedded_to_doc(embedded, req.policy), table=table, fixed=fixed
    )


@app.post("/solve", response_model=SolveResponse)
def solve(req: SolveRequest) -> SolveResponse:
    problem = req.problem.parse()
    if isinstance(problem, WmisInstance):
        raise HTTPException(status_code=422, detail="convert wmis to qubo/ising before solving")
    if isinstance(problem, QuboProblem):
        problem, _ = qubo_to_ising(problem)
    try:
        spec = enumerate_spectrum(problem, tol=req.tol, cap=req.max_n)
    except (EnumerationCapError, DomainError) as exc:
        raise _http(exc) from None
    return SolveResponse(
        min_energy=spec.min_energy,
        gap=spec.gap,
        levels=list(spec.levels),
        ground_count=spec.ground_count,
        state_count=spec.state_count,
        ground_states=[dict(s) for s in spec.ground_states[:64]],
    )


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    original = req.original.parse()
    if not isinstance(original, IsingProblem):
        raise HTTPException(status_code=422, detail="verify expects an ising original")
    try:
        embedded = files.parse_embedded(req.embedded, original.graph)
        report = verify_correspondence(original, embedded, tol=req.tol)
    except (files.ParseError, EmbeddingError, DomainError, EnumerationCapError) as exc:
        raise _http(exc) from None
    return VerifyResponse(
        ok=report.ok,
        chains_aligned=report.chains_aligned,
        offset_identity=report.offset_identity,
        gap_bound_ok=report.gap_bound_ok,
        min_embedded=report.min_embedded,
        min_original=report.min_original,
        embedded_gap=report.embedded_gap,
        original_gap=report.original_gap,
        projected_ground_states=[dict(s) for s in report.projected_ground_states[:64]],
        detail=report.detail,
    )
