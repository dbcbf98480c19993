"""HTTP service wrapping the core operations with pydantic models.

Endpoints mirror the CLI subcommands: GET /catalog, POST /build,
GET /sdim, POST /reflect, POST /verify.  Catalog names contain characters
that are awkward in URL paths, so entry names travel in query strings and
request bodies.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from .analysis import compare, root_report
from .builder import BuildLimitError, build
from .catalog import CatalogError, builtin, builtin_specs, instantiate
from .field import FieldError
from .reflection import (
    ReflectionError,
    canonical_form,
    enumerate_bases,
    initial_state,
    odd_reflect,
)

app = FastAPI(title="cartan-forge", version="0.1.0")


class CatalogEntry(BaseModel):
    name: str
    p: int
    fielddeg: int
    n: int
    parities: list[int]
    source: str


class BuildRequest(BaseModel):
    name: str
    params: dict[str, str] = Field(default_factory=dict)
    max_height: int = 64


class SdimResponse(BaseModel):
    name: str
    sdim: dict[str, int]
    derived: dict[str, int] | None


class ReflectRequest(BaseModel):
    name: str
    params: dict[str, str] = Field(default_factory=dict)
    chain: list[int] = Field(default_factory=list)
    enumerate_orbit: bool = False
    limit: int = 512


class VerifyRequest(BaseModel):
    names: list[str] | None = None  # None = whole catalog


class VerifyEntry(BaseModel):
    name: str
    status: str
    summary: str


class VerifyResponse(BaseModel):
    entries: list[VerifyEntry]
    passed: int
    failed: int
    skipped: int


def _spec(name: str):
    try:
        return builtin(name)
    except CatalogError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from None


def _run_build(spec, params, max_height):
    try:
        cc = instantiate(spec, dict(params))
        return root_report(build(cc, max_height=max_height))
    except BuildLimitError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    except (CatalogError, FieldError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


@app.get("/catalog", response_model=list[CatalogEntry])
def get_catalog():
    return [
        CatalogEntry(name=s.name, p=s.p, fielddeg=s.k, n=s.n,
                     parities=list(s.parities), source=s.source)
        for s in builtin_specs()
    ]


@app.post("/build")
def post_build(req: BuildRequest):
    report = _run_build(_spec(req.name), req.params, req.max_height)
    return report.to_json_dict()


@app.get("/sdim", response_model=SdimResponse)
def get_sdim(name: str = Query(...)):
    report = _run_build(_spec(name), {}, 64)
    derived = None
    if report.derived is not None:
        derived = {"even": report.derived[0], "odd": report.derived[1]}
    return SdimResponse(
        name=name,
        sdim={"even": report.sdim[0], "odd": report.sdim[1]},
        derived=derived,
    )


@app.post("/reflect")
def post_reflect(req: ReflectRequest):
    spec = _spec(req.name)
    try:
        cc = instantiate(spec, dict(req.params))
        if req.enumerate_orbit:
            return enumerate_bases(cc, limit=req.limit).to_json_dict()
        state = initial_state(cc)
        for i in req.chain:
            if not 0 <= i < cc.n:
                raise HTTPException(status_code=400,
                                    detail=f"reflection index {i} out of range")
            state = odd_reflect(state, build(state.cartan), i)
    except (CatalogError, FieldError, ReflectionError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None
    F = state.cartan.field
    return {
        "name": spec.name,
        "chain": list(state.chain),
        "matrix": [[F.fmt(int(state.cartan.A[i, j])) for j in range(cc.n)]
                   for i in range(cc.n)],
        "parities": list(state.cartan.parities),
        "simple_roots": [list(w) for w in state.simple_roots],
        "canonical_key": list(canonical_form(state.cartan)),
    }


@app.post("/verify", response_model=VerifyResponse)
def post_verify(req: VerifyRequest):
    specs = builtin_specs() if not req.names else [_spec(n) for n in req.names]
    entries = []
    for s in specs:
        if s.source == "external":
            entries.append(VerifyEntry(name=s.name, status="skipped-external", summary=""))
            continue
        try:
            report = _run_build(s, {}, 64)
        except HTTPException as exc:
            entries.append(VerifyEntry(name=s.name, status="fail", summary=str(exc.detail)))
            continue
        if s.expected is None:
            entries.append(VerifyEntry(name=s.name, status="pass", summary="no golden data"))
            continue
        diff = compare(report, s.expected)
        entries.append(VerifyEntry(name=s.name,
                                   status="pass" if diff.empty else "fail",
                                   summary=diff.summary()))
    n_pass = sum(1 for e in entries if e.status == "pass")
    n_fail = sum(1 for e in entries if e.status == "fail")
    return VerifyResponse(entries=entries, passed=n_pass, failed=n_fail,
                          skipped=len(entries) - n_pass - n_fail)
