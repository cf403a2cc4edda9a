"""HTTP service wrapping the workbench; the CLI's reports behind endpoints.

Run with: uvicorn bidual.service:app
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .cli import UsageError, parse_relations
from .compiler import all_extensions, center_equations
from .jordan import (
    DimensionError,
    TripotentError,
    jbstar_axiom_checks,
    make_tripotent,
    peirce,
    peirce_rules_residual,
    spectrum_deviation,
    triple_system,
    tripotent_residual,
)
from .limits import FUNCTIONALS, GroupTagError, arens_gap, make_family, triple_gap
from .selftest import run_selftest
from .templates import TemplateError, parse_template, perm
from .terms import StructuralError

app = FastAPI(
    title="bidual workbench",
    description="Arens-product extensions of trilinear maps and numerical "
    "Jordan triple verification.",
    version=__version__,
)

_INPUT_ERRORS = (
    UsageError,
    TemplateError,
    StructuralError,
    DimensionError,
    TripotentError,
    GroupTagError,
    ValueError,
)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


class ExtendRequest(BaseModel):
    template: str
    relations: str = ""


class ExtendResponse(BaseModel):
    schema_: str = Field(alias="schema")
    template: str
    relations: list[str]
    extensions: list[str]
    extensions_ascii: list[str]
    extensions_terms: list[Any]
    classes: list[list[int]]
    regular: bool

    model_config = {"populate_by_name": True}


class JordanRequest(BaseModel):
    system: str
    trials: int = 100
    seed: int = 42


class PeirceRequest(BaseModel):
    system: str
    tripotent: str = "e11"
    samples: int = 100
    seed: int = 42


class WitnessRequest(BaseModel):
    space: str = "l1z"
    functional: str = "heaviside"
    n: int = Field(default=100, alias="N")
    window: int = 10

    model_config = {"populate_by_name": True}


class CentersRequest(BaseModel):
    template: str
    slot: int
    triple: list[int]


class SelftestRequest(BaseModel):
    seed: int = 42
    trials: int = 20
    samples: int = 25
    n: int = Field(default=60, alias="N")
    window: int = 10

    model_config = {"populate_by_name": True}


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/extend", response_model=ExtendResponse, response_model_by_alias=True)
def extend(req: ExtendRequest):
    rel = _guard(parse_relations, req.relations)
    tpl = _guard(parse_template, req.template)
    return _guard(all_extensions, tpl, rel).to_json()


@app.post("/jordan")
def jordan(req: JordanRequest):
    sys_ = _guard(triple_system, req.system)
    return _guard(jbstar_axiom_checks, sys_, trials=req.trials, seed=req.seed).to_json()


@app.post("/peirce")
def peirce_endpoint(req: PeirceRequest):
    sys_ = _guard(triple_system, req.system)
    e = _guard(make_tripotent, sys_, req.tripotent)
    dec = _guard(peirce, sys_, e)
    rules = _guard(peirce_rules_residual, sys_, e, samples=req.samples, seed=req.seed)
    return {
        "schema": "bidual/peirce/v1",
        "system": req.system,
        "tripotent": req.tripotent,
        "tripotent_residual": tripotent_residual(sys_, e),
        "spectrum_dev": spectrum_deviation(sys_, e),
        "projections": dec.to_json(),
        "rules": rules.to_json(),
        "pass": rules.passed(),
    }


@app.post("/witness")
def witness(req: WitnessRequest):
    if req.functional not in FUNCTIONALS:
        raise HTTPException(status_code=422, detail=f"unknown functional {req.functional!r}")
    psi = FUNCTIONALS[req.functional]()
    if req.space == "l1z":
        f1 = _guard(make_family, "l1z", "delta")
        f2 = _guard(make_family, "l1z", "delta_neg")
        bilinear = arens_gap(f1, f2, psi, req.n, req.window)
        fams = (f1, make_family("l1z", "const"), f2)
        trilinear = triple_gap(fams, psi, [0, 2], req.n, req.window)
    elif req.space == "l1n":
        basis = _guard(make_family, "l1n", "delta")
        bilinear = arens_gap(basis, basis, psi, req.n, req.window)
        trilinear = triple_gap((basis, basis, basis), psi, list(range(6)), req.n, req.window)
    else:
        raise HTTPException(status_code=422, detail="space must be l1z or l1n")
    return {
        "schema": "bidual/witness/v1",
        "space": req.space,
        "functional": req.functional,
        "bilinear": bilinear.to_json(),
        "trilinear": trilinear.to_json(),
        "pass": bilinear.all_converged and trilinear.all_converged,
    }


@app.post("/centers")
def centers(req: CentersRequest):
    tpl = _guard(parse_template, req.template)
    if len(req.triple) != 3 or not all(0 <= i <= 5 for i in req.triple):
        raise HTTPException(status_code=422, detail="triple must be three indices 0..5")
    triple = tuple(perm(i) for i in req.triple)
    return _guard(center_equations, tpl, req.slot, triple).to_json()


@app.post("/selftest")
def selftest(req: SelftestRequest):
    return run_selftest(
        seed=req.seed, trials=req.trials, samples=req.samples, n=req.n, window=req.window
    )
