"""The FastAPI application wrapping the calculus core.

Every core operation is a POST taking JSON (GET for the fixed taxonomy and
health). Source-text endpoints parse .sas content server-side; parse errors
come back as HTTP 400 with a `diagnostics` detail, domain errors as 400
with a `code`/`message` detail. The trajectory endpoint can answer CSV,
everything else is JSON.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import dsl, dynamics, fusion, him, knowledge, reliability, topology
from .. import model as core_model
from ..errors import SasError
from . import schemas

app = FastAPI(
    title="sascalc",
    version="0.1.0",
    description="Symbiotic-systems calculus: fusion gains, reliability "
    "cancellation, layered topology, behavior dispatch, knowledge "
    "measurement, and predator-prey simulation.",
)


class PrettyJSONResponse(JSONResponse):
    """Layer-indented JSON for structure-heavy documents."""

    def render(self, content) -> bytes:
        return json.dumps(content, ensure_ascii=False, indent=2).encode("utf-8")


@app.exception_handler(SasError)
async def _sas_error(request: Request, exc: SasError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"detail": {"code": type(exc).__name__, "message": str(exc)}},
    )


def _bad_request(code: str, message: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"code": code, "message": message})


def _load_model(source: str, path: str | None) -> dsl.SourceModel:
    result = dsl.parse(source, path=path)
    if result.model is None:
        raise HTTPException(
            status_code=400,
            detail={
                "code": "diagnostics",
                "path": path,
                "diagnostics": [asdict(d) for d in result.diagnostics],
            },
        )
    return result.model


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok")


@app.post("/gain", response_model=schemas.GainResponse)
def gain(req: schemas.GainRequest) -> schemas.GainResponse:
    return schemas.GainResponse(gain=fusion.symbiotic_gain(req.n1, req.n2))


@app.post("/validate", response_model=schemas.ValidateResponse)
def validate_source(req: schemas.ValidateRequest) -> schemas.ValidateResponse:
    result = dsl.parse(req.source, path=req.path)
    diags = [schemas.DiagnosticModel(**asdict(d)) for d in result.diagnostics]
    if result.model is None:
        return schemas.ValidateResponse(
            ok=False,
            systems=0,
            concepts=0,
            knowledge=0,
            events=0,
            bindings=0,
            diagnostics=diags,
            violations=[],
        )
    m = result.model
    violations: list[schemas.ViolationModel] = []
    for name, system in m.systems.items():
        for v in core_model.validate(system, context=m.systems):
            violations.append(
                schemas.ViolationModel(
                    code=v.code, path=f"{name}:{v.path}", message=v.message
                )
            )
    return schemas.ValidateResponse(
        ok=not violations,
        systems=len(m.systems),
        concepts=len(m.concepts),
        knowledge=len(m.knowledge),
        events=len(m.events),
        bindings=len(m.bindings),
        diagnostics=diags,
        violations=violations,
    )


@app.post("/fuse", response_model=schemas.FuseResponse)
def fuse_systems(req: schemas.FuseRequest) -> schemas.FuseResponse:
    m = _load_model(req.source, req.path)
    operands = []
    for name in req.systems:
        system = m.systems.get(name)
        if system is None:
            raise _bad_request("unknown-system", f"unknown system: {name!r}")
        operands.append(system)
    result = fusion.fuse(operands[0], operands[1])
    oracle = fusion.gain_oracle(operands[0], operands[1]) if req.oracle else None
    return schemas.FuseResponse(
        fused=result.fused.name,
        components=sorted(result.fused.components),
        gain=result.gain,
        delta=sorted(result.delta.pairs),
        oracle=oracle,
    )


@app.post("/topology")
def topology_view(req: schemas.TopologyRequest) -> PrettyJSONResponse:
    m = _load_model(req.source, req.path)
    if not m.systems:
        return PrettyJSONResponse({"name": "model", "depth": 0, "children": []})
    nodes = [topology.leaf(s) for s in m.systems.values()]
    root = topology.abstract_up("model", nodes)
    children = [
        {
            "name": s.name,
            "depth": 0,
            "components": len(s.components),
            "behaviors": len(s.behaviors),
            "relation_capacity": core_model.potential_relation_count(s),
            "children": [],
        }
        for s in m.systems.values()
    ]
    return PrettyJSONResponse(
        {"name": root.name, "depth": root.depth, "children": children}
    )


@app.post("/reliability", response_model=schemas.ReliabilityResponse)
def reliability_report(req: schemas.ReliabilityRequest) -> schemas.ReliabilityResponse:
    profile = reliability.ErrorProfile.of(req.rates)
    summed = reliability.summed_reliability(profile)
    return schemas.ReliabilityResponse(
        collective_reliability=reliability.collective_reliability(profile),
        summed_reliability=summed.value,
        saturated=summed.saturated,
        cancellation_delta=reliability.cancellation_delta(profile),
    )


@app.post("/capacity", response_model=schemas.CapacityResponse)
def capacity(req: schemas.CapacityRequest) -> schemas.CapacityResponse:
    value = knowledge.memory_capacity_log10(req.neurons, req.synapses)
    return schemas.CapacityResponse(log10_bir=value)


@app.post("/knowledge-gain", response_model=schemas.KnowledgeGainResponse)
def knowledge_gain(req: schemas.KnowledgeGainRequest) -> schemas.KnowledgeGainResponse:
    m = _load_model(req.source, req.path)
    chosen = []
    for name in req.concepts:
        c = m.concepts.get(name)
        if c is None:
            raise _bad_request("unknown-concept", f"unknown concept: {name!r}")
        chosen.append(c)
    breakdown = knowledge.knowledge_symbiosis_gain([chosen[0]], [chosen[1]])
    return schemas.KnowledgeGainResponse(**breakdown.as_dict())


@app.post("/compose", response_model=schemas.ComposeResponse)
def compose(req: schemas.ComposeRequest) -> schemas.ComposeResponse:
    m = _load_model(req.source, req.path)
    kb = m.knowledge_base()
    for _ in range(req.layers):
        kb = knowledge.compose_layer(kb)
    return schemas.ComposeResponse(
        concepts=len(kb.concepts),
        items=len(kb.items),
        layer_sizes=[len(layer) for layer in kb.layers],
        entire_bir=knowledge.entire_knowledge_measure(kb),
    )


@app.post("/dispatch", response_model=schemas.DispatchResponse)
def dispatch(req: schemas.DispatchRequest) -> schemas.DispatchResponse:
    m = _load_model(req.source, req.path)
    dispatcher = m.dispatcher()
    trace = dispatcher.dispatch([(t, name) for t, name in req.events])
    entries = [schemas.TraceEntryModel(**e) for e in trace.to_dicts()]
    handled = sum(1 for e in entries if e.binding is not None)
    return schemas.DispatchResponse(
        trace=entries, handled=handled, unhandled=len(entries) - handled
    )


@app.post("/simulate-pps")
def simulate_pps(req: schemas.SimulateRequest):
    try:
        params = dynamics.LVParams(req.bl, req.dl, req.bg, req.dg)
        initial = dynamics.LVState(t=0.0, n_l=req.nl0, n_g=req.ng0)
        trajectory = dynamics.simulate(params, initial, h=req.dt, steps=req.steps)
    except ValueError as exc:
        raise _bad_request("invalid-parameters", str(exc)) from exc
    if req.format == "csv":
        return PlainTextResponse(
            dynamics.to_csv(trajectory), media_type="text/csv; charset=utf-8"
        )
    return JSONResponse(
        {
            "params": {
                "b_l": params.b_l,
                "d_l": params.d_l,
                "b_g": params.b_g,
                "d_g": params.d_g,
            },
            "step": trajectory.step,
            "samples": [
                {"t": s.t, "n_l": s.n_l, "n_g": s.n_g, "v": s.v}
                for s in trajectory.samples
            ],
        }
    )


@app.get("/taxonomy", response_model=list[schemas.TaxonModel])
def get_taxonomy() -> list[schemas.TaxonModel]:
    return [
        schemas.TaxonModel(
            level=t.level,
            category=t.category.value,
            type_tag=t.type_tag,
            symbol=t.symbol,
            description=t.description,
        )
        for t in him.taxonomy()
    ]


@app.post("/classify", response_model=schemas.ClassifyResponse)
def classify(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
    category = him.classify(
        him.Determinism(req.stimulus), him.Determinism(req.behavior)
    )
    return schemas.ClassifyResponse(
        category=category.value, level=him.CATEGORY_LEVEL[category]
    )


@app.get("/capability/{category}", response_model=schemas.CapabilityResponse)
def capability(category: str) -> schemas.CapabilityResponse:
    try:
        cat = him.Category(category)
    except ValueError:
        raise _bad_request("unknown-category", f"unknown category: {category!r}") from None
    taxa = him.capability_set(cat)
    return schemas.CapabilityResponse(
        category=cat.value,
        level=him.CATEGORY_LEVEL[cat],
        taxa=sorted(t.type_tag for t in taxa),
    )
