"""Request and response bodies for the HTTP surface."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from .. import dynamics


class HealthResponse(BaseModel):
    status: str


class DiagnosticModel(BaseModel):
    severity: str
    line: int
    column: int
    code: str
    message: str


class ViolationModel(BaseModel):
    code: str
    path: str
    message: str


class SourcePayload(BaseModel):
    """A request carrying .sas source text; ``path`` only labels diagnostics."""

    source: str
    path: str | None = None


class GainRequest(BaseModel):
    n1: int = Field(ge=0)
    n2: int = Field(ge=0)


class GainResponse(BaseModel):
    gain: int


class ValidateRequest(SourcePayload):
    pass


class ValidateResponse(BaseModel):
    ok: bool
    systems: int
    concepts: int
    knowledge: int
    events: int
    bindings: int
    diagnostics: list[DiagnosticModel]
    violations: list[ViolationModel]


class FuseRequest(SourcePayload):
    systems: list[str] = Field(min_length=2, max_length=2)
    oracle: bool = False


class FuseResponse(BaseModel):
    fused: str
    components: list[str]
    gain: int
    delta: list[tuple[str, str]]
    oracle: int | None = None


class TopologyRequest(SourcePayload):
    pass


class ReliabilityRequest(BaseModel):
    rates: list[float] = Field(min_length=1)


class ReliabilityResponse(BaseModel):
    collective_reliability: float
    summed_reliability: float
    saturated: bool
    cancellation_delta: float


class CapacityRequest(BaseModel):
    neurons: float = Field(ge=0)
    synapses: float = Field(ge=0)


class CapacityResponse(BaseModel):
    log10_bir: float


class KnowledgeGainRequest(SourcePayload):
    concepts: list[str] = Field(min_length=2, max_length=2)


class KnowledgeGainResponse(BaseModel):
    intension: int
    extension: int
    internal: int
    input: int
    output: int
    total: int


class ComposeRequest(SourcePayload):
    layers: int = Field(default=1, ge=1)


class ComposeResponse(BaseModel):
    concepts: int
    items: int
    layer_sizes: list[int]
    entire_bir: int


class DispatchRequest(SourcePayload):
    events: list[tuple[int, str]]


class TraceEntryModel(BaseModel):
    seq: int
    t: int
    event: str
    binding: str | None
    level: int | None
    taxon_tag: str | None


class DispatchResponse(BaseModel):
    trace: list[TraceEntryModel]
    handled: int
    unhandled: int


class SimulateRequest(BaseModel):
    bl: float = Field(default=dynamics.DEFAULT_B_L, gt=0)
    dl: float = Field(default=dynamics.DEFAULT_D_L, gt=0)
    bg: float = Field(default=dynamics.DEFAULT_B_G, gt=0)
    dg: float = Field(default=dynamics.DEFAULT_D_G, gt=0)
    nl0: float = Field(default=dynamics.DEFAULT_N_L0, ge=0)
    ng0: float = Field(default=dynamics.DEFAULT_N_G0, ge=0)
    dt: float = Field(default=dynamics.DEFAULT_DT, gt=0)
    steps: int = Field(default=dynamics.DEFAULT_STEPS, ge=1)
    format: Literal["json", "csv"] = "json"


class TaxonModel(BaseModel):
    level: int
    category: str
    type_tag: str
    symbol: str
    description: str


class ClassifyRequest(BaseModel):
    stimulus: Literal["deterministic", "indeterministic"]
    behavior: Literal["deterministic", "indeterministic"]


class ClassifyResponse(BaseModel):
    category: str
    level: int


class CapabilityResponse(BaseModel):
    category: str
    level: int
    taxa: list[str]
