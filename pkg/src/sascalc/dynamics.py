"""Predator-prey dynamics with a conserved-quantity monitor.

The model couples a predator population N_L to a prey population N_G:

    dN_L/dt = b_L * N_L * N_G - d_L * N_L
    dN_G/dt = b_G * N_G - d_G * N_G * N_L

The flow is conservative: V = b_L*N_G - d_L*ln(N_G) + d_G*N_L - b_G*ln(N_L)
is constant along exact trajectories, so its numeric drift measures
integrator error directly. Integration is fixed-step classic RK4, chosen
over adaptive schemes because bit-stable reproducibility matters more here
than step efficiency. V is undefined at zero or negative populations and
is recorded as absent there rather than as an infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonFiniteState

#: Default parameter set: multi-cycle oscillation around equilibrium
#: N_L = 50, N_G = 100.
DEFAULT_B_L = 0.01
DEFAULT_D_L = 1.0
DEFAULT_B_G = 1.0
DEFAULT_D_G = 0.02
DEFAULT_N_L0 = 10.0
DEFAULT_N_G0 = 200.0
DEFAULT_DT = 1e-3
DEFAULT_STEPS = 50_000

#: Hard ceiling on h * steps; guards against runaway requests.
MAX_HORIZON = 1.0e5

CSV_HEADER = "t,N_L,N_G,V"


@dataclass(frozen=True)
class LVParams:
    b_l: float = DEFAULT_B_L
    d_l: float = DEFAULT_D_L
    b_g: float = DEFAULT_B_G
    d_g: float = DEFAULT_D_G

    def __post_init__(self) -> None:
        for name in ("b_l", "d_l", "b_g", "d_g"):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise ValueError(f"{name} must be strictly positive, got {v!r}")


@dataclass(frozen=True)
class LVState:
    t: float
    n_l: float
    n_g: float

    def __post_init__(self) -> None:
        if self.n_l < 0.0 or self.n_g < 0.0:
            raise ValueError("populations must be non-negative")


@dataclass(frozen=True)
class Sample:
    t: float
    n_l: float
    n_g: float
    v: float | None


@dataclass(frozen=True)
class Trajectory:
    params: LVParams
    step: float
    samples: tuple[Sample, ...]


def derivatives(state: LVState, params: LVParams) -> tuple[float, float]:
    """(dN_L/dt, dN_G/dt), exactly as the model writes them."""

    dn_l = params.b_l * state.n_l * state.n_g - params.d_l * state.n_l
    dn_g = params.b_g * state.n_g - params.d_g * state.n_g * state.n_l
    return dn_l, dn_g


def equilibrium(params: LVParams) -> LVState:
    """The interior fixed point: N_G* = d_L/b_L, N_L* = b_G/d_G."""

    return LVState(t=0.0, n_l=params.b_g / params.d_g, n_g=params.d_l / params.b_l)


def first_integral(n_l: float, n_g: float, params: LVParams) -> float | None:
    """Conserved V, or None when either population is not positive."""

    if n_l <= 0.0 or n_g <= 0.0:
        return None
    return (
        params.b_l * n_g
        - params.d_l * math.log(n_g)
        + params.d_g * n_l
        - params.b_g * math.log(n_l)
    )


def simulate(
    params: LVParams,
    initial: LVState,
    h: float = DEFAULT_DT,
    steps: int = DEFAULT_STEPS,
    max_horizon: float = MAX_HORIZON,
) -> Trajectory:
    """Classic fixed-step RK4 over the requested horizon.

    Produces steps + 1 samples; sample i sits at t0 + i*h so times carry no
    accumulated summation error. A NaN or infinite state aborts the run
    with NonFiniteState carrying the index of the last finite sample.
    """

    if not (h > 0.0) or not math.isfinite(h):
        raise ValueError(f"step must be strictly positive, got {h!r}")
    if steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    if h * steps > max_horizon:
        raise ValueError(
            f"horizon h*steps = {h * steps!r} exceeds the ceiling {max_horizon!r}"
        )

    b_l, d_l, b_g, d_g = params.b_l, params.d_l, params.b_g, params.d_g

    def f(nl: float, ng: float) -> tuple[float, float]:
        return (b_l * nl * ng - d_l * nl, b_g * ng - d_g * ng * nl)

    t0 = initial.t
    nl = float(initial.n_l)
    ng = float(initial.n_g)
    samples: list[Sample] = [Sample(t0, nl, ng, first_integral(nl, ng, params))]

    for i in range(1, steps + 1):
        k1l, k1g = f(nl, ng)
        k2l, k2g = f(nl + 0.5 * h * k1l, ng + 0.5 * h * k1g)
        k3l, k3g = f(nl + 0.5 * h * k2l, ng + 0.5 * h * k2g)
        k4l, k4g = f(nl + h * k3l, ng + h * k3g)
        nl = nl + (h / 6.0) * (k1l + 2.0 * k2l + 2.0 * k3l + k4l)
        ng = ng + (h / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
        if not (math.isfinite(nl) and math.isfinite(ng)):
            raise NonFiniteState(last_valid_index=i - 1)
        t = t0 + i * h
        samples.append(Sample(t, nl, ng, first_integral(nl, ng, params)))

    return Trajectory(params=params, step=h, samples=tuple(samples))


def _fmt(x: float) -> str:
    return format(x, ".17g")


def to_csv(trajectory: Trajectory) -> str:
    """CSV with header t,N_L,N_G,V; 17 significant digits; V blank when absent."""

    lines = [CSV_HEADER]
    for s in trajectory.samples:
        v = "" if s.v is None else _fmt(s.v)
        lines.append(f"{_fmt(s.t)},{_fmt(s.n_l)},{_fmt(s.n_g)},{v}")
    return "\n".join(lines) + "\n"


def local_maxima(values: list[float]) -> list[int]:
    """Indices of strict interior peaks; endpoints never qualify."""

    return [
        i
        for i in range(1, len(values) - 1)
        if values[i - 1] < values[i] and values[i] > values[i + 1]
    ]


def relative_drift(trajectory: Trajectory) -> float:
    """Max |V_i - V_0| / |V_0| over samples where V exists."""

    present = [s.v for s in trajectory.samples if s.v is not None]
    if not present:
        return 0.0
    v0 = present[0]
    scale = abs(v0)
    if scale == 0.0:
        return max(abs(v - v0) for v in present)
    return max(abs(v - v0) for v in present) / scale
