"""Pydantic request/response models for the HTTP service.

Requests mirror the CLI flags; responses carry flat rows whose field
names double as the CSV column names (complex quantities pre-split into
re/im). Physical-validity checks beyond basic shape live in the core
modules and surface as HTTP 400.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from . import experiments
from .oracle import DEFAULT_STEP

Kind = Literal["robin", "delta", "valley"]
LayerKind = Literal["delta", "valley"]


class ReflectRequest(BaseModel):
    kind: Kind
    k: list[float] = Field(min_length=1)
    alpha: float = 0.0
    L: list[float] | None = None


class ReflectRow(BaseModel):
    k: float
    alpha: float
    kind: str
    L: float | None
    re_b: float
    im_b: float
    abs_b: float
    arg_b: float


class ReflectResponse(BaseModel):
    rows: list[ReflectRow]


class ConvergeRequest(BaseModel):
    k: list[float] = Field(default_factory=lambda: [1.0], min_length=1)
    alpha: float = 0.0
    kind: list[LayerKind] = Field(default_factory=lambda: ["delta", "valley"], min_length=1)
    L: list[float] = Field(
        default_factory=lambda: list(experiments.DEFAULT_CONVERGE_WIDTHS), min_length=2
    )


class ConvergeRow(BaseModel):
    k: float
    alpha: float
    kind: str
    L: float
    error: float
    observed_order: float | None


class ConvergeResponse(BaseModel):
    rows: list[ConvergeRow]
    passed: bool
    order_band: tuple[float, float] = experiments.ORDER_BAND


class OracleRequest(BaseModel):
    seed: int = experiments.DEFAULT_SEED
    tuples_per_kind: int = Field(default=100, ge=1)
    h: float = Field(default=DEFAULT_STEP, gt=0.0)
    against: Literal["oracle", "robin"] = "oracle"


class OracleRow(BaseModel):
    k: float
    L: float
    kind: str
    re_b_analytic: float
    im_b_analytic: float
    re_b_oracle: float
    im_b_oracle: float
    difference: float


class OracleResponse(BaseModel):
    rows: list[OracleRow]
    max_difference: float
    tolerance: float = experiments.ORACLE_TOLERANCE
    passed: bool


class EvolveRequest(BaseModel):
    kind: Kind
    alpha: float = 0.0
    L: list[float] | None = None
    x_min: float = experiments.EVOLVE_DEFAULTS.x_min
    nodes: int = experiments.EVOLVE_DEFAULTS.nodes
    x0: float = experiments.EVOLVE_DEFAULTS.x0
    sigma: float = experiments.EVOLVE_DEFAULTS.sigma
    k0: float = experiments.EVOLVE_DEFAULTS.k0
    dt: float = experiments.EVOLVE_DEFAULTS.dt
    horizon: float = experiments.EVOLVE_DEFAULTS.horizon
    record_every: int = Field(default=0, ge=0)
    include_snapshots: bool = False


class EvolveRow(BaseModel):
    L: float | None
    distance: float
    re_overlap: float
    im_overlap: float


class ObservableRow(BaseModel):
    run: str
    L: float | None
    step: int
    t: float
    norm: float
    x_mean: float


class SnapshotRow(BaseModel):
    run: str
    L: float | None
    x: float
    re_psi: float
    im_psi: float


class EvolveResponse(BaseModel):
    rows: list[EvolveRow]
    observables: list[ObservableRow]
    snapshots: list[SnapshotRow]
    norm_drift: float
