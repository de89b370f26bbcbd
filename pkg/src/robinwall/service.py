"""FastAPI service exposing the experiment runners.

One POST endpoint per experiment; invalid physical configurations from
the core modules surface as HTTP 400 with the underlying message.
The CLI is a thin client of this app (in-process by default).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import experiments, schemas
from .errors import ConfigError, DomainError


def create_app() -> FastAPI:
    app = FastAPI(
        title="robinwall",
        description=(
            "Robin/Neumann walls realized as thin attractive layers in front "
            "of a hard wall: reflection amplitudes, convergence curves, a "
            "shooting-oracle cross-check, and wave-packet comparisons."
        ),
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/reflect", response_model=schemas.ReflectResponse)
    def reflect(req: schemas.ReflectRequest) -> schemas.ReflectResponse:
        with _bad_request():
            rows = experiments.reflect_table(req.kind, req.k, req.alpha, req.L)
        return schemas.ReflectResponse(rows=rows)

    @app.post("/converge", response_model=schemas.ConvergeResponse)
    def converge(req: schemas.ConvergeRequest) -> schemas.ConvergeResponse:
        with _bad_request():
            rows, passed = experiments.converge_table(req.k, req.alpha, req.kind, req.L)
        return schemas.ConvergeResponse(rows=rows, passed=passed)

    @app.post("/oracle", response_model=schemas.OracleResponse)
    def oracle(req: schemas.OracleRequest) -> schemas.OracleResponse:
        with _bad_request():
            rows, worst, passed = experiments.oracle_table(
                seed=req.seed,
                tuples_per_kind=req.tuples_per_kind,
                h=req.h,
                against=req.against,
            )
        return schemas.OracleResponse(rows=rows, max_difference=worst, passed=passed)

    @app.post("/evolve", response_model=schemas.EvolveResponse)
    def evolve(req: schemas.EvolveRequest) -> schemas.EvolveResponse:
        with _bad_request():
            tables = experiments.evolve_table(
                kind=req.kind,
                alpha=req.alpha,
                Ls=req.L,
                x_min=req.x_min,
                nodes=req.nodes,
                x0=req.x0,
                sigma=req.sigma,
                k0=req.k0,
                dt=req.dt,
                horizon=req.horizon,
                record_every=req.record_every,
                include_snapshots=req.include_snapshots,
            )
        return schemas.EvolveResponse(
            rows=tables.rows,
            observables=tables.observables,
            snapshots=tables.snapshots,
            norm_drift=tables.norm_drift,
        )

    return app


class _bad_request:
    """Translate core validation errors into HTTP 400 inside a route."""

    def __enter__(self) -> None:
        return None

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc is not None and isinstance(exc, (DomainError, ConfigError)):
            raise HTTPException(status_code=400, detail=str(exc))
        return False


app = create_app()
