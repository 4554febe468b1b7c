"""FastAPI service exposing the compute operations.

Every endpoint is stateless and deterministic for a fixed request body, so
a shared instance serves concurrent clients without coordination.  The CLI
is a thin client of exactly this API (in-process by default).
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import runner
from ..models import (
    CertifyRequest,
    DoublingRequest,
    ErmakoffRequest,
    IndicesRequest,
    NormRequest,
    PoincareRequest,
    RearrangeRequest,
    TableResponse,
)

_HANDLED = (ValueError, KeyError, IndexError, ArithmeticError, OverflowError)


def create_app() -> FastAPI:
    app = FastAPI(
        title="ripoincare",
        description=(
            "Rearrangement-invariant norms on finite metric measure spaces, "
            "Poincare-constant estimation, and doubling certificates."
        ),
        version="0.1.0",
    )

    def guarded(fn, req):
        try:
            return fn(req)
        except _HANDLED as exc:
            detail = str(exc) or exc.__class__.__name__
            raise HTTPException(status_code=422, detail=detail) from exc

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/v1/norm", response_model=TableResponse)
    def norm(req: NormRequest) -> TableResponse:
        return guarded(runner.run_norm, req)

    @app.post("/v1/rearrange", response_model=TableResponse)
    def rearrange(req: RearrangeRequest) -> TableResponse:
        return guarded(runner.run_rearrange, req)

    @app.post("/v1/indices", response_model=TableResponse)
    def indices(req: IndicesRequest) -> TableResponse:
        return guarded(runner.run_indices, req)

    @app.post("/v1/ermakoff", response_model=TableResponse)
    def ermakoff(req: ErmakoffRequest) -> TableResponse:
        return guarded(runner.run_ermakoff, req)

    @app.post("/v1/doubling", response_model=TableResponse)
    def doubling(req: DoublingRequest) -> TableResponse:
        return guarded(runner.run_doubling, req)

    @app.post("/v1/poincare", response_model=TableResponse)
    def poincare(req: PoincareRequest) -> TableResponse:
        return guarded(runner.run_poincare, req)

    @app.post("/v1/certify", response_model=TableResponse)
    def certify(req: CertifyRequest) -> TableResponse:
        return guarded(runner.run_certify, req)

    return app


app = create_app()
