"""Request/response schemas shared by the HTTP service and the CLI client."""
from __future__ import annotations

from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, Field

__all__ = [
    "LineGridSpaceModel",
    "ExplicitSpaceModel",
    "SpaceModel",
    "BallModel",
    "FunctionModel",
    "NormRequest",
    "RearrangeRequest",
    "IndicesRequest",
    "ErmakoffRequest",
    "DoublingRequest",
    "PoincareRequest",
    "CertifyRequest",
    "TableResponse",
]


class LineGridSpaceModel(BaseModel):
    kind: Literal["line_grid"] = "line_grid"
    start: float
    stop: float
    count: int
    weight: str = "uniform"


class ExplicitSpaceModel(BaseModel):
    kind: Literal["explicit"] = "explicit"
    dist: list[list[float]]
    weight: list[float]


SpaceModel = Annotated[
    Union[LineGridSpaceModel, ExplicitSpaceModel], Field(discriminator="kind")
]


class BallModel(BaseModel):
    center: int
    radius: float
    closed: bool = False


class FunctionModel(BaseModel):
    """Test-function stanza: a named shape over the space's points."""

    kind: Literal["coordinate", "distance", "indicator", "values", "random_lipschitz"] = (
        "coordinate"
    )
    origin: int = 0
    values: list[float] | None = None
    ball: BallModel | None = None


class NormRequest(BaseModel):
    space: SpaceModel
    function: FunctionModel = FunctionModel()
    specs: list[str]
    ball: BallModel | None = None
    seed: int = 0


class RearrangeRequest(BaseModel):
    space: SpaceModel
    function: FunctionModel = FunctionModel()
    ball: BallModel | None = None
    seed: int = 0


class IndicesRequest(BaseModel):
    specs: list[str]
    resolution: int = 1


class ErmakoffRequest(BaseModel):
    gain: str
    x: str | None = None
    y: str | None = None
    k_max: int = 40


class DoublingRequest(BaseModel):
    space: SpaceModel
    max_rows: int = 0  # 0 keeps every sweep row in the table


class PoincareRequest(BaseModel):
    space: SpaceModel
    x: str
    y: str
    sigma: float = 1.0
    families: list[str] = ["cutoffs", "distance", "random_lipschitz", "indicator"]
    ball_count: int = 4
    zero_boundary: bool = False
    safety: float = 2.0
    connect_radius: float | None = None
    seed: int = 0


class CertifyRequest(BaseModel):
    space: SpaceModel
    x: str
    y: str
    gain: str = "psi_of(X,Y)"
    c: float | None = None  # None -> empirical estimate times the safety factor
    j_max: int = 20
    sigma: float = 1.0
    families: list[str] = ["cutoffs", "distance", "random_lipschitz", "indicator"]
    safety: float = 2.0
    ball_count: int = 3
    ball: BallModel | None = None
    connect_radius: float | None = None
    seed: int = 0


class TableResponse(BaseModel):
    columns: list[str]
    rows: list[list[Union[str, int, float]]]
    summary: dict[str, Any]
