"""
Wire schemas for everything the CLI reads or prints as JSON.

Domain values convert to and from these models with to_model() /
from_model(); the models never hold domain logic.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, RootModel, field_validator


class GraphModel(BaseModel):
    n: int = Field(ge=0)
    edges: List[Tuple[int, int]]


class OrientationModel(BaseModel):
    # [tail, head] per edge, in edge-index order
    edges: List[Tuple[int, int]]


class EnumeratedOrientationModel(OrientationModel):
    """Orientation with its integer code, as listed by enumerate and bound."""

    code: int


class FiringSequenceModel(BaseModel):
    start: OrientationModel
    fires: List[int]


class FiringReportModel(BaseModel):
    final: OrientationModel
    counts: List[int]
    length: int
    lemma1_ok: bool
    bound_ok: Optional[bool] = None
    bound: Optional[int] = None


class PointModel(BaseModel):
    coords: List[str]

    @field_validator("coords")
    @classmethod
    def _exact_rationals(cls, coords: List[str]) -> List[str]:
        for value in coords:
            if "." in value or "e" in value.lower():
                raise ValueError(f"Coordinate {value!r} must be an integer or p/q rational")
            try:
                Fraction(value)
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"Coordinate {value!r} is not a rational: {e}") from None
        return coords


class RegionSignatureModel(RootModel[Dict[str, int]]):
    """Edge key 'i-j' to slab index floor(x_j - x_i)."""


class CubeAnchorModel(BaseModel):
    floors: List[int]


class PointRegionModel(BaseModel):
    signature: RegionSignatureModel
    anchor: CubeAnchorModel


class PosetModel(BaseModel):
    elements: List[OrientationModel]
    covers: List[Tuple[int, int]]


class ComponentModel(BaseModel):
    index: int
    members: List[int]
    codes: List[int]
    covers: List[Tuple[int, int]]
    minimum: Optional[int] = None


class ChromaticPolynomialModel(RootModel[List[int]]):
    """Integer coefficients, constant term first."""


class GeometryCheckModel(BaseModel):
    samples: int
    violations: Dict[str, int]
    passed: bool


class ComponentReportModel(BaseModel):
    index: int
    size: int
    members: List[int]
    is_lattice: bool
    is_distributive: bool
    minimum: Optional[OrientationModel] = None
    minimum_code: Optional[int] = None
    minimum_unique_sink: bool
    bounds_agree: bool
    bound_mismatches: int = 0
    failures: List[str] = []


class LatticeReportModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    graph: GraphModel
    certificate: str
    elements: int
    covers: int
    non_cover_firings: int
    component_count: int
    greene_zaslavsky_count: Optional[int] = None
    unique_sink_count: int
    counts_match: bool
    components: List[ComponentReportModel]
    geometry: Optional[GeometryCheckModel] = None
    failures: List[str] = []
    passed: bool = Field(alias="pass")

    def dump_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class CorpusReportModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    max_vertices: int
    graphs: int
    failed: List[str]
    reports: List[LatticeReportModel]
    passed: bool = Field(alias="pass")

    def dump_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)
