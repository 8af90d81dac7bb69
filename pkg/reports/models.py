"""
Report Models
Pydantic models for every emitted JSON document; all carry format_version
"""

import logging
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError

from config.constants import FORMAT_VERSION
from config.errors import DomainError

logger = logging.getLogger(__name__)


class ChainModel(BaseModel):
    """An eps-chain as (edge, offset) pairs"""
    format_version: int = Field(default=FORMAT_VERSION, description="Report schema version")
    scale: float = Field(..., gt=0, description="Chain scale eps")
    points: List[List[float]] = Field(..., min_length=1, description="Points as [edge id, offset]")


class VerdictModel(BaseModel):
    """Nullity verdict with its certificate"""
    format_version: int = Field(default=FORMAT_VERSION, description="Report schema version")
    kind: str = Field(..., description="null, not_null or unknown")
    witness: Optional[Dict[str, Any]] = Field(None, description="Replayable homotopy for Null")
    certificate: Optional[List[int]] = Field(None, description="H1 class for NotNull")
    word: Optional[List[int]] = Field(None, description="Presentation word of the loop")
    detail: str = Field(default="", description="Free-text diagnostic")


class TriadModel(BaseModel):
    points: List[List[float]] = Field(..., min_length=3, max_length=3)
    side: float
    eta: float


class SpectrumEntryModel(BaseModel):
    value: float = Field(..., description="Critical value (smallest essential side of its cluster)")
    multiplicity: int = Field(..., ge=1)
    certainty: str = Field(..., description="certain or heuristic")
    error: float = Field(..., ge=0, description="Error bar: eta plus net resolution")
    representatives: List[TriadModel] = Field(default_factory=list)
    classes: List[List[int]] = Field(default_factory=list, description="H1 classes up to sign")


class SpectrumReportModel(BaseModel):
    """
    Homotopy critical spectrum of one graph
    """
    format_version: int = Field(default=FORMAT_VERSION, description="Report schema version")
    graph: str = Field(..., description="Generator string or graph file")
    entries: List[SpectrumEntryModel] = Field(default_factory=list)
    covering_spectrum: List[List[float]] = Field(default_factory=list, description="[3/2 * value, multiplicity]")
    eps_min: float
    eps_max: float
    eta: float
    resolution: float
    unresolved: List[List[float]] = Field(default_factory=list, description="Undecided side clusters")
    certain: bool

    class Config:
        json_schema_extra = {
            "example": {
                "format_version": 1,
                "graph": "circle:1",
                "entries": [{"value": 0.34, "multiplicity": 1, "certainty": "certain", "error": 0.05,
                             "representatives": [], "classes": [[1]]}],
                "covering_spectrum": [[0.51, 1]],
                "eps_min": 0.03,
                "eps_max": 0.5,
                "eta": 0.04,
                "resolution": 0.01,
                "unresolved": [],
                "certain": True
            }
        }


class CoverNodeModel(BaseModel):
    id: int
    point: List[float] = Field(..., description="Projection as [edge id, offset]")
    norm: float = Field(..., ge=0, description="Distance to the base node")


class CoverBallModel(BaseModel):
    """Projection table of a cover ball"""
    format_version: int = Field(default=FORMAT_VERSION, description="Report schema version")
    graph: str
    scale: float = Field(..., gt=0)
    radius: float = Field(..., gt=0)
    resolution: float
    nodes: List[CoverNodeModel] = Field(default_factory=list)
    kernel_triads: List[TriadModel] = Field(default_factory=list)
    deck_rank: int = Field(..., ge=0)
    deck_torsion: List[int] = Field(default_factory=list)
    group_kind: str


class GeneratorReportModel(BaseModel):
    """Lollichain generators of the deck group at one scale"""
    format_version: int = Field(default=FORMAT_VERSION, description="Report schema version")
    graph: str
    scale: float
    kind: str
    generators: List[ChainModel] = Field(default_factory=list)
    triads: List[TriadModel] = Field(default_factory=list)
    classes: List[List[int]] = Field(default_factory=list)
    h1_generates: bool
    generation_certified: bool


class ExperimentRowModel(BaseModel):
    i: int
    target: str
    scale: float
    gh_lower: float = Field(..., ge=0)
    gh_upper: float = Field(..., ge=0)
    map_distortion: Optional[float] = None
    deck_rank: int
    deck_torsion: List[int] = Field(default_factory=list)
    error: float


class ExperimentReportModel(BaseModel):
    """Per-index comparisons of a convergence experiment"""
    format_version: int = Field(default=FORMAT_VERSION, description="Report schema version")
    config: Dict[str, Any]
    legs: List[Dict[str, Any]] = Field(default_factory=list)
    limits: List[Dict[str, Any]] = Field(default_factory=list)
    rows: List[ExperimentRowModel] = Field(default_factory=list)
    thresholds: Dict[str, Optional[int]] = Field(default_factory=dict,
                                                 description="First index from which each inequality holds")


class DemoReportModel(BaseModel):
    """Valency and critical values per Hawaiian stage"""
    format_version: int = Field(default=FORMAT_VERSION, description="Report schema version")
    resolution: float
    floor: float
    stages: List[Dict[str, Any]] = Field(default_factory=list)


def validate_report(model: type, data: Dict[str, Any]) -> BaseModel:
    """
    Validate a raw report dict against its model

    Raises:
        DomainError: the data does not fit the schema
    """
    try:
        return model(**data)
    except ValidationError as e:
        logger.error(f"{model.__name__} validation failed: {e}")
        raise DomainError(f"invalid {model.__name__}: {e.error_count()} errors") from e
