"""
Run Configuration
Dataclass configs for CLI runs, search budgets and convergence experiments
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Any, Optional, List, Union
import json
import math
import os

from config.constants import (
    BUDGET_FACTOR,
    DEFAULT_MAX_STATES,
    DEFAULT_WORKERS,
)
from config.enums import GraphFamily, Subcommand
from config.errors import DomainError


def parse_number(value: Union[int, float, str]) -> float:
    """Accept plain numbers and exact fractions written as 'p/q'"""
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(Fraction(str(value).strip()))
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"not a number: {value!r}") from e


def env_max_states() -> int:
    return int(os.getenv('HOMOTOPY_MAX_STATES', DEFAULT_MAX_STATES))


def env_workers() -> int:
    return int(os.getenv('HOMOTOPY_WORKERS', DEFAULT_WORKERS))


@dataclass(frozen=True)
class SearchBudget:
    """
    Limits for the basic-move search

    max_points caps the number of points of any intermediate chain,
    max_states caps the number of distinct chains visited.
    """
    max_points: int
    max_states: int = DEFAULT_MAX_STATES

    @classmethod
    def for_scale(cls, diameter: float, eps: float,
                  factor: int = BUDGET_FACTOR,
                  max_states: Optional[int] = None) -> 'SearchBudget':
        """Default budget: factor times the normalized point count at this scale"""
        if eps <= 0:
            raise DomainError(f"scale must be positive, got {eps}")
        max_points = factor * int(math.floor(2.0 * diameter / eps + 1.0))
        return cls(
            max_points=max(max_points, 4),
            max_states=max_states if max_states is not None else env_max_states(),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {'max_points': self.max_points, 'max_states': self.max_states}


@dataclass(frozen=True)
class GraphSpec:
    """A named generator with its parameters, e.g. 'torus:1/3,1/3,12'"""
    family: GraphFamily
    params: List[float] = field(default_factory=list)

    @classmethod
    def from_string(cls, text: str) -> 'GraphSpec':
        name, _, rest = text.partition(':')
        try:
            family = GraphFamily(name.strip().lower())
        except ValueError as e:
            raise DomainError(f"unknown graph family: {name!r}") from e
        params = [parse_number(p) for p in rest.split(',') if p.strip()]
        if not params:
            raise DomainError(f"generator {family.value} needs parameters")
        return cls(family=family, params=params)

    def to_string(self) -> str:
        return f"{self.family.value}:" + ",".join(f"{p:g}" for p in self.params)


@dataclass
class RunConfig:
    """
    Configuration for one CLI invocation

    Numeric parameters left as None are derived from the net resolution
    by the subcommand that needs them.
    """
    subcommand: Subcommand
    graph: Optional[str] = None
    graph_file: Optional[str] = None
    resolution: float = 0.02
    eps: Optional[float] = None
    radius: Optional[float] = None
    eta: Optional[float] = None
    eps_min: Optional[float] = None
    eps_max: Optional[float] = None
    triads_file: Optional[str] = None
    config_file: Optional[str] = None
    output_dir: str = "output"
    max_states: int = field(default_factory=env_max_states)
    workers: int = field(default_factory=env_workers)
    stages: int = 4
    floor: float = 0.1

    def validate(self) -> None:
        """Reject nonpositive parameters and resolutions too coarse for the scale"""
        if self.subcommand != Subcommand.GH:
            if (self.graph is None) == (self.graph_file is None):
                raise DomainError("exactly one of --gen or --graph is required")
        for name in ('resolution', 'eps', 'radius', 'eta', 'eps_min', 'eps_max', 'floor'):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise DomainError(f"{name} must be positive, got {value}")
        if self.max_states <= 0 or self.workers <= 0 or self.stages <= 0:
            raise DomainError("max_states, workers and stages must be positive")
        if self.eps is not None and self.resolution >= self.eps / 2:
            raise DomainError(
                f"resolution {self.resolution} must be below eps/2 = {self.eps / 2}"
            )
        if self.subcommand in (Subcommand.COVER, Subcommand.GENERATORS) and self.eps is None:
            raise DomainError(f"{self.subcommand.value} requires --eps")
        if self.subcommand == Subcommand.COVER and self.radius is None:
            raise DomainError("cover requires --radius")
        if self.subcommand == Subcommand.GH and self.config_file is None:
            raise DomainError("gh requires --config")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subcommand': self.subcommand.value,
            'graph': self.graph,
            'graph_file': self.graph_file,
            'resolution': self.resolution,
            'eps': self.eps,
            'radius': self.radius,
            'eta': self.eta,
            'eps_min': self.eps_min,
            'eps_max': self.eps_max,
            'triads_file': self.triads_file,
            'config_file': self.config_file,
            'output_dir': self.output_dir,
            'max_states': self.max_states,
            'workers': self.workers,
            'stages': self.stages,
            'floor': self.floor,
        }


@dataclass
class ExperimentConfig:
    """
    Configuration for a Gromov-Hausdorff convergence experiment

    family picks the sequence: circles of circumference 1 - 1/i, or
    grid tori with sides (1 - 1/i)/3 and (1 + 1/i)/3.
    """
    family: GraphFamily
    indices: List[int]
    eps: float = 1.0 / 3.0
    delta: float = 0.3
    radius: float = 1.0
    resolution: float = 0.02
    limit_resolution: Optional[float] = None
    torus_n: int = 12
    limit_scales: List[float] = field(default_factory=list)
    window: float = 0.05
    eps_rule: str = "constant"
    triad_rule: str = "window"
    p_check_radius: Optional[float] = None
    eta: Optional[float] = None
    max_states: int = field(default_factory=env_max_states)
    workers: int = field(default_factory=env_workers)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.family not in (GraphFamily.CIRCLE, GraphFamily.TORUS):
            raise DomainError(f"experiments support circle and torus families, got {self.family.value}")
        if not self.indices or any(i < 2 for i in self.indices):
            raise DomainError("indices must be a nonempty list of integers >= 2")
        if self.eps_rule != "constant":
            raise DomainError(f"unsupported eps rule: {self.eps_rule}")
        if self.triad_rule not in ("window", "none"):
            raise DomainError(f"unsupported triad rule: {self.triad_rule}")
        for name in ('eps', 'delta', 'radius', 'resolution', 'window'):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        if self.delta >= self.eps:
            raise DomainError(f"delta {self.delta} must be below eps {self.eps}")
        if self.resolution >= self.eps / 2:
            raise DomainError("resolution must be below eps/2")
        if self.torus_n < 3:
            raise DomainError("torus_n must be at least 3")

    @property
    def net_resolution_limit(self) -> float:
        return self.limit_resolution if self.limit_resolution is not None else self.resolution

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> 'ExperimentConfig':
        """Create ExperimentConfig from dictionary"""
        def number_or_none(key):
            value = config_dict.get(key)
            return None if value is None else parse_number(value)

        return cls(
            family=GraphFamily(config_dict.get('family', 'circle')),
            indices=[int(i) for i in config_dict.get('indices', [2, 4, 8])],
            eps=parse_number(config_dict.get('eps', '1/3')),
            delta=parse_number(config_dict.get('delta', 0.3)),
            radius=parse_number(config_dict.get('radius', 1.0)),
            resolution=parse_number(config_dict.get('resolution', 0.02)),
            limit_resolution=number_or_none('limit_resolution'),
            torus_n=int(config_dict.get('torus_n', 12)),
            limit_scales=[parse_number(s) for s in config_dict.get('limit_scales', [])],
            window=parse_number(config_dict.get('window', 0.05)),
            eps_rule=config_dict.get('eps_rule', 'constant'),
            triad_rule=config_dict.get('triad_rule', 'window'),
            p_check_radius=number_or_none('p_check_radius'),
            eta=number_or_none('eta'),
            max_states=int(config_dict.get('max_states', env_max_states())),
            workers=int(config_dict.get('workers', env_workers())),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            'family': self.family.value,
            'indices': list(self.indices),
            'eps': self.eps,
            'delta': self.delta,
            'radius': self.radius,
            'resolution': self.resolution,
            'limit_resolution': self.limit_resolution,
            'torus_n': self.torus_n,
            'limit_scales': list(self.limit_scales),
            'window': self.window,
            'eps_rule': self.eps_rule,
            'triad_rule': self.triad_rule,
            'p_check_radius': self.p_check_radius,
            'eta': self.eta,
            'max_states': self.max_states,
            'workers': self.workers,
        }

    @classmethod
    def from_json_file(cls, file_path: str) -> 'ExperimentConfig':
        """Load configuration from JSON file"""
        with open(file_path, 'r') as f:
            config_dict = json.load(f)
        return cls.from_dict(config_dict)

    def to_json_file(self, file_path: str) -> None:
        """Save configuration to JSON file"""
        with open(file_path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)
