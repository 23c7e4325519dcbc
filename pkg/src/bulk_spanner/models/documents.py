from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field

from bulk_spanner.models.fields import Rational
from bulk_spanner.models.instance import Demand, Edge, Instance
from bulk_spanner.models.reports import StageRecord
from bulk_spanner.models.solution import RouteSolution

FORMAT_VERSION = 1


def read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def write_yaml(path: Union[str, Path], data: Dict[str, Any]) -> None:
    with open(path, 'w') as f:
        yaml.safe_dump(data, f, sort_keys=False)


class InstanceMetadata(BaseModel):
    kind: str
    seed: Optional[int] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    planted_routes: Dict[int, List[int]] = Field(default_factory=dict)


class InstanceDocument(BaseModel):
    """An instance as stored on disk; rationals are "num/den" strings."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    format_version: Literal[1] = FORMAT_VERSION
    n: int
    edges: List[Edge] = Field(default_factory=list)
    demands: List[Demand] = Field(default_factory=list)
    metadata: Optional[InstanceMetadata] = None

    def to_instance(self) -> Instance:
        return Instance(n=self.n, edges=tuple(self.edges), demands=tuple(self.demands))

    @classmethod
    def from_instance(cls, inst: Instance, metadata: Optional[InstanceMetadata] = None) -> "InstanceDocument":
        return cls(n=inst.n, edges=list(inst.edges), demands=list(inst.demands), metadata=metadata)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "InstanceDocument":
        return cls.model_validate(read_yaml(path))

    def dump(self, path: Union[str, Path]) -> None:
        write_yaml(path, self.model_dump(mode='json', exclude_none=True))


class ReportCost(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    sigma: Rational
    delta: Rational
    total: Rational


class ReportDocument(BaseModel):
    """A solver run: enough to recompute every cost and feasibility number from the instance."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    format_version: Literal[1] = FORMAT_VERSION
    solver: str
    config: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    theta: Rational = Fraction(0)
    tau: Optional[Rational] = None
    root: Optional[int] = None
    routes: Dict[int, List[int]] = Field(default_factory=dict)
    cost: ReportCost
    margins: Dict[int, Rational] = Field(default_factory=dict)
    stages: List[StageRecord] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)

    def to_solution(self) -> RouteSolution:
        return RouteSolution(routes={p: tuple(r) for p, r in self.routes.items()}, theta=self.theta)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ReportDocument":
        return cls.model_validate(read_yaml(path))

    def dump(self, path: Union[str, Path]) -> None:
        write_yaml(path, self.model_dump(mode='json', exclude_none=True))


class BenchCase(BaseModel):
    kind: str
    params: Dict[str, Any] = Field(default_factory=dict)
    seeds: List[int] = Field(default_factory=lambda: [0])
    algorithms: List[Literal['n45', 'k', 'single-source']] = Field(default_factory=lambda: ['k'])
    oracle: bool = False


class BenchSuite(BaseModel):
    cases: List[BenchCase] = Field(default_factory=list)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "BenchSuite":
        data = read_yaml(path)
        if isinstance(data, list):
            data = {'cases': data}
        return cls.model_validate(data)


class BenchRow(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    instance: str
    algorithm: str
    cost: Optional[Rational] = None
    oracle_cost: Optional[Rational] = None
    ratio: Optional[float] = None
    seconds: float = 0.0
    status: str = 'ok'

    def cells(self, with_oracle: bool) -> Tuple[str, ...]:
        cost = '-' if self.cost is None else f"{float(self.cost):.4g}"
        cells = [self.instance, self.algorithm, cost]
        if with_oracle:
            cells.append('-' if self.oracle_cost is None else f"{float(self.oracle_cost):.4g}")
            cells.append('-' if self.ratio is None else f"{self.ratio:.3f}")
        cells += [f"{self.seconds:.2f}", self.status]
        return tuple(cells)
