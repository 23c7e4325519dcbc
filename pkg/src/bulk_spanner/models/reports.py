import math
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from bulk_spanner.config.loader import Config
from bulk_spanner.models.fields import Rational


class RcspSettings(BaseModel):
    max_patterns: int = 2_000_000
    dense_max_cells: int = 50_000
    poly_coefficient: int = 1000
    poly_degree: int = 3
    float_tolerance: float = 1e-9

    def poly_bound(self, n: int) -> int:
        return self.poly_coefficient * max(n, 2) ** self.poly_degree


class LpSettings(BaseModel):
    backend: Literal['auto', 'exact', 'highs'] = 'auto'
    exact_max_cells: int = 6000
    max_iterations: int = 200
    float_floor: float = 1e-9


class JunctionSettings(BaseModel):
    max_layered_vertices: int = 200_000
    max_tree_nodes: int = 60_000
    pareto_thinning: bool = True
    label_cover_trials: Optional[int] = None
    max_label_cover_trials: int = 64


class OracleSettings(BaseModel):
    max_vertices: int = 10
    max_paths: int = 200_000
    max_combinations: int = 2_000_000


Algorithm = Literal['n45', 'k', 'single-source']


class SolverConfig(BaseModel):
    """Every tunable of a solver run; defaults come from config/solver.yaml."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    theta: Rational = Fraction(1, 2)
    epsilon: Rational = Fraction(1, 2)
    zeta: Rational = Fraction(1, 2)
    thick_zeta: Rational = Fraction(1)
    seed: int = 0
    algorithm: Algorithm = 'k'
    tau_initial: Optional[Rational] = None
    max_tau_doublings: int = 24
    rcsp: RcspSettings = Field(default_factory=RcspSettings)
    lp: LpSettings = Field(default_factory=LpSettings)
    junction: JunctionSettings = Field(default_factory=JunctionSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)

    @field_validator('theta', 'epsilon', 'zeta', 'thick_zeta')
    @classmethod
    def check_positive(cls, v):
        if v <= 0:
            raise ValueError(f"Tolerance must be positive, got {v}")
        return v

    @property
    def height(self) -> int:
        return max(2, math.ceil(1 / self.epsilon))

    @classmethod
    def from_config(cls, config: Optional[Config] = None, **overrides: Any) -> "SolverConfig":
        """Build from the YAML defaults, then apply non-None keyword overrides."""
        config = config or Config()
        values: Dict[str, Any] = config.section('solver')
        for name in ('rcsp', 'lp', 'junction', 'oracle'):
            if name in config.solver_config:
                values[name] = config.section(name)
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


StageTag = Literal['thick', 'junction', 'lp-round', 'fallback-k', 'greedy']


class StageRecord(BaseModel):
    """
    One committed stage: pairs it resolved, the increase of the total cost it
    caused, and the density the stage selected on.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    stage: StageTag
    pairs: List[int]
    cost: Rational
    density: Rational


class StageReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    records: List[StageRecord] = Field(default_factory=list)
    tau: Optional[Rational] = None

    def add(self, record: StageRecord) -> None:
        self.records.append(record)

    @property
    def resolved(self) -> int:
        return sum(len(r.pairs) for r in self.records)

    @property
    def total_cost(self) -> Fraction:
        return sum((r.cost for r in self.records), Fraction(0))

    def extended(self, other: "StageReport") -> "StageReport":
        return StageReport(records=self.records + other.records, tau=self.tau or other.tau)
