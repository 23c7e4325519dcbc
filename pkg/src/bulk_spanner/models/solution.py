from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from bulk_spanner.models.fields import Rational


class RouteSolution(BaseModel):
    """One route (ordered edge ids) per resolved demand pair."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    routes: Dict[int, Tuple[int, ...]] = Field(default_factory=dict)
    theta: Rational = Fraction(0)

    @field_validator('theta')
    @classmethod
    def check_theta(cls, v):
        if v < 0:
            raise ValueError(f"Tolerance theta cannot be negative: {v}")
        return v

    def merged(self, other: "RouteSolution") -> "RouteSolution":
        """Union of two solutions over disjoint pair sets; the larger theta is kept."""
        overlap = set(self.routes) & set(other.routes)
        if overlap:
            raise ValueError(f"Pairs routed twice: {sorted(overlap)}")
        routes = dict(self.routes)
        routes.update(other.routes)
        return RouteSolution(routes=routes, theta=max(self.theta, other.theta))


class CostBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sigma: Rational
    delta: Rational

    @property
    def total(self) -> Fraction:
        return self.sigma + self.delta


class ConditionNumbers(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eta: Rational
    xi: Rational


ViolationKind = Literal['self-loop', 'duplicate-edge', 'zero-budget', 'negative-cycle', 'infeasible-pair']


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ViolationKind
    message: str
    pair: Optional[int] = None
    edge: Optional[int] = None


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    violations: List[Violation] = Field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def summary(self) -> str:
        if self.is_valid:
            return "valid"
        return "; ".join(v.message for v in self.violations)


class JunctionTree(BaseModel):
    """
    Routes of resolved pairs through a common root.

    in_paths[p] is the s->r part of pair p, out_paths[p] the r->t part.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    root: int
    in_paths: Dict[int, Tuple[int, ...]] = Field(default_factory=dict)
    out_paths: Dict[int, Tuple[int, ...]] = Field(default_factory=dict)
    theta: Rational = Fraction(0)

    @property
    def pairs(self) -> List[int]:
        return sorted(self.in_paths)

    def route(self, pair: int) -> Tuple[int, ...]:
        return self.in_paths[pair] + self.out_paths[pair]

    def to_solution(self) -> RouteSolution:
        return RouteSolution(routes={p: self.route(p) for p in self.pairs}, theta=self.theta)
