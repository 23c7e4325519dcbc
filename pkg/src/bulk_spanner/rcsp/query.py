from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bulk_spanner.models.fields import Rational
from bulk_spanner.models.instance import Instance


class RcspArc(BaseModel):
    """Arc of an RCSP query; `key` is the caller's edge id."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tail: int = Field(ge=0)
    head: int = Field(ge=0)
    cost: Rational
    weights: Tuple[Rational, ...]
    key: int

    @field_validator('cost')
    @classmethod
    def check_cost(cls, v):
        if v < 0:
            raise ValueError(f"Arc cost cannot be negative: {v}")
        return v


class RcspQuery(BaseModel):
    """
    Multi-budget shortest path query: find a min-cost source->sink path with
    w_i(P) <= L_i, answered within (1 + tolerances[i]) per dimension.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    arcs: Tuple[RcspArc, ...]
    source: int = Field(ge=0)
    sink: int = Field(ge=0)
    budgets: Tuple[Rational, ...]
    tolerances: Tuple[Rational, ...]

    @model_validator(mode='after')
    def check_dimensions(self):
        m = len(self.budgets)
        if m == 0:
            raise ValueError("An RCSP query needs at least one resource")
        if len(self.tolerances) != m:
            raise ValueError(f"Expected {m} tolerances, got {len(self.tolerances)}")
        for budget in self.budgets:
            if budget == 0:
                raise ValueError("Resource budgets must be nonzero")
        for arc in self.arcs:
            if len(arc.weights) != m:
                raise ValueError(f"Arc {arc.key} has {len(arc.weights)} weights, expected {m}")
            if arc.tail >= self.n or arc.head >= self.n:
                raise ValueError(f"Arc {arc.key} references a vertex outside 0..{self.n - 1}")
        if self.source >= self.n or self.sink >= self.n:
            raise ValueError("Query endpoints outside the vertex range")
        return self

    @property
    def m(self) -> int:
        return len(self.budgets)

    def with_budgets(self, budgets: Sequence[Fraction], tolerances: Sequence[Fraction]) -> "RcspQuery":
        return RcspQuery(n=self.n, arcs=self.arcs, source=self.source, sink=self.sink,
                         budgets=tuple(budgets), tolerances=tuple(tolerances))

    @classmethod
    def from_instance(
        cls,
        inst: Instance,
        source: int,
        sink: int,
        cost: Callable[[int], Fraction],
        weights: Sequence[Callable[[int], Fraction]],
        budgets: Sequence[Fraction],
        tolerances: Sequence[Fraction],
        edge_ids: Optional[Iterable[int]] = None,
    ) -> "RcspQuery":
        """Query over (a subset of) an instance's edges with per-edge cost and weight functions."""
        ids = range(inst.m) if edge_ids is None else sorted(edge_ids)
        arcs = tuple(
            RcspArc(tail=inst.edges[e].tail, head=inst.edges[e].head, cost=cost(e),
                    weights=tuple(w(e) for w in weights), key=e)
            for e in ids
        )
        return cls(n=inst.n, arcs=arcs, source=source, sink=sink,
                   budgets=tuple(budgets), tolerances=tuple(tolerances))


class RcspResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    path: Tuple[int, ...]
    cost: Rational
    consumption: Tuple[Rational, ...]
    patterns: int = 0
    relaxations: int = 0


@dataclass(frozen=True)
class ScaledQuery:
    """
    A query with every weight rounded up to a multiple of its dimension's Delta.

    multipliers[a][i] is the integer d_i of arc a; lower/upper bound the valid
    patterns in units of Delta, target is the pattern the answer is read at.
    """

    query: RcspQuery
    deltas: Tuple[Fraction, ...]
    multipliers: Tuple[Tuple[int, ...], ...]
    negatives: Tuple[Fraction, ...]
    lower: Tuple[int, ...]
    upper: Tuple[int, ...]
    target: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.deltas)

    def scaled_weight(self, arc_index: int, dim: int) -> Fraction:
        return self.multipliers[arc_index][dim] * self.deltas[dim]

    @property
    def box_sizes(self) -> Tuple[int, ...]:
        return tuple(max(0, hi - lo + 1) for lo, hi in zip(self.lower, self.upper))
