# File: app/schemas.py
from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from .models import OutputFormat, Suite


def reciprocal(p: float) -> float:
    # 1/inf is fixed at zero, never computed by division
    return 0.0 if math.isinf(p) else 1.0 / p


def format_extended(p: float) -> str:
    if math.isinf(p):
        return "inf"
    return repr(float(p)) if not float(p).is_integer() else str(int(p))


class ExponentPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float
    q: float

    @model_validator(mode="after")
    def _check_order(self) -> "ExponentPair":
        if math.isnan(self.p) or math.isnan(self.q):
            raise ValueError("p and q must be numbers")
        if not self.p > 0:
            raise ValueError("p must be positive")
        if math.isinf(self.p):
            raise ValueError("p must be finite because p < q <= inf")
        if not self.p < self.q:
            raise ValueError(f"p < q is required, got p={format_extended(self.p)} q={format_extended(self.q)}")
        return self

    @computed_field  # type: ignore[misc]
    @property
    def alpha(self) -> float:
        return reciprocal(self.p) - reciprocal(self.q)

    def label(self) -> str:
        return f"p={format_extended(self.p)},q={format_extended(self.q)}"


class RNormParam(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: float = Field(gt=0.0, le=1.0)


class FinitePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    coords: tuple[float, ...] = Field(min_length=1)

    @property
    def m(self) -> int:
        return len(self.coords)


class EntropyProfile(BaseModel):
    """Stand-in for e_1(T0) >= e_2(T0) >= ... of an abstract operator."""

    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...] = Field(min_length=1)
    norm: Optional[float] = None

    @model_validator(mode="before")
    @classmethod
    def _default_norm(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("norm") is None and data.get("values"):
            data = {**data, "norm": data["values"][0]}
        return data

    @model_validator(mode="after")
    def _check_profile(self) -> "EntropyProfile":
        for k, value in enumerate(self.values, start=1):
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"e_{k} must be a finite non-negative number")
        for k in range(len(self.values) - 1):
            if self.values[k + 1] > self.values[k]:
                raise ValueError(f"profile increases at k={k + 1}: e_{k + 2} > e_{k + 1}")
        if self.norm is None or not math.isclose(self.norm, self.values[0], rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("e_1 must equal the operator norm")
        return self

    def at(self, k: int) -> float:
        if k < 1:
            raise ValueError("entropy numbers are indexed from 1")
        return self.values[min(k, len(self.values)) - 1]

    def scaled(self, t: float) -> "EntropyProfile":
        return EntropyProfile(values=tuple(t * v for v in self.values))

    @classmethod
    def scalar_identity(cls, length: int) -> "EntropyProfile":
        # e_k of the identity on the real line is 2^(1-k)
        return cls(values=tuple(2.0 ** (1 - k) for k in range(1, length + 1)))


class HeterogeneousNorms(BaseModel):
    model_config = ConfigDict(frozen=True)

    norms: tuple[float, ...] = Field(min_length=1)

    @field_validator("norms")
    @classmethod
    def _non_increasing(cls, norms: tuple[float, ...]) -> tuple[float, ...]:
        for i, value in enumerate(norms, start=1):
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"norm of T_{i} must be a finite non-negative number")
        for i in range(len(norms) - 1):
            if norms[i + 1] > norms[i]:
                raise ValueError(f"norms must be non-increasing: ||T_{i + 2}|| > ||T_{i + 1}||")
        return norms


def allowed_weights(m: int) -> list[int]:
    """m * E(m): the powers of two below m, then m itself."""
    weights = []
    w = 1
    while w < m:
        weights.append(w)
        w *= 2
    weights.append(m)
    return weights


class EpsilonSequence(BaseModel):
    """A point of E(m)^m stored through its integer block budgets m * eps_i."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)
    weights: tuple[int, ...]

    @model_validator(mode="after")
    def _check_levels(self) -> "EpsilonSequence":
        if len(self.weights) != self.m:
            raise ValueError(f"expected {self.m} entries, got {len(self.weights)}")
        allowed = set(allowed_weights(self.m))
        for i, w in enumerate(self.weights, start=1):
            if w not in allowed:
                raise ValueError(f"eps_{i} = {Fraction(w, self.m)} is not in E({self.m})")
        return self

    @property
    def eps(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(w, self.m) for w in self.weights)

    @classmethod
    def from_fractions(cls, m: int, eps: list[Fraction]) -> "EpsilonSequence":
        weights = []
        for value in eps:
            scaled = Fraction(value) * m
            if scaled.denominator != 1:
                raise ValueError(f"eps value {value} is not in E({m})")
            weights.append(int(scaled))
        return cls(m=m, weights=tuple(weights))


class SetFamily(BaseModel):
    model_config = ConfigDict(frozen=True)

    ground_size: int = Field(ge=1)
    v: int = Field(ge=1)
    members: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_family(self) -> "SetFamily":
        if self.v > self.ground_size:
            raise ValueError("v must not exceed the ground set size")
        masks = []
        for member in self.members:
            if len(member) != self.v or len(set(member)) != self.v:
                raise ValueError(f"member {member} does not have exactly {self.v} elements")
            if list(member) != sorted(member):
                raise ValueError(f"member {member} is not sorted")
            if member[0] < 1 or member[-1] > self.ground_size:
                raise ValueError(f"member {member} leaves the ground set 1..{self.ground_size}")
            masks.append(sum(1 << (i - 1) for i in member))
        limit = self.v // 2
        for a in range(len(masks)):
            for b in range(a + 1, len(masks)):
                if (masks[a] & masks[b]).bit_count() > limit:
                    raise ValueError(f"members {a + 1} and {b + 1} share more than {limit} elements")
        return self

    @property
    def size(self) -> int:
        return len(self.members)


class BlockBall(BaseModel):
    """scale * unit ball of l_p^dim; a net or packing lives in a product of these."""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(ge=1)
    p: float = Field(gt=0.0)
    scale: float = Field(default=1.0, ge=0.0)


def _index_for_count(count: int) -> int:
    # smallest n with count <= 2^(n-1)
    return max(count - 1, 0).bit_length() + 1


class Net(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    centers: np.ndarray
    radius: float = Field(gt=0.0)
    metric_q: float = Field(gt=0.0)
    claimed_index: int = Field(ge=1)
    covered: tuple[BlockBall, ...] = Field(min_length=1)
    outer_p: float = math.inf

    @model_validator(mode="after")
    def _check_net(self) -> "Net":
        if self.centers.ndim != 2:
            raise ValueError("centers must be a 2-D array")
        if self.centers.shape[1] != sum(b.dim for b in self.covered):
            raise ValueError("center dimension does not match the covered set")
        if self.centers.shape[0] < 1:
            raise ValueError("a net needs at least one center")
        if self.centers.shape[0] > 2 ** (self.claimed_index - 1):
            raise ValueError(f"{self.count} centers exceed 2^(n-1) for claimed index {self.claimed_index}")
        return self

    @property
    def count(self) -> int:
        return int(self.centers.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.centers.shape[1])

    @property
    def points(self) -> list[FinitePoint]:
        return [FinitePoint(coords=tuple(float(x) for x in row)) for row in self.centers]

    @classmethod
    def index_for_count(cls, count: int) -> int:
        return _index_for_count(count)


class Packing(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: np.ndarray
    separation: float = Field(ge=0.0)
    metric_q: float = Field(gt=0.0)
    claimed_index: Optional[int] = None
    covered: tuple[BlockBall, ...] = Field(min_length=1)
    outer_p: float = math.inf
    metadata: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_packing(self) -> "Packing":
        if self.points.ndim != 2 or self.points.shape[0] < 1:
            raise ValueError("points must be a non-empty 2-D array")
        if self.claimed_index is not None and self.count < 2 ** (self.claimed_index - 1) + 1:
            raise ValueError(f"{self.count} points do not reach 2^(n-1)+1 for claimed index {self.claimed_index}")
        return self

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    @classmethod
    def index_for_count(cls, count: int) -> Optional[int]:
        # largest n with count >= 2^(n-1) + 1
        if count < 2:
            return None
        return (count - 1).bit_length()


class Budget(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_centers: int = Field(default=10_000_000, ge=1)
    packing_trials: int = Field(default=2000, ge=0)
    audit_samples: int = Field(default=10_000, ge=0)
    max_dimension: int = Field(default=16, ge=1)
    max_index: int = Field(default=14, ge=1)

    @classmethod
    def from_settings(cls, max_centers: int | None = None) -> "Budget":
        from .config import get_settings

        settings = get_settings()
        return cls(
            max_centers=max_centers or settings.MAX_CENTERS,
            packing_trials=settings.PACKING_TRIALS,
            audit_samples=settings.AUDIT_SAMPLES,
            max_dimension=settings.MAX_DIMENSION,
            max_index=settings.MAX_INDEX,
        )


class EntropyBracket(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(ge=1)
    n: int = Field(ge=1)
    pq: ExponentPair
    lo: float = Field(ge=0.0)
    hi: float = Field(ge=0.0)
    f_lo: float = Field(ge=0.0)
    r: float
    grid_ratio: float
    net_size: int
    packing_size: int
    truncated: bool = False
    net: Optional[Net] = None
    packing: Optional[Packing] = None

    @model_validator(mode="after")
    def _check_order(self) -> "EntropyBracket":
        if self.lo > self.hi * (1 + 1e-12):
            raise ValueError(f"bracket is inverted: lo={self.lo} > hi={self.hi}")
        return self

    @property
    def width_ratio(self) -> float:
        return self.hi / self.lo if self.lo > 0 else math.inf

    def contains(self, value: float, rel_tol: float = 1e-9) -> bool:
        return self.lo * (1 - rel_tol) <= value <= self.hi * (1 + rel_tol)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    m_values: tuple[int, ...] = Field(default=(1,), min_length=1)
    n_values: tuple[int, ...] = Field(default=(1,), min_length=1)
    p: float = 1.0
    q: float = math.inf
    r: float = Field(default=1.0, gt=0.0, le=1.0)
    seed: int = 0
    budget: Budget = Field(default_factory=Budget)
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    @model_validator(mode="after")
    def _check_exponents(self) -> "ExperimentConfig":
        ExponentPair(p=self.p, q=self.q)
        return self

    @property
    def pq(self) -> ExponentPair:
        return ExponentPair(p=self.p, q=self.q)


class VerificationRow(BaseModel):
    m: int
    n: int
    pq: str = ""
    bound: float
    lo: float
    hi: float
    hi_over_bound: float
    bound_over_lo: float
    regime: str
    elapsed_s: Optional[float] = None

    @model_validator(mode="after")
    def _check_row(self) -> "VerificationRow":
        if self.lo > self.hi * (1 + 1e-12):
            raise ValueError(f"row ({self.m},{self.n}) has lo > hi")
        return self


class CriterionResult(BaseModel):
    name: str
    passed: bool
    value: Optional[float] = None
    detail: str = ""


class VerificationReport(BaseModel):
    suite: Suite
    seed: int = 0
    params: dict[str, Any] = Field(default_factory=dict)
    rows: list[VerificationRow] = Field(default_factory=list)
    criteria: list[CriterionResult] = Field(default_factory=list)
    regression: dict[str, float] = Field(default_factory=dict)

    @field_validator("regression")
    @classmethod
    def _ratios_at_least_one(cls, values: dict[str, float]) -> dict[str, float]:
        for name, value in values.items():
            if name.endswith("_envelope") and value < 1:
                raise ValueError(f"envelope ratio {name} must be >= 1")
        return values

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def failing(self) -> list[CriterionResult]:
        return [c for c in self.criteria if not c.passed]


class AuditResult(BaseModel):
    samples: int
    claimed: float
    measured: float
    passed: bool
