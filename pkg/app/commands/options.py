"""Parameter types and the per-invocation context shared by the commands."""
from __future__ import annotations

import math
from typing import Any, Optional

import click
from pydantic import BaseModel, ConfigDict, ValidationError

from .. import schemas
from ..core.errors import InvalidInputError, invalid_from_validation
from ..models import OutputFormat


class ExtendedReal(click.ParamType):
    """A positive real or ``inf``."""

    name = "real|inf"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> float:
        if isinstance(value, float):
            return value
        text = str(value).strip().lower()
        if text in {"inf", "infinity", "+inf"}:
            return math.inf
        try:
            number = float(text)
        except ValueError:
            self.fail(f"{value!r} is not a real number or 'inf'", param, ctx)
        if not number > 0:
            self.fail(f"{value!r} must be positive", param, ctx)
        return number


class IndexRange(click.ParamType):
    """``a..b`` (inclusive), ``a,b,c`` or a single positive integer."""

    name = "range"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> tuple[int, ...]:
        if isinstance(value, tuple):
            return value
        text = str(value).strip()
        try:
            if ".." in text:
                start, stop = (int(part) for part in text.split("..", 1))
                values = tuple(range(start, stop + 1))
            else:
                values = tuple(int(part) for part in text.split(","))
        except ValueError:
            self.fail(f"{value!r} is not a range like 1..10 or 1,2,3", param, ctx)
        if not values:
            self.fail(f"range {value!r} is empty", param, ctx)
        if min(values) < 1:
            self.fail(f"range {value!r} must contain positive integers only", param, ctx)
        return tuple(sorted(set(values)))


def parse_reals(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise InvalidInputError(f"malformed {what} {text!r}: expected comma-separated reals") from exc


EXTENDED_REAL = ExtendedReal()
INDEX_RANGE = IndexRange()


class CliOptions(BaseModel):
    """Global flags, stored on the click context."""

    model_config = ConfigDict(frozen=True)

    output_format: OutputFormat = OutputFormat.CSV
    out: Optional[str] = None
    seed: int = 0
    budget: Optional[int] = None

    def resource_budget(self) -> schemas.Budget:
        return schemas.Budget.from_settings(max_centers=self.budget)


def exponent_pair(p: float, q: float) -> schemas.ExponentPair:
    try:
        return schemas.ExponentPair(p=p, q=q)
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


def experiment_config(command: str, options: CliOptions, **fields: Any) -> schemas.ExperimentConfig:
    try:
        return schemas.ExperimentConfig(
            command=command,
            seed=options.seed,
            budget=options.resource_budget(),
            out=options.out,
            format=options.output_format,
            **fields,
        )
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


pass_options = click.make_pass_decorator(CliOptions, ensure=True)
