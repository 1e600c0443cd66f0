# File: app/core/errors.py
from __future__ import annotations

from typing import Any

from pydantic import ValidationError


class EntropyException(Exception):
    """Base error carrying the process exit code, like an HTTP status."""

    exit_code: int = 1

    def __init__(self, detail: str, *, exit_code: int | None = None) -> None:
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class VerificationFailure(EntropyException):
    exit_code = 1


class InvalidInputError(EntropyException):
    exit_code = 2


class DomainError(EntropyException):
    """A theorem hypothesis does not hold; detail names the inequality."""

    exit_code = 3


class ResourceError(EntropyException):
    exit_code = 4

    def __init__(self, detail: str, *, partial: Any = None) -> None:
        super().__init__(detail)
        self.partial = partial


def invalid_from_validation(exc: ValidationError) -> InvalidInputError:
    messages = "; ".join(err["msg"] for err in exc.errors())
    return InvalidInputError(messages or str(exc))
