"""Quasi-norms on finite sequence spaces and the entropy-number algebra."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from pydantic import ValidationError

from .. import schemas
from ..core.errors import InvalidInputError, ResourceError, invalid_from_validation
from ..schemas import reciprocal

DEFAULT_REL_TOL = 1e-12


def _r_param(r: float | schemas.RNormParam) -> float:
    if isinstance(r, schemas.RNormParam):
        return r.r
    try:
        return schemas.RNormParam(r=r).r
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


def _as_array(x: schemas.FinitePoint | Sequence[float] | np.ndarray) -> np.ndarray:
    coords = x.coords if isinstance(x, schemas.FinitePoint) else x
    arr = np.asarray(coords, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("coordinates must be finite")
    return arr


def lp_norms(points: np.ndarray, p: float) -> np.ndarray:
    """Row-wise l_p quasi-norms of a 2-D array (no finiteness check).

    Raises ResourceError when a norm of finite coordinates exceeds the
    double range, which happens for p close to 0.
    """
    a = np.abs(np.asarray(points, dtype=float))
    peak = a.max(axis=-1)
    if math.isinf(p):
        return peak
    safe = np.where(peak > 0, peak, 1.0)
    # factor out the peak; fall back to log space where that still overflows
    total = np.sum((a / safe[..., None]) ** p, axis=-1)
    with np.errstate(over="ignore", divide="ignore"):
        norms = safe * total ** (1.0 / p)
        overflow = np.isinf(norms) & np.isfinite(peak)
        if overflow.any():
            norms = np.where(overflow, np.exp(np.log(safe) + np.log(total) / p), norms)
    if np.isinf(norms[overflow]).any():
        raise ResourceError(f"l_{p:g} quasi-norm exceeds the double range")
    return np.where(peak > 0, norms, 0.0)


def quasi_norm(x: schemas.FinitePoint | Sequence[float] | np.ndarray, p: float) -> float:
    if not (p > 0):
        raise InvalidInputError("p must be positive")
    arr = _as_array(x)
    return float(lp_norms(arr.reshape(1, -1), p)[0])


def quasi_distance(points: np.ndarray, center: np.ndarray, q: float) -> np.ndarray:
    return lp_norms(np.asarray(points, dtype=float) - np.asarray(center, dtype=float), q)


def target_r(q: float) -> float:
    """l_q is an r-normed space with r = min(1, q)."""
    return 1.0 if q >= 1 else float(q)


def entropy_composition_bound(e_s_R: float, e_n_S: float) -> float:
    """e_{s+n-1}(R o S) <= e_s(R) e_n(S)."""
    if e_s_R < 0 or e_n_S < 0:
        raise InvalidInputError("entropy numbers are non-negative")
    return e_s_R * e_n_S


def entropy_sum_bound(e_s_T1: float, e_n_T2: float, r: float | schemas.RNormParam) -> float:
    """e_{s+n-1}(T1 + T2) <= (e_s(T1)^r + e_n(T2)^r)^(1/r) in an r-normed target."""
    r_value = _r_param(r)
    if e_s_T1 < 0 or e_n_T2 < 0:
        raise InvalidInputError("entropy numbers are non-negative")
    if e_s_T1 == 0:
        return e_n_T2
    if e_n_T2 == 0:
        return e_s_T1
    return (e_s_T1**r_value + e_n_T2**r_value) ** (1.0 / r_value)


def _le(lhs: float, rhs: float, rel_tol: float) -> bool:
    return lhs <= rhs + rel_tol * max(abs(lhs), abs(rhs))


def pietsch_relation_check(
    e_n: float,
    f_n: float,
    r: float | schemas.RNormParam,
    rel_tol: float = DEFAULT_REL_TOL,
) -> bool:
    """f_n <= 2^(1/r-1) e_n <= 2^(1/r) f_n."""
    r_value = _r_param(r)
    middle = 2.0 ** (1.0 / r_value - 1.0) * e_n
    return _le(f_n, middle, rel_tol) and _le(middle, 2.0 ** (1.0 / r_value) * f_n, rel_tol)


def pietsch_lower_from_packing(f_n: float, r: float | schemas.RNormParam) -> float:
    """Lower bound on e_n implied by a certified f_n lower bound."""
    return f_n * 2.0 ** (1.0 - 1.0 / _r_param(r))


__all__ = [
    "entropy_composition_bound",
    "entropy_sum_bound",
    "lp_norms",
    "pietsch_lower_from_packing",
    "pietsch_relation_check",
    "quasi_distance",
    "quasi_norm",
    "reciprocal",
    "target_r",
]
