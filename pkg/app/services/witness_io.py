"""Line-oriented text formats for nets, packings, Gamma(m) and set families.

Every format is a whitespace-separated header line followed by one record per
line. Reals are written with 17 significant digits so that they read back
to the same double.
"""
from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from pydantic import ValidationError

from .. import schemas
from ..core.errors import InvalidInputError, invalid_from_validation


def _real(value: float) -> str:
    return "inf" if math.isinf(value) else "%.17g" % value


def _parse_real(token: str) -> float:
    try:
        return float(token)
    except ValueError as exc:
        raise InvalidInputError(f"not a number: {token!r}") from exc


def _parse_int(token: str) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise InvalidInputError(f"not an integer: {token!r}") from exc


def _lines(text: str) -> list[list[str]]:
    return [line.split() for line in text.splitlines() if line.strip()]


def _header(rows: list[list[str]], width: int, kind: str) -> list[str]:
    if not rows or len(rows[0]) != width:
        raise InvalidInputError(f"{kind} header must have {width} fields")
    return rows[0]


def _count(token: str, rows: list[list[str]], kind: str) -> int:
    count = _parse_int(token)
    if count != len(rows) - 1:
        raise InvalidInputError(f"{kind} header announces {count} records, found {len(rows) - 1}")
    return count


def dumps_points(points: np.ndarray, q: float, radius: float) -> str:
    lines = [f"{points.shape[1]} {_real(q)} {_real(radius)} {points.shape[0]}"]
    lines.extend(" ".join(_real(float(x)) for x in row) for row in points)
    return "\n".join(lines) + "\n"


def loads_points(text: str) -> tuple[np.ndarray, float, float]:
    rows = _lines(text)
    m_token, q_token, radius_token, count_token = _header(rows, 4, "point file")
    m = _parse_int(m_token)
    _count(count_token, rows, "point file")
    body = rows[1:]
    for i, row in enumerate(body, start=1):
        if len(row) != m:
            raise InvalidInputError(f"record {i} has {len(row)} coordinates, expected {m}")
    points = np.array([[_parse_real(t) for t in row] for row in body], dtype=float).reshape(-1, m)
    return points, _parse_real(q_token), _parse_real(radius_token)


def dumps_net(net: schemas.Net) -> str:
    return dumps_points(net.centers, net.metric_q, net.radius)


def loads_net(text: str, p: float) -> schemas.Net:
    """Read a net of B_{l_p^m}; the file does not carry p or the index."""
    centers, q, radius = loads_points(text)
    try:
        return schemas.Net(
            centers=centers,
            radius=radius,
            metric_q=q,
            claimed_index=schemas.Net.index_for_count(centers.shape[0]),
            covered=(schemas.BlockBall(dim=centers.shape[1], p=p),),
        )
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


def dumps_packing(packing: schemas.Packing) -> str:
    return dumps_points(packing.points, packing.metric_q, packing.separation)


def loads_packing(text: str, p: float) -> schemas.Packing:
    points, q, separation = loads_points(text)
    try:
        return schemas.Packing(
            points=points,
            separation=separation,
            metric_q=q,
            claimed_index=schemas.Packing.index_for_count(points.shape[0]),
            covered=(schemas.BlockBall(dim=points.shape[1], p=p),),
        )
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


def dumps_gamma(m: int, family: Iterable[schemas.EpsilonSequence]) -> str:
    records = [" ".join(str(e) for e in seq.eps) for seq in family]
    return "\n".join([f"{m} {len(records)}", *records]) + "\n"


def loads_gamma(text: str) -> tuple[int, list[schemas.EpsilonSequence]]:
    rows = _lines(text)
    m_token, count_token = _header(rows, 2, "Gamma file")
    m = _parse_int(m_token)
    _count(count_token, rows, "Gamma file")
    family = []
    for row in rows[1:]:
        try:
            family.append(schemas.EpsilonSequence.from_fractions(m, [Fraction(t) for t in row]))
        except (ValueError, ValidationError) as exc:
            raise InvalidInputError(f"bad Gamma record {' '.join(row)!r}: {exc}") from exc
    return m, family


def dumps_family(family: schemas.SetFamily) -> str:
    records = [" ".join(str(i) for i in member) for member in family.members]
    return "\n".join([f"{family.ground_size} {family.v} {family.size}", *records]) + "\n"


def loads_family(text: str) -> schemas.SetFamily:
    rows = _lines(text)
    g_token, v_token, count_token = _header(rows, 3, "family file")
    _count(count_token, rows, "family file")
    members: Sequence[tuple[int, ...]] = tuple(tuple(_parse_int(t) for t in row) for row in rows[1:])
    try:
        return schemas.SetFamily(ground_size=_parse_int(g_token), v=_parse_int(v_token), members=tuple(members))
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


def write_text(path: str | Path, text: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    return target
