from __future__ import annotations

import logging

from sqlalchemy import select
from sqlalchemy.orm import Session

from .. import models

logger = logging.getLogger(__name__)


def record_run(
    db: Session,
    *,
    suite: str,
    params: dict,
    seed: int,
    passed: bool,
    values: dict[str, float] | None = None,
) -> models.VerificationRun:
    run = models.VerificationRun(suite=suite, params=params, seed=seed, passed=passed)
    for name, value in sorted((values or {}).items()):
        run.values.append(models.RegressionValue(name=name, value=float(value)))
    db.add(run)
    logger.info("recorded %s run passed=%s values=%d", suite, passed, len(run.values))
    return run


def last_values(db: Session, *, suite: str, params: dict) -> dict[str, float]:
    """Regression values of the most recent recorded run with identical params."""
    runs = db.scalars(
        select(models.VerificationRun)
        .where(models.VerificationRun.suite == suite)
        .order_by(models.VerificationRun.id.desc())
    )
    for run in runs:
        if run.params == params:
            return {v.name: v.value for v in run.values}
    return {}
