from __future__ import annotations

from typing import Optional

import click

from .. import schemas
from ..core.audit import last_values, record_run
from ..core.errors import InvalidInputError, VerificationFailure
from ..core.output import emit, render_json, render_table
from ..deps import SessionLocal, initialize_database
from ..models import OutputFormat, Suite
from ..services import verification
from .options import EXTENDED_REAL, INDEX_RANGE, CliOptions, exponent_pair, pass_options

ROW_COLUMNS = ["m", "n", "pq", "bound", "lo", "hi", "hi_over_bound", "bound_over_lo", "regime", "elapsed_s", "seed"]
CRITERION_COLUMNS = ["name", "passed", "value", "detail", "seed"]


def _render(report: schemas.VerificationReport, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.JSON:
        return render_json("verify", report.model_dump(mode="python"))
    columns, records = (ROW_COLUMNS, report.rows) if report.rows else (CRITERION_COLUMNS, report.criteria)
    return render_table(fmt, "verify", columns, [{**record.model_dump(), "seed": report.seed} for record in records])


@click.command("verify")
@click.option("--suite", type=click.Choice([s.value for s in Suite]), required=True)
@click.option("--m", "m_values", type=INDEX_RANGE, default=None)
@click.option("--n", "n_values", type=INDEX_RANGE, default=None)
@click.option("--p", type=EXTENDED_REAL, default=None)
@click.option("--q", type=EXTENDED_REAL, default=None)
@click.option("--max-m", type=int, default=None, help="largest m (binom, thm32, robustness) or ground set (codes)")
@click.option("--record", is_flag=True, help="store the run and its regression values")
@click.option("--check-regression", is_flag=True, help="fail if an envelope grew since the last recorded run")
@click.option("--timings", is_flag=True, help="add wall times to the rows")
@pass_options
def command(
    options: CliOptions,
    suite: str,
    m_values: Optional[tuple[int, ...]],
    n_values: Optional[tuple[int, ...]],
    p: Optional[float],
    q: Optional[float],
    max_m: Optional[int],
    record: bool,
    check_regression: bool,
    timings: bool,
) -> None:
    """Run an acceptance suite; exit 1 when any criterion fails."""
    if (p is None) != (q is None):
        raise InvalidInputError("--p and --q must be given together")
    pq = exponent_pair(p, q) if p is not None and q is not None else None
    chosen = Suite(suite)
    report = verification.run_suite(
        chosen,
        m_values=m_values,
        n_values=n_values,
        pq=pq,
        max_m=max_m,
        seed=options.seed,
        budget=options.resource_budget(),
        timings=timings,
    )

    if record or check_regression:
        initialize_database()
        with SessionLocal() as db:
            if check_regression:
                previous = last_values(db, suite=chosen.value, params=report.params)
                report.criteria.extend(verification.regression_criteria(report.regression, previous))
            if record:
                record_run(
                    db,
                    suite=chosen.value,
                    params=report.params,
                    seed=report.seed,
                    passed=report.passed,
                    values=report.regression,
                )
                db.commit()

    emit(_render(report, options.output_format), options.out)
    for criterion in report.criteria:
        status = "PASS" if criterion.passed else "FAIL"
        click.echo(f"{status} {criterion.name}", err=True)
    if not report.passed:
        failing = "; ".join(f"{c.name}: {c.detail}" if c.detail else c.name for c in report.failing())
        raise VerificationFailure(f"suite {chosen.value} failed: {failing}")
