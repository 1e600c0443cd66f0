from __future__ import annotations

from typing import Optional

import click
from pydantic import ValidationError

from .. import schemas
from ..core.errors import DomainError, InvalidInputError, invalid_from_validation
from ..core.output import emit, render_table
from ..models import LogForm, Theorem
from ..services import bounds as evaluators
from .options import EXTENDED_REAL, INDEX_RANGE, CliOptions, experiment_config, parse_reals, pass_options

COLUMNS = ["theorem", "m", "n", "p", "q", "value", "regime"]
PRESETS = {"scalar-identity": schemas.EntropyProfile.scalar_identity}


def _profiles(inline: tuple[str, ...], preset: Optional[str], length: int) -> list[schemas.EntropyProfile]:
    profiles = []
    try:
        for text in inline:
            profiles.append(schemas.EntropyProfile(values=parse_reals(text, "profile")))
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc
    if preset is not None:
        profiles.append(PRESETS[preset](length))
    return profiles


def _evaluate(
    theorem: Theorem,
    m: int,
    n: int,
    pq: schemas.ExponentPair,
    profiles: list[schemas.EntropyProfile],
    norms: Optional[tuple[float, ...]],
    a: Optional[float],
    log_form: LogForm,
) -> tuple[float, str]:
    if theorem == Theorem.SCHUETT:
        return evaluators.schuett_A(m, n, pq), evaluators.schuett_regime(m, n).value
    if theorem in (Theorem.THM32, Theorem.THM33_B, Theorem.THM33_D) and not profiles:
        raise InvalidInputError(f"theorem {theorem.value} needs --profile or --profile-preset")
    if theorem == Theorem.THM32:
        profile = profiles[0]
        value = evaluators.thm32_A(n, m, profile, pq, log_form)
        return value, evaluators.thm32_branch(n, m, profile, pq, log_form).value
    if theorem == Theorem.THM33_A:
        if norms is None:
            raise InvalidInputError("theorem 3.3A needs --norms")
        return evaluators.thm33_A(n, m, norms, pq), ""
    if theorem == Theorem.THM33_B:
        return evaluators.thm33_B(n, profiles, pq), ""
    if a is None:
        raise InvalidInputError("theorem 3.3D needs --a")
    return evaluators.thm33_D(a, n, m, profiles[0], pq), ""


@click.command("bounds")
@click.option("--thm", "theorem", type=click.Choice([t.value for t in Theorem]), required=True)
@click.option("--m", "m_values", type=INDEX_RANGE, required=True, help="m, as N, a..b or a,b,c")
@click.option("--n", "n_values", type=INDEX_RANGE, required=True)
@click.option("--p", type=EXTENDED_REAL, required=True)
@click.option("--q", type=EXTENDED_REAL, required=True)
@click.option("--profile", "inline_profiles", multiple=True, help="e1,e2,... (repeat for 3.3B)")
@click.option("--profile-preset", type=click.Choice(sorted(PRESETS)), default=None)
@click.option("--norms", default=None, help="||T_1||,||T_2||,... for 3.3A")
@click.option("--a", "a_value", type=float, default=None, help="lower end of the k-range for 3.3D")
@click.option("--log-form", type=click.Choice([f.value.lower() for f in LogForm]), default="shifted")
@click.option("--skip-invalid", is_flag=True, help="drop grid points outside the theorem's hypotheses")
@pass_options
def command(
    options: CliOptions,
    theorem: str,
    m_values: tuple[int, ...],
    n_values: tuple[int, ...],
    p: float,
    q: float,
    inline_profiles: tuple[str, ...],
    profile_preset: Optional[str],
    norms: Optional[str],
    a_value: Optional[float],
    log_form: str,
    skip_invalid: bool,
) -> None:
    """Tabulate a bound function over an (m, n) grid."""
    config = experiment_config("bounds", options, m_values=m_values, n_values=n_values, p=p, q=q)
    chosen = Theorem(theorem)
    profiles = _profiles(inline_profiles, profile_preset, max(config.n_values))
    norm_values = parse_reals(norms, "norms") if norms else None
    rows = []
    for m in config.m_values:
        for n in config.n_values:
            try:
                value, regime = _evaluate(chosen, m, n, config.pq, profiles, norm_values, a_value, LogForm(log_form.upper()))
            except DomainError:
                if skip_invalid:
                    continue
                raise
            rows.append({"theorem": chosen.value, "m": m, "n": n, "p": p, "q": q, "value": value, "regime": regime})
    emit(render_table(config.format, "bounds", COLUMNS, rows), config.out)
