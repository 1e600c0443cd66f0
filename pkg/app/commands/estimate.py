from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import click

from .. import schemas
from ..core.errors import ResourceError
from ..core.output import emit, render_table
from ..services import nets, witness_io
from .options import EXTENDED_REAL, INDEX_RANGE, CliOptions, experiment_config, pass_options

logger = logging.getLogger(__name__)

COLUMNS = [
    "m",
    "n",
    "p",
    "q",
    "lo",
    "hi",
    "f_lo",
    "r",
    "grid_ratio",
    "net_size",
    "packing_size",
    "truncated",
    "seed",
]


def _row(bracket: schemas.EntropyBracket, seed: int) -> dict:
    return {
        "m": bracket.m,
        "n": bracket.n,
        "p": bracket.pq.p,
        "q": bracket.pq.q,
        "lo": bracket.lo,
        "hi": bracket.hi,
        "f_lo": bracket.f_lo,
        "r": bracket.r,
        "grid_ratio": bracket.grid_ratio,
        "net_size": bracket.net_size,
        "packing_size": bracket.packing_size,
        "truncated": bracket.truncated,
        "seed": seed,
    }


def _dump_witnesses(bracket: schemas.EntropyBracket, directory: Path) -> None:
    stem = f"m{bracket.m}_n{bracket.n}"
    if bracket.net is not None:
        witness_io.write_text(directory / f"net_{stem}.txt", witness_io.dumps_net(bracket.net))
    if bracket.packing is not None:
        witness_io.write_text(directory / f"packing_{stem}.txt", witness_io.dumps_packing(bracket.packing))


@click.command("estimate")
@click.option("--m", "m_values", type=INDEX_RANGE, required=True)
@click.option("--n", "n_values", type=INDEX_RANGE, required=True)
@click.option("--p", type=EXTENDED_REAL, required=True)
@click.option("--q", type=EXTENDED_REAL, required=True)
@click.option("--witness-dir", type=click.Path(file_okay=False), default=None, help="dump nets and packings here")
@pass_options
def command(
    options: CliOptions,
    m_values: tuple[int, ...],
    n_values: tuple[int, ...],
    p: float,
    q: float,
    witness_dir: Optional[str],
) -> None:
    """Certified brackets [lo, hi] for e_n(id: l_p^m -> l_q^m)."""
    config = experiment_config("estimate", options, m_values=m_values, n_values=n_values, p=p, q=q)
    rows = []
    keep = witness_dir is not None
    try:
        for m in config.m_values:
            for n in config.n_values:
                bracket = nets.entropy_bracket(m, n, config.pq, budget=config.budget, seed=config.seed, keep_witnesses=keep)
                rows.append(_row(bracket, config.seed))
                if keep:
                    _dump_witnesses(bracket, Path(witness_dir))
    except ResourceError as exc:
        if isinstance(exc.partial, schemas.EntropyBracket):
            rows.append(_row(exc.partial, config.seed))
        logger.warning("estimate stopped early: %s", exc.detail)
        emit(render_table(config.format, "estimate", COLUMNS, rows, {"seed": config.seed}), config.out)
        raise
    emit(render_table(config.format, "estimate", COLUMNS, rows, {"seed": config.seed}), config.out)
