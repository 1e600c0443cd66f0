from __future__ import annotations

from typing import Optional

import click

from ..core.errors import InvalidInputError
from ..core.output import emit, render_table
from ..services import combinat, witness_io
from .options import CliOptions, parse_reals, pass_options


@click.command("gamma")
@click.option("--m", "m", type=click.IntRange(min=1), default=None)
@click.option("--enumerate", "enumerate_", is_flag=True, help="list every member of Gamma(m)")
@click.option("--dominate", default=None, help="a1,a2,...: a probability vector to dominate")
@click.option("--stats", is_flag=True, help="#Gamma(m) and its ratio to 2^(5m/2)")
@click.option("--witness", type=click.Path(dir_okay=False), default=None, help="write Gamma(m) in line format")
@pass_options
def command(
    options: CliOptions,
    m: Optional[int],
    enumerate_: bool,
    dominate: Optional[str],
    stats: bool,
    witness: Optional[str],
) -> None:
    """The dominating family Gamma(m)."""
    if sum([enumerate_, dominate is not None, stats]) != 1:
        raise InvalidInputError("choose exactly one of --enumerate, --dominate, --stats")

    if dominate is not None:
        alpha = parse_reals(dominate, "probability vector")
        if m is not None and m != len(alpha):
            raise InvalidInputError(f"--m {m} does not match the {len(alpha)} entries of --dominate")
        sequence = combinat.gamma_dominate(alpha)
        rows = [{"m": sequence.m, "eps": " ".join(str(e) for e in sequence.eps)}]
        emit(render_table(options.output_format, "gamma", ["m", "eps"], rows), options.out)
        return

    if m is None:
        raise InvalidInputError("--m is required")
    if stats:
        count = combinat.gamma_count(m)
        ratio = count / 2.0 ** (2.5 * m)
        rows = [{"m": m, "count": count, "ratio": ratio, "within_bound": count * count <= 2 ** (5 * m)}]
        emit(render_table(options.output_format, "gamma", ["m", "count", "ratio", "within_bound"], rows), options.out)
        return

    family = combinat.gamma_enumerate(m)
    if witness:
        witness_io.write_text(witness, witness_io.dumps_gamma(m, family))
    rows = [{"m": m, "eps": " ".join(str(e) for e in seq.eps)} for seq in family]
    emit(render_table(options.output_format, "gamma", ["m", "eps"], rows), options.out)
