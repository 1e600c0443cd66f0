from __future__ import annotations

from typing import Optional

import click

from ..core.output import emit, render_table
from ..models import OutputFormat
from ..services import combinat, witness_io
from .options import CliOptions, pass_options

COLUMNS = ["ground_size", "v", "size", "counting_lower_bound", "max_pairwise_intersection", "seed"]
# CSV only: one row per member after the stats row
MEMBER_COLUMN = "member"


@click.command("codes")
@click.option("--ground", type=click.IntRange(min=1), required=True, help="size of the ground set {1..g}")
@click.option("--v", type=click.IntRange(min=1), required=True, help="size of each member")
@click.option("--max-members", type=click.IntRange(min=1), default=None)
@click.option("--witness", type=click.Path(dir_okay=False), default=None, help="write the family in line format")
@pass_options
def command(options: CliOptions, ground: int, v: int, max_members: Optional[int], witness: Optional[str]) -> None:
    """Greedy family of v-subsets with pairwise intersections at most v/2."""
    family = combinat.separated_family(ground, v, seed=options.seed, max_members=max_members)
    if witness:
        witness_io.write_text(witness, witness_io.dumps_family(family))
    row = {
        "ground_size": ground,
        "v": v,
        "size": family.size,
        "counting_lower_bound": str(combinat.counting_lower_bound(ground, v)),
        "max_pairwise_intersection": combinat.max_pairwise_intersection(family),
        "seed": options.seed,
    }
    if options.output_format == OutputFormat.CSV:
        members = [
            {"ground_size": ground, "v": v, "seed": options.seed, MEMBER_COLUMN: " ".join(map(str, member))}
            for member in family.members
        ]
        emit(render_table(options.output_format, "codes", [*COLUMNS, MEMBER_COLUMN], [row, *members]), options.out)
        return
    extra = {"members": [list(member) for member in family.members], "seed": options.seed}
    emit(render_table(options.output_format, "codes", COLUMNS, [row], extra), options.out)
