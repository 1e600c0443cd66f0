# File: main.py
import sys
from typing import Optional

import click

from app.commands import bounds, codes, estimate, gamma, verify
from app.commands.options import CliOptions
from app.config import get_settings
from app.core.errors import EntropyException
from app.core.log import configure_logging
from app.models import OutputFormat

settings = get_settings()


class EntropyGroup(click.Group):
    """Maps service errors to exit codes; stdout keeps only command output."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except EntropyException as exc:
            click.echo(f"error: {exc.detail}", err=True)
            ctx.exit(exc.exit_code)


@click.group(cls=EntropyGroup, name=settings.PROJECT_NAME)
@click.option("--format", "output_format", type=click.Choice([f.value for f in OutputFormat]), default=OutputFormat.CSV.value)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the table here instead of stdout")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=None, help="maximum number of net centers")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default from ENTROPY_LOG_LEVEL)")
@click.pass_context
def cli(
    ctx: click.Context,
    output_format: str,
    out: Optional[str],
    seed: int,
    budget: Optional[int],
    log_level: Optional[str],
) -> None:
    """Entropy numbers of diagonal operators: bounds, certified brackets and checks."""
    configure_logging(log_level)
    ctx.obj = CliOptions(output_format=OutputFormat(output_format), out=out, seed=seed, budget=budget)


cli.add_command(bounds.command)
cli.add_command(estimate.command)
cli.add_command(verify.command)
cli.add_command(gamma.command)
cli.add_command(codes.command)


if __name__ == "__main__":
    sys.exit(cli())
