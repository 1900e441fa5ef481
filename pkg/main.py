# -*- coding: utf-8 -*-
"""
main.py
Date: 19/10/2026
"""
import logging
import sys

import click
from pydantic import ValidationError

from dependencies import SETTINGS, FusionKitError, dump_json, load_json
from fusionchannel.route import fusionChannelRoutes
from interference.route import interferenceRoutes
from pipeline.route import pipelineRoutes
from sourcemodel.route import sourceModelRoutes
from tomography.route import tomographyRoutes

LOG_FORMAT = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"


def configure_logging(level: str):
    """
    Sends every log record to stderr at the given level.
    """
    logging.basicConfig(
        level=level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True
    )


class FusionKitGroup(click.Group):
    """
    Command group that reports domain errors as JSON on stderr with exit code 1.
    """

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except FusionKitError as error:
            detail = error.detail
        except ValidationError as error:
            detail = load_json(error.json(include_url=False))
        click.echo(dump_json({"detail": detail}).decode("utf-8"), err=True)
        ctx.exit(1)
        return None


@click.group(cls=FusionKitGroup, help=f"{SETTINGS.APP_NAME}: photonic fusion simulation and analysis.")
@click.option("--seed", type=int, help="Seed for every random draw.")
@click.option("--out", type=click.Path(dir_okay=False), help="Output file, stdout when absent.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Output format.")
@click.option("--config", type=click.Path(dir_okay=False), help="JSON config file.")
@click.option("--log-level", default=SETTINGS.LOG_LEVEL, show_default=True, help="Logging level.")
@click.pass_context
def cli(ctx, seed, out, fmt, config, log_level):
    """
    Stores the global flags for the commands.
    """
    configure_logging(log_level)
    ctx.obj = {"seed": seed, "out": out, "format": fmt, "config": config}


for routes in (
    interferenceRoutes,
    fusionChannelRoutes,
    sourceModelRoutes,
    tomographyRoutes,
    pipelineRoutes,
):
    for command in routes.commands.values():
        cli.add_command(command)


def main():
    """
    The `main` function is the entry point of the program.
    """
    cli(prog_name="fusionkit")


if __name__ == "__main__":
    main()
