# -*- coding: utf-8 -*-
"""
pipeline/route.py
Date: 19/10/2026
"""
import click

from fusionchannel.middleware import parse_chi

from . import controller
from .schema import PipelineConfig

pipelineRoutes = click.Group("pipeline")


@pipelineRoutes.command("pipeline", help="Source model, fusion and tomography over a power series.")
@click.option("--n-bar", "n_bar_values", type=float, multiple=True, help="Pairs per pulse, repeatable.")
@click.option("--eta", type=float, help="Lumped detector efficiency.")
@click.option("--chi", type=str, help="Fusion chi_00,chi_zz,chi_xy,chi_xx.")
@click.option("--delta-tau", "delta_tau_ps", type=float, help="Delay between photons in ps.")
@click.option("--counts", "counts_per_setting", type=int, help="Counts per setting.")
@click.option("--mc-samples", "n_mc", type=int, help="Poisson resamples, 0 to skip.")
@click.pass_obj
def pipeline(global_flags, **flags):
    """
    Emits one row per pump power.
    """
    flags["n_bar_values"] = list(flags["n_bar_values"]) or None
    if flags.get("chi"):
        flags["chi_diag"] = dict(zip(("00", "zz", "xy", "xx"), parse_chi(flags["chi"])))
    flags.pop("chi", None)
    run_config = controller.resolve_config("pipeline", flags, global_flags)
    config = PipelineConfig(**{**run_config.params, "seed": run_config.seed})
    rows = controller.run_pipeline(config)
    controller.emit(run_config, rows=[row.model_dump() for row in rows])
