# -*- coding: utf-8 -*-
"""
sourcemodel/route.py
Date: 19/10/2026
"""
import click

from pipeline.controller import emit, resolve_config

from . import controller
from .schema import SourceParams

sourceModelRoutes = click.Group("sourcemodel")


@sourceModelRoutes.command("higher-order", help="Visibility and fidelity limits from multi-pair emission.")
@click.option("--n-bar", type=float, help="Mean pairs per pulse.")
@click.option("--eta", type=float, help="Lumped detector efficiency.")
@click.option("--cutoff", type=int, help="Fock cutoff per mode.")
@click.option("--full-order", is_flag=True, default=None, help="Keep all orders up to the cutoff.")
@click.pass_obj
def higher_order(global_flags, **flags):
    """
    Emits {"n_bar", "eta", "gamma", "p0_limit", "fidelity_bound", ...}.
    """
    run_config = resolve_config("higher-order", flags, global_flags)
    params = run_config.params
    source = SourceParams(
        mean_pairs=params.get("n_bar", 0.037),
        **({"eta": params["eta"]} if params.get("eta") is not None else {}),
        **({"fock_cutoff": params["cutoff"]} if params.get("cutoff") is not None else {}),
        first_order=not params.get("full_order", False),
    )
    emit(run_config, payload=controller.higher_order_report(source).model_dump())
