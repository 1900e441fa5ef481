# -*- coding: utf-8 -*-
"""
tomography/route.py
Date: 19/10/2026
"""
import click

from pipeline.controller import emit, resolve_config

from . import controller

tomographyRoutes = click.Group("tomography")


@tomographyRoutes.command("tomo-state", help="Maximum-likelihood state from a count file.")
@click.argument("counts_file")
@click.option("--mc-samples", type=int, help="Poisson resamples for error bars, 0 to skip.")
@click.pass_obj
def tomo_state(global_flags, **flags):
    """
    Emits rho, fidelity, purity and concurrence with Monte Carlo errors.
    """
    run_config = resolve_config("tomo-state", flags, global_flags)
    params = run_config.params
    table = controller.ingest_counts(params["counts_file"])
    result = controller.reconstruct_state(
        table, n_mc=params.get("mc_samples", 0), seed=run_config.seed
    )
    emit(run_config, payload=result.to_json())


@tomographyRoutes.command("tomo-process", help="Diagonal process matrix from a count file.")
@click.argument("counts_file")
@click.option("--mc-samples", type=int, help="Poisson resamples for error bars, 0 to skip.")
@click.pass_obj
def tomo_process(global_flags, **flags):
    """
    Emits the chi diagonals, basis fidelities, F_P and the C_E bound.
    """
    run_config = resolve_config("tomo-process", flags, global_flags)
    params = run_config.params
    table = controller.ingest_counts(params["counts_file"])
    result = controller.process_reconstruction(table)
    n_mc = params.get("mc_samples", 0)
    if n_mc:
        result = result.model_copy(
            update={
                "errors": {
                    name: controller.monte_carlo_errors(
                        table, name, n_mc, run_config.seed
                    ).std
                    for name in ("FZZ", "FXX", "FXY", "process_fidelity", "capability_bound")
                }
            }
        )
    emit(run_config, payload=result.to_json())
