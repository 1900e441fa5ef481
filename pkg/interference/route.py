# -*- coding: utf-8 -*-
"""
interference/route.py
Date: 19/10/2026
"""
import click

from pipeline.controller import emit, resolve_config

from . import controller
from .schema import DelayGrid

interferenceRoutes = click.Group("interference")


@interferenceRoutes.command("antidip", help="Antidip coincidence curve over a delay grid.")
@click.option("--sigma-t", type=float, help="Pulse duration in ps.")
@click.option("--delta-lambda", type=float, help="Wavelength mismatch in nm.")
@click.option("--lambda-center", type=float, help="Center wavelength in nm.")
@click.option("--grid", type=str, help="Delay grid start:stop:points in ps.")
@click.option("--n-av", type=float, help="Mean wing counts times eight.")
@click.option("--p0", type=float, help="Visibility parameter.")
@click.pass_obj
def antidip(global_flags, **flags):
    """
    Emits delta_tau_ps,p_coinc,expected_counts rows.
    """
    run_config = resolve_config("antidip", flags, global_flags, default_format="csv")
    params = run_config.params
    rows = controller.antidip_curve(
        DelayGrid.parse(params.get("grid", "-4:4:33")),
        sigma_t=params.get("sigma_t"),
        delta_lambda=params.get("delta_lambda", 0.0),
        center_lambda=params.get("lambda_center"),
        n_av=params.get("n_av", 401.0),
        p0=params.get("p0", 1.0),
    )
    emit(run_config, rows=[row.model_dump() for row in rows])


@interferenceRoutes.command("fit", help="Fit N_av and p0 to antidip counts.")
@click.argument("points_file", required=False)
@click.option("--sigma-t", type=float, help="Pulse duration in ps.")
@click.option("--n-av", type=float, help="Synthetic N_av.")
@click.option("--p0", type=float, help="Synthetic p0.")
@click.option("--grid", type=str, help="Synthetic delay grid start:stop:points in ps.")
@click.pass_obj
def fit(global_flags, **flags):
    """
    Emits {"N_av", "p0", "residual"}.
    """
    run_config = resolve_config("fit", flags, global_flags)
    params = run_config.params
    if params.get("points_file"):
        points = controller.read_antidip_points(params["points_file"])
    else:
        points = controller.synthetic_antidip_points(
            DelayGrid.parse(params.get("grid", "-4:4:31")),
            n_av=params.get("n_av", 401.0),
            p0=params.get("p0", 0.61),
            sigma_t=params.get("sigma_t"),
            seed=run_config.seed,
        )
    result = controller.fit_antidip(points, params.get("sigma_t"))
    emit(run_config, payload=result.to_json())
