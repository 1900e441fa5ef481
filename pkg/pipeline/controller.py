# -*- coding: utf-8 -*-
"""
pipeline/controller.py
Date: 19/10/2026
"""
import csv
import io
import logging
from pathlib import Path
from typing import Any, Optional

import click
import orjson

from dependencies import (
    SETTINGS,
    CustomValidations,
    dump_json,
    load_json,
    round_significant,
)
from fusionchannel.controller import compose_total_chi, experimental_fusion
from fusionchannel.schema import DephasingFunction, ProcessMatrix
from quantumcore.controller import product_state
from quantumcore.schema import TwoQubitState
from sourcemodel.controller import (
    coincidence_weights,
    higher_order_fidelity_bound,
    higher_order_visibility,
    post_selected_state,
)
from sourcemodel.schema import SourceParams
from tomography.controller import (
    channel_process_counts,
    monte_carlo_errors,
    process_reconstruction,
    reconstruct_state,
    simulate_counts,
)

from .schema import PipelineConfig, PipelineRow, RunConfig

_log = logging.getLogger(__name__)


def load_config_file(path: str) -> dict:
    """
    Reads a JSON config file; top-level keys seed, out and format apply to
    every command, a section named after the command holds its parameters.
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as error:
        CustomValidations.raize_custom_error(
            error_type="file_error",
            loc=str(path),
            msg=error.strerror or str(error),
            inp=str(path),
            ctx={"path": str(path)},
        )
    try:
        payload = load_json(raw)
    except orjson.JSONDecodeError as error:
        CustomValidations.raize_custom_error(
            error_type="malformed_config",
            loc=str(path),
            msg=str(error),
            inp=str(path),
            ctx={"path": str(path)},
        )
    if not isinstance(payload, dict):
        CustomValidations.raize_custom_error(
            error_type="malformed_config",
            loc=str(path),
            msg="Config file must hold a JSON object",
            inp=type(payload).__name__,
            ctx={"path": str(path)},
        )
    return payload


def resolve_config(
    command: str,
    flags: dict[str, Any],
    global_flags: Optional[dict[str, Any]] = None,
    default_format: str = "json",
) -> RunConfig:
    """
    Merges command-line flags over the config file over the defaults.
    Flags left at None do not override.
    """
    global_flags = global_flags or {}
    payload = (
        load_config_file(global_flags["config"]) if global_flags.get("config") else {}
    )
    params = dict(payload.get(command, {}))
    params.update({key: value for key, value in flags.items() if value is not None})

    def pick(name: str, fallback: Any) -> Any:
        if global_flags.get(name) is not None:
            return global_flags[name]
        return payload.get(name, fallback)

    return RunConfig(
        command=command,
        params=params,
        seed=pick("seed", SETTINGS.DEFAULT_SEED),
        out=pick("out", None),
        format=pick("format", default_format),
    )


def _csv_text(rows: list[dict]) -> str:
    columns = [
        key for key in rows[0] if any(row.get(key) is not None for row in rows)
    ]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(
            [
                round_significant(row[key]) if isinstance(row[key], float) else row[key]
                for key in columns
            ]
        )
    return buffer.getvalue()


def emit(run_config: RunConfig, payload: Optional[dict] = None, rows: Optional[list[dict]] = None):
    """
    Writes a report to --out or stdout: CSV rows when the format is csv and
    rows exist, otherwise JSON with the resolved config echoed.
    """
    if run_config.format == "csv" and rows:
        text = _csv_text(rows)
    else:
        report = {"config": run_config.echo()}
        report.update(payload or {})
        if rows is not None:
            report["rows"] = rows
        text = dump_json(report).decode("utf-8") + "\n"
    if run_config.out:
        Path(run_config.out).write_text(text, encoding="utf-8")
        _log.info("Wrote %s report to %s", run_config.command, run_config.out)
    else:
        click.echo(text, nl=False)


def fused_state(chi_t: ProcessMatrix, params: SourceParams) -> TwoQubitState:
    """
    Post-selected fused state: the |++> input sent through the damped process
    stands in for the single pairs of the brute-force higher-order state.
    """
    output, _ = experimental_fusion(product_state("P", "P").density(), chi_t)
    return post_selected_state(params, pair_state=output.normalized())


def run_pipeline(config: PipelineConfig) -> list[PipelineRow]:
    """
    Source model, fusion channel and tomography chained per pump power.
    """
    chi_f = ProcessMatrix.from_diagonal(
        [config.chi_diag.get(label, 0.0) for label in ("00", "zz", "xy", "xx")]
    )
    f_value = DephasingFunction(sigma_t_ps=config.sigma_t_ps).value(config.delta_tau_ps)
    chi_t = compose_total_chi(chi_f, f_value)
    rows = []
    for index, n_bar in enumerate(config.n_bar_values):
        seed = config.seed + index * 100003
        params = SourceParams(
            mean_pairs=n_bar,
            eta=config.eta,
            fock_cutoff=config.fock_cutoff,
            first_order=config.first_order,
        )
        table = simulate_counts(
            fused_state(chi_t, params), total_per_setting=config.counts_per_setting, seed=seed
        )
        state = reconstruct_state(table, n_mc=config.n_mc, seed=seed)
        process_table = channel_process_counts(chi_t, config.counts_per_setting, seed=seed)
        process = process_reconstruction(process_table)
        process_std, capability_std = 0.0, 0.0
        if config.n_mc:
            process_std = monte_carlo_errors(
                process_table, "process_fidelity", config.n_mc, seed
            ).std
            capability_std = monte_carlo_errors(
                process_table, "capability_bound", config.n_mc, seed
            ).std
        rows.append(
            PipelineRow(
                n_bar=n_bar,
                four_fold_rate_model=sum(coincidence_weights(params, "Z", "Z").values()),
                fidelity=state.fidelity,
                fidelity_std=state.fidelity_std,
                concurrence=state.concurrence,
                concurrence_std=state.concurrence_std,
                purity=state.purity,
                purity_std=state.purity_std,
                process_fidelity=process.process_fidelity.value,
                process_fidelity_std=process_std,
                capability_bound=process.capability_bound,
                capability_bound_std=capability_std,
                fidelity_bound=higher_order_fidelity_bound(params),
                p0_limit=higher_order_visibility(params),
            )
        )
        _log.info("Pipeline row n=%s F=%.4f", n_bar, state.fidelity)
    return rows
