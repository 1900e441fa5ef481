# -*- coding: utf-8 -*-
"""
fusionchannel/route.py
Date: 19/10/2026
"""
import click

from dependencies import CustomValidations
from interference.schema import DelayGrid
from pipeline.controller import emit, load_config_file, resolve_config
from quantumcore.controller import (
    fidelity,
    make_bell_phi_plus,
    make_bell_state,
    maximally_mixed,
    product_state,
)
from quantumcore.schema import TwoQubitState

from . import controller
from .middleware import parse_chi
from .schema import DephasingFunction, ProcessMatrix

fusionChannelRoutes = click.Group("fusionchannel")


def _input_state(name: str) -> TwoQubitState:
    if name == "mixed":
        return maximally_mixed()
    if name in ("phi+", "phi-", "psi+", "psi-"):
        return make_bell_state(name).density()
    if len(name) == 2 and all(label in "HVPMRL" for label in name):
        return product_state(name[0], name[1]).density()
    CustomValidations.raize_custom_error(
        error_type="invalid",
        loc="input",
        msg="Input is a label pair such as PP, a Bell state name or mixed",
        inp=name,
        ctx={"input": "PP, HV, phi+, mixed, ..."},
    )


def _process_matrix(params: dict) -> ProcessMatrix:
    if params.get("chi_file"):
        payload = load_config_file(params["chi_file"])
        diagonal = payload.get("chi_diag", payload)
        return ProcessMatrix.from_diagonal(
            [diagonal.get(label, 0.0) for label in ("00", "zz", "xy", "xx")]
        )
    if params.get("chi"):
        return ProcessMatrix.from_diagonal(parse_chi(params["chi"]))
    return ProcessMatrix.ideal()


@fusionChannelRoutes.command("fuse", help="Send a two-qubit state through the fusion channel.")
@click.option("--input", "input_state", type=str, help="PP, HV, phi+, mixed, ...")
@click.option("--rho-file", type=str, help="JSON density matrix {re, im}.")
@click.option("--chi", type=str, help="chi_00,chi_zz,chi_xy,chi_xx")
@click.option("--chi-file", type=str, help="JSON chi report.")
@click.pass_obj
def fuse(global_flags, **flags):
    """
    Emits the post-selected output, its success probability and its fidelity with |phi+>.
    """
    run_config = resolve_config("fuse", flags, global_flags)
    params = run_config.params
    if params.get("rho_file"):
        rho_in = TwoQubitState.from_json(load_config_file(params["rho_file"]))
    else:
        rho_in = _input_state(params.get("input_state", "PP"))
    chi = _process_matrix(params)
    rho_out, probability = controller.experimental_fusion(rho_in, chi)
    payload = {
        "rho_out": rho_out.to_json(),
        "success_prob": probability,
        "leak_prob": controller.leak_probability(rho_in),
        "chi": chi.to_json(),
    }
    if probability > 0:
        payload["fidelity_phi_plus"] = fidelity(rho_out.normalized(), make_bell_phi_plus())
    emit(run_config, payload=payload)


@fusionChannelRoutes.command("chi-compose", help="Compose a fusion chi with phase damping.")
@click.option("--chi", type=str, help="chi_00,chi_zz,chi_xy,chi_xx")
@click.option("--chi-file", type=str, help="JSON chi report.")
@click.option("--f", "f_value", type=float, help="Dephasing value f in [0, 1].")
@click.option("--delta-tau", type=float, help="Delay in ps, used when --f is absent.")
@click.option("--sigma-t", type=float, help="Pulse duration in ps.")
@click.option("--delays", type=str, help="Delay grid start:stop:points for a curve.")
@click.pass_obj
def chi_compose(global_flags, **flags):
    """
    Emits the total chi, or the total-process curve when --delays is set.
    """
    run_config = resolve_config("chi-compose", flags, global_flags)
    params = run_config.params
    chi_f = _process_matrix(params)
    dephasing = DephasingFunction(
        **({"sigma_t_ps": params["sigma_t"]} if params.get("sigma_t") is not None else {})
    )
    if params.get("delays"):
        points = controller.total_process_curve(
            chi_f, DelayGrid.parse(params["delays"]).values().tolist(), dephasing
        )
        emit(
            run_config,
            payload={"chi_F": chi_f.to_json(dephasing)},
            rows=[point.model_dump() for point in points],
        )
        return
    f_value = params.get("f_value")
    if f_value is None:
        f_value = dephasing.value(params.get("delta_tau", 0.0))
    chi_t = controller.compose_total_chi(chi_f, f_value)
    payload = {
        "chi_F": chi_f.to_json(dephasing),
        "chi_T": chi_t.to_json(dephasing),
        "f_value": f_value,
        "process_fidelity": chi_t.chi_00,
        "capability_bound": max(0.0, 2 * chi_t.chi_00 - 1),
    }
    emit(run_config, payload=payload)
