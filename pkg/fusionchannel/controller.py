# -*- coding: utf-8 -*-
"""
fusionchannel/controller.py
Date: 19/10/2026
"""
import logging
from typing import Iterable, Optional

import numpy as np

from dependencies import BASIS_LABELS, SETTINGS, CustomValidations
from quantumcore.controller import KETS
from quantumcore.schema import TwoQubitState

from .middleware import check_basis_map, check_f_value
from .schema import (
    BASIS_MAPS,
    CHI_LABELS,
    DephasingFunction,
    KrausSet,
    PhaseDampParams,
    ProcessFidelity,
    ProcessMatrix,
    TotalProcessPoint,
)

_log = logging.getLogger(__name__)

# Fusion operator set in the HH, HV, VH, VV basis.
E0 = np.diag([1, 0, 0, 1]).astype(complex)
E_ZZ = np.diag([1, 0, 0, -1]).astype(complex)
E_XY = np.diag([0, 1, -1, 0]).astype(complex)
E_XX = np.diag([0, 1, 1, 0]).astype(complex)

PROCESS_OPERATORS = dict(zip(CHI_LABELS, (E0, E_ZZ, E_XY, E_XX)))

# Two-photon basis including both photons in one output mode.
FUSION_BASIS = ("HH", "HV", "VH", "VV", "(HV)0", "0(HV)")


def fusion_kraus_set() -> KrausSet:
    """
    Returns the fusion gate {E0, E1_leak} on the six-dimensional two-photon basis
    FUSION_BASIS.

    E1_leak sends |HV> to both photons in mode 2' and |VH> to both photons in
    mode 1', with the phases picked up at the polarizing beam splitter.
    """
    success = np.zeros((6, 6), dtype=complex)
    success[:4, :4] = E0
    leak = np.zeros((6, 6), dtype=complex)
    leak[5, 1] = -1j
    leak[4, 2] = 1j
    return KrausSet(operators=[success, leak], labels=["E0", "E1_leak"])


def process_operator_set() -> KrausSet:
    """
    Returns the orthogonal operator set (E0, Ezz, Exy, Exx).
    """
    return KrausSet(
        operators=list(PROCESS_OPERATORS.values()),
        labels=["E0", "Ezz", "Exy", "Exx"],
    )


def phase_damping_kraus_set(f_value: float) -> KrausSet:
    """
    Returns {K0, K1, K2, K3} for two-qubit phase damping with dephasing value f.
    """
    check_f_value(f_value)
    params = PhaseDampParams.from_f(f_value)
    alpha, beta = params.alpha, params.beta
    identity = np.eye(2, dtype=complex)
    sigma_z = np.diag([1, -1]).astype(complex)
    return KrausSet(
        operators=[
            alpha**2 * np.kron(identity, identity),
            alpha * beta * np.kron(identity, sigma_z),
            alpha * beta * np.kron(sigma_z, identity),
            beta**2 * np.kron(sigma_z, sigma_z),
        ],
        labels=["K0", "K1", "K2", "K3"],
    )


def leak_probability(rho_in: TwoQubitState) -> float:
    """
    Probability that both photons leave through the same output mode.
    """
    return float(np.real(rho_in.rho[1, 1] + rho_in.rho[2, 2]))


def ideal_fusion(rho_in: TwoQubitState) -> tuple[TwoQubitState, float]:
    """
    Applies the parity check E0 and returns the unnormalized output together
    with the success probability Tr(E0 rho E0^dagger).
    """
    if not rho_in.trace_normalized:
        CustomValidations.raize_custom_error(
            error_type="unnormalized",
            loc="rho_in",
            msg="unnormalized state",
            inp=rho_in.trace,
            ctx={"trace_normalized": True},
        )
    output = E0 @ rho_in.rho @ E0.conj().T
    rho_out = TwoQubitState(rho=output, trace_normalized=False)
    return rho_out, rho_out.trace


def experimental_fusion(
    rho_in: TwoQubitState, chi: ProcessMatrix
) -> tuple[TwoQubitState, float]:
    """
    Applies sum_mn chi_mn E_m rho E_n^dagger; with no off-diagonal block this is
    the diagonal model sum_n chi_nn E_n rho E_n^dagger.
    """
    operators = list(PROCESS_OPERATORS.values())
    if chi.chi_offdiag is None:
        output = sum(
            weight * op @ rho_in.rho @ op.conj().T
            for weight, op in zip(chi.diagonal(), operators)
        )
    else:
        matrix = chi.full()
        output = sum(
            matrix[row, col] * operators[row] @ rho_in.rho @ operators[col].conj().T
            for row in range(4)
            for col in range(4)
        )
    rho_out = TwoQubitState(rho=output, trace_normalized=False)
    return rho_out, rho_out.trace


def phase_damp_two_qubit(rho: TwoQubitState, f_value: float) -> TwoQubitState:
    """
    Dephases both qubits with the same f. Populations are untouched, the
    |HH><VV| coherence scales by f^2 and single-flip coherences by f.
    """
    kraus = phase_damping_kraus_set(f_value)
    return TwoQubitState(
        rho=kraus.apply(rho.rho), trace_normalized=rho.trace_normalized
    )


def compose_total_chi(chi_f: ProcessMatrix, f_value: float) -> ProcessMatrix:
    """
    Process matrix of the fusion followed by phase damping.

    Damping mixes (00, zz) and (xy, xx) pairwise; pair sums are preserved.
    """
    check_f_value(f_value)
    chi_00, chi_zz, chi_xy, chi_xx = chi_f.diagonal()
    f_sq = f_value**2
    even, even_diff = chi_00 + chi_zz, chi_00 - chi_zz
    odd, odd_diff = chi_xx + chi_xy, chi_xx - chi_xy
    return ProcessMatrix(
        chi_00=0.5 * even + 0.5 * f_sq * even_diff,
        chi_zz=0.5 * even - 0.5 * f_sq * even_diff,
        chi_xy=0.5 * odd - 0.5 * f_sq * odd_diff,
        chi_xx=0.5 * odd + 0.5 * f_sq * odd_diff,
    )


def basis_fidelity_model(chi: ProcessMatrix, which: str) -> float:
    """
    Basis fidelity read off the chi diagonals:
    Z->Z = chi_00 + chi_zz, X->X = chi_00 + chi_xx, X->Y = chi_00 + chi_xy.
    """
    check_basis_map(which)
    partner = {"ZtoZ": chi.chi_zz, "XtoX": chi.chi_xx, "XtoY": chi.chi_xy}[which]
    return float(chi.chi_00 + partner)


def basis_fidelity_from_channel(chi: ProcessMatrix, which: str) -> float:
    """
    Basis fidelity computed by sending each input product state through the
    channel and summing the weight on its correct output states, halved.
    """
    check_basis_map(which)
    basis_map = BASIS_MAPS[which]
    total = 0.0
    for (first, second), correct in basis_map["correct"].items():
        ket = np.kron(KETS[first], KETS[second])
        rho_in = TwoQubitState(rho=np.outer(ket, ket.conj()))
        rho_out, _ = experimental_fusion(rho_in, chi)
        for out_first, out_second in correct:
            out_ket = np.kron(KETS[out_first], KETS[out_second])
            total += float(np.real(np.vdot(out_ket, rho_out.rho @ out_ket)))
    return 0.5 * total


def process_fidelity_from_basis(fzz: float, fxx: float, fxy: float) -> ProcessFidelity:
    """
    Process fidelity 1/2 (FZZ + FXX + FXY - 1).

    Values outside [0, 1] are clamped and flagged as not valid.
    """
    for loc, value in (("FZZ", fzz), ("FXX", fxx), ("FXY", fxy)):
        CustomValidations.validate_probability(value, loc)
    raw = 0.5 * (fzz + fxx + fxy - 1.0)
    value = min(max(raw, 0.0), 1.0)
    valid = value == raw
    if not valid:
        _log.warning(
            "Process fidelity %.6f outside [0, 1], reporting %.6f", raw, value
        )
    return ProcessFidelity(value=value, raw=raw, valid=valid)


def total_process_curve(
    chi_f: ProcessMatrix,
    delays_ps: Iterable[float],
    dephasing: Optional[DephasingFunction] = None,
) -> list[TotalProcessPoint]:
    """
    Evaluates the damped process matrix, its process fidelity and the
    entanglement-capability bound max{0, 2 F_P - 1} at every delay.
    """
    dephasing = dephasing or DephasingFunction(sigma_t_ps=SETTINGS.SIGMA_T_PS)
    points = []
    for delta_tau in delays_ps:
        f_value = dephasing.value(delta_tau)
        chi_t = compose_total_chi(chi_f, f_value)
        points.append(
            TotalProcessPoint(
                delta_tau_ps=delta_tau,
                f_value=f_value,
                chi_00=chi_t.chi_00,
                chi_zz=chi_t.chi_zz,
                chi_xy=chi_t.chi_xy,
                chi_xx=chi_t.chi_xx,
                process_fidelity=chi_t.chi_00,
                capability_bound=max(0.0, 2.0 * chi_t.chi_00 - 1.0),
            )
        )
    _log.debug("Evaluated total process curve at %d delays", len(points))
    return points


def polarimeter_projector(first: str, second: str) -> np.ndarray:
    """
    Two-qubit rank-1 projector |first second><first second| from count labels.
    """
    ket = np.kron(KETS[first], KETS[second])
    return np.outer(ket, ket.conj())


def channel_outcome_probabilities(chi: ProcessMatrix, which: str) -> dict:
    """
    Exact outcome weights Tr(P_out E(rho_in)) for every (input pair, output pair)
    of a basis map. Weights are unnormalized: each input transmits with
    probability below one.
    """
    check_basis_map(which)
    basis_map = BASIS_MAPS[which]
    proj_labels = BASIS_LABELS[basis_map["proj"]]
    table = {}
    for prep in basis_map["correct"]:
        ket = np.kron(KETS[prep[0]], KETS[prep[1]])
        rho_out, _ = experimental_fusion(
            TwoQubitState(rho=np.outer(ket, ket.conj())), chi
        )
        for out_first in proj_labels:
            for out_second in proj_labels:
                projector = polarimeter_projector(out_first, out_second)
                weight = float(np.real(np.trace(projector @ rho_out.rho)))
                table[(prep, (out_first, out_second))] = max(weight, 0.0)
    return table
