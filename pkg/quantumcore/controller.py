# -*- coding: utf-8 -*-
"""
quantumcore/controller.py
Date: 19/10/2026
"""
import math
from typing import Union

import numpy as np

from dependencies import BASIS_LABELS, SETTINGS, WAVEPLATES, CustomValidations

from .schema import PureState, TwoQubitState, Waveplate

SQRT_HALF = 1 / math.sqrt(2)

# Single-qubit kets keyed by count label.
KETS = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "P": np.array([SQRT_HALF, SQRT_HALF], dtype=complex),
    "M": np.array([SQRT_HALF, -SQRT_HALF], dtype=complex),
    "R": np.array([SQRT_HALF, 1j * SQRT_HALF], dtype=complex),
    "L": np.array([SQRT_HALF, -1j * SQRT_HALF], dtype=complex),
}

# Polarimeter bases: rank-1 projector pairs summing to the identity.
POLARIMETER = {
    basis: tuple(np.outer(KETS[label], KETS[label].conj()) for label in labels)
    for basis, labels in BASIS_LABELS.items()
}

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

SPIN_FLIP = np.kron(PAULI["Y"], PAULI["Y"])


def matrices_equal(left: np.ndarray, right: np.ndarray, atol: float = None) -> bool:
    """
    Elementwise equality of two complex matrices up to an absolute tolerance.
    """
    atol = SETTINGS.MATRIX_TOLERANCE if atol is None else atol
    left, right = np.asarray(left), np.asarray(right)
    return left.shape == right.shape and bool(
        np.allclose(left, right, atol=atol, rtol=0.0)
    )


def product_ket(first: str, second: str) -> np.ndarray:
    """
    Returns the product ket |first>|second> from two count labels.
    """
    return np.kron(KETS[first], KETS[second])


def product_state(first: str, second: str) -> PureState:
    """
    Returns |first>|second> as a PureState.
    """
    return PureState(amplitudes=product_ket(first, second))


def make_bell_phi_plus() -> PureState:
    """
    Returns (|HH> + |VV>)/sqrt(2).
    """
    return PureState(amplitudes=[SQRT_HALF, 0, 0, SQRT_HALF])


def make_bell_state(name: str) -> PureState:
    """
    Returns one of the four Bell states: phi+, phi-, psi+, psi-.
    """
    amplitudes = {
        "phi+": [SQRT_HALF, 0, 0, SQRT_HALF],
        "phi-": [SQRT_HALF, 0, 0, -SQRT_HALF],
        "psi+": [0, SQRT_HALF, SQRT_HALF, 0],
        "psi-": [0, SQRT_HALF, -SQRT_HALF, 0],
    }
    if name not in amplitudes:
        CustomValidations.raize_custom_error(
            error_type="invalid",
            loc="name",
            msg=f"Allowed values are {list(amplitudes)}",
            inp=name,
            ctx={"name": "bell state"},
        )
    return PureState(amplitudes=amplitudes[name])


def maximally_mixed() -> TwoQubitState:
    """
    Returns I/4.
    """
    return TwoQubitState(rho=np.eye(4, dtype=complex) / 4)


def _require_normalized(rho: TwoQubitState):
    if not rho.trace_normalized:
        CustomValidations.raize_custom_error(
            error_type="unnormalized",
            loc="rho",
            msg="unnormalized state",
            inp=rho.trace,
            ctx={"trace_normalized": True},
        )


def fidelity(rho: TwoQubitState, target: PureState) -> float:
    """
    Returns <target|rho|target> for a trace-normalized state.
    """
    _require_normalized(rho)
    psi = target.amplitudes
    value = np.vdot(psi, rho.rho @ psi)
    return float(min(max(value.real, 0.0), 1.0))


def purity(rho: TwoQubitState) -> float:
    """
    Returns Tr(rho^2), which lies in [1/4, 1].
    """
    _require_normalized(rho)
    return float(np.real(np.trace(rho.rho @ rho.rho)))


def concurrence(rho: TwoQubitState) -> float:
    """
    Two-qubit concurrence from the spectrum of rho (Y x Y) rho* (Y x Y).
    """
    _require_normalized(rho)
    flipped = rho.rho @ SPIN_FLIP @ rho.rho.conj() @ SPIN_FLIP
    # abs guards sqrt against tiny negative round-off
    roots = np.sort(np.sqrt(np.abs(np.linalg.eigvals(flipped).real)))[::-1]
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def concurrence_lower_bound(fidelity_phi_plus: float) -> float:
    """
    Lower bound max{0, 2F - 1} on the concurrence from the fidelity with |phi+>.
    """
    CustomValidations.validate_probability(fidelity_phi_plus, "fidelity")
    return max(0.0, 2.0 * fidelity_phi_plus - 1.0)


def _rotation(angle: float) -> np.ndarray:
    cos, sin = math.cos(angle), math.sin(angle)
    return np.array([[cos, sin], [-sin, cos]], dtype=complex)


def waveplate_matrix(plate: Waveplate, angle: float) -> np.ndarray:
    """
    Jones matrix of a half- or quarter-wave plate with its fast axis at `angle`
    radians from horizontal.
    """
    if plate not in WAVEPLATES:
        CustomValidations.raize_custom_error(
            error_type="invalid",
            loc="plate",
            msg=f"Allowed values are {WAVEPLATES}",
            inp=plate,
            ctx={"plate": "HWP or QWP"},
        )
    if not math.isfinite(angle):
        CustomValidations.raize_custom_error(
            error_type="domain",
            loc="angle",
            msg="Waveplate angle must be finite",
            inp=angle,
            ctx={"angle": "finite"},
        )
    retarder = np.diag([1, -1]) if plate == "HWP" else np.diag([1, 1j])
    return _rotation(-angle) @ retarder.astype(complex) @ _rotation(angle)


def local_operator(single: np.ndarray, qubit_index: int) -> np.ndarray:
    """
    Embeds a 2x2 operator on qubit 1 or 2 of the two-qubit space.
    """
    if qubit_index not in (1, 2):
        CustomValidations.raize_custom_error(
            error_type="invalid",
            loc="qubit_index",
            msg="invalid qubit index",
            inp=qubit_index,
            ctx={"qubit_index": "1 or 2"},
        )
    identity = np.eye(2, dtype=complex)
    if qubit_index == 1:
        return np.kron(single, identity)
    return np.kron(identity, single)


def apply_waveplate(
    state_or_rho: Union[PureState, TwoQubitState],
    plate: Waveplate,
    angle: float,
    qubit_index: int,
) -> Union[PureState, TwoQubitState]:
    """
    Applies a waveplate on one qubit; returns the same kind of object it was given.
    """
    unitary = local_operator(waveplate_matrix(plate, angle), qubit_index)
    if isinstance(state_or_rho, PureState):
        return PureState(amplitudes=unitary @ state_or_rho.amplitudes)
    return TwoQubitState(
        rho=unitary @ state_or_rho.rho @ unitary.conj().T,
        trace_normalized=state_or_rho.trace_normalized,
    )


def random_pure_state(rng: np.random.Generator) -> PureState:
    """
    Haar-random two-qubit ket.
    """
    vector = rng.normal(size=4) + 1j * rng.normal(size=4)
    return PureState(amplitudes=vector / np.linalg.norm(vector))


def random_density_matrix(rng: np.random.Generator, rank: int = 4) -> TwoQubitState:
    """
    Random mixed state: a random purification with a `rank`-dimensional
    environment traced down.
    """
    ginibre = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = ginibre @ ginibre.conj().T
    return TwoQubitState(rho=rho / np.trace(rho).real)


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    """
    Random U x V built from QR decompositions of complex Gaussian matrices.
    """
    factors = []
    for _ in range(2):
        ginibre = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q_matrix, r_matrix = np.linalg.qr(ginibre)
        phases = np.diag(r_matrix) / np.abs(np.diag(r_matrix))
        factors.append(q_matrix * phases)
    return np.kron(factors[0], factors[1])


def pauli_expectation(rho: TwoQubitState, first: str, second: str) -> float:
    """
    Returns Tr(rho sigma_first x sigma_second) for Pauli names I, X, Y, Z.
    """
    operator = np.kron(PAULI[first], PAULI[second])
    return float(np.real(np.trace(rho.rho @ operator)))
