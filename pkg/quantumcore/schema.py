# -*- coding: utf-8 -*-
"""
quantumcore/schema.py
Date: 19/10/2026
"""
import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from dependencies import BASIS_ORDER, SETTINGS, CustomValidations, ExactFloats

_log = logging.getLogger(__name__)

Waveplate = Literal["HWP", "QWP"]


class PureState(BaseModel):
    """
    A normalized two-qubit ket over (HH, HV, VH, VV).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitudes: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def check_norm(cls, data):
        """
        Casts the amplitudes to a complex vector of length 4 and checks the norm.
        """
        amplitudes = np.asarray(data.get("amplitudes"), dtype=complex).reshape(-1)
        if amplitudes.shape != (4,):
            CustomValidations.raize_custom_error(
                error_type="shape",
                loc="amplitudes",
                msg="A two-qubit ket needs 4 amplitudes",
                inp=str(amplitudes.shape),
                ctx={"amplitudes": "length 4"},
            )
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > SETTINGS.MATRIX_TOLERANCE:
            CustomValidations.raize_custom_error(
                error_type="unnormalized",
                loc="amplitudes",
                msg="unnormalized state",
                inp=norm,
                ctx={"norm": 1.0},
            )
        return {**data, "amplitudes": amplitudes}

    def density(self) -> "TwoQubitState":
        """
        Returns |psi><psi| as a trace-normalized TwoQubitState.
        """
        return TwoQubitState(rho=np.outer(self.amplitudes, self.amplitudes.conj()))


class TwoQubitState(BaseModel):
    """
    A 4x4 density matrix over (HH, HV, VH, VV).

    With `trace_normalized` false the trace is a success probability in [0, 1].
    Eigenvalues below -POSITIVITY_TOLERANCE are clamped to zero and the trace
    restored; `clamped` records that this happened.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: np.ndarray
    trace_normalized: bool = True
    clamped: bool = False

    @model_validator(mode="before")
    @classmethod
    def check_physical(cls, data):
        """
        Enforces Hermiticity, positivity and the trace condition.
        """
        rho = np.array(data.get("rho"), dtype=complex)
        normalized = data.get("trace_normalized", True)
        tol = SETTINGS.POSITIVITY_TOLERANCE
        if rho.shape != (4, 4):
            CustomValidations.raize_custom_error(
                error_type="shape",
                loc="rho",
                msg="A two-qubit density matrix is 4x4",
                inp=str(rho.shape),
                ctx={"rho": "4x4"},
            )
        if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0.0):
            CustomValidations.raize_custom_error(
                error_type="hermiticity",
                loc="rho",
                msg="Density matrix is not Hermitian",
                inp="rho",
                ctx={"tolerance": tol},
            )
        rho = (rho + rho.conj().T) / 2
        trace = float(np.trace(rho).real)
        if normalized and abs(trace - 1.0) > tol:
            CustomValidations.raize_custom_error(
                error_type="unnormalized",
                loc="rho",
                msg="unnormalized state",
                inp=trace,
                ctx={"trace": 1.0},
            )
        if not normalized and (trace < -tol or trace > 1.0 + tol):
            CustomValidations.raize_custom_error(
                error_type="trace",
                loc="rho",
                msg="Trace of a post-selected state must lie in [0, 1]",
                inp=trace,
                ctx={"trace": "[0, 1]"},
            )
        clamped = bool(data.get("clamped", False))
        values, vectors = np.linalg.eigh(rho)
        if values.min() < -tol:
            _log.warning(
                "Clamping negative eigenvalue %.3e of reconstructed state", values.min()
            )
            values = np.clip(values, 0.0, None)
            rho = (vectors * values) @ vectors.conj().T
            if values.sum() > 0:
                rho = rho * (trace / values.sum())
            clamped = True
        return {"rho": rho, "trace_normalized": normalized, "clamped": clamped}

    @property
    def trace(self) -> float:
        """
        Real trace of the matrix.
        """
        return float(np.trace(self.rho).real)

    def normalized(self) -> "TwoQubitState":
        """
        Returns the trace-normalized copy of a post-selected state.
        """
        trace = self.trace
        if trace <= SETTINGS.POSITIVITY_TOLERANCE:
            CustomValidations.raize_custom_error(
                error_type="zero_trace",
                loc="rho",
                msg="Cannot normalize a state with zero trace",
                inp=trace,
                ctx={"trace": "> 0"},
            )
        return TwoQubitState(rho=self.rho / trace, clamped=self.clamped)

    def to_json(self) -> dict:
        """
        Serializes to {"re": [[...]], "im": [[...]]} in basis order, unrounded
        by `dump_json`.
        """
        return {
            "basis": list(BASIS_ORDER),
            "re": ExactFloats(self.rho.real.tolist()),
            "im": ExactFloats(self.rho.imag.tolist()),
        }

    @classmethod
    def from_json(cls, payload: dict, trace_normalized: bool = True) -> "TwoQubitState":
        """
        Parses the {"re", "im"} form written by `to_json`.
        """
        rho = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(
            payload["im"], dtype=float
        )
        return cls(rho=rho, trace_normalized=trace_normalized)
