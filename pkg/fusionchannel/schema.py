# -*- coding: utf-8 -*-
"""
fusionchannel/schema.py
Date: 19/10/2026
"""
import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dependencies import SETTINGS, CustomValidations

ChiLabel = Literal["00", "zz", "xy", "xx"]
BasisMap = Literal["ZtoZ", "XtoX", "XtoY"]

CHI_LABELS: tuple[str, ...] = ("00", "zz", "xy", "xx")

# Input basis, output basis and correct output pairs for every input pair.
BASIS_MAPS = {
    "ZtoZ": {
        "prep": "Z",
        "proj": "Z",
        "correct": {
            prep: {("H", "H"), ("V", "V")}
            for prep in (("H", "H"), ("H", "V"), ("V", "H"), ("V", "V"))
        },
    },
    "XtoX": {
        "prep": "X",
        "proj": "X",
        "correct": {
            ("P", "P"): {("P", "P"), ("M", "M")},
            ("M", "M"): {("P", "P"), ("M", "M")},
            ("P", "M"): {("P", "M"), ("M", "P")},
            ("M", "P"): {("P", "M"), ("M", "P")},
        },
    },
    "XtoY": {
        "prep": "X",
        "proj": "Y",
        "correct": {
            ("P", "P"): {("L", "R"), ("R", "L")},
            ("M", "M"): {("L", "R"), ("R", "L")},
            ("P", "M"): {("L", "L"), ("R", "R")},
            ("M", "P"): {("L", "L"), ("R", "R")},
        },
    },
}


class ProcessMatrix(BaseModel):
    """
    Diagonal chi matrix over the operator set (E0, Ezz, Exy, Exx).

    The off-diagonal block is optional and zero unless set explicitly.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    chi_00: float
    chi_zz: float = 0.0
    chi_xy: float = 0.0
    chi_xx: float = 0.0
    chi_offdiag: Optional[np.ndarray] = None

    @model_validator(mode="after")
    def check_normalization(self):
        """
        Each diagonal lies in [0, 1] and the diagonals sum to one.
        """
        for label, value in zip(CHI_LABELS, self.diagonal()):
            if not math.isfinite(value) or value < -SETTINGS.POSITIVITY_TOLERANCE or value > 1.0 + SETTINGS.POSITIVITY_TOLERANCE:
                CustomValidations.raize_custom_error(
                    error_type="invalid_chi",
                    loc=f"chi_{label}",
                    msg="Process matrix diagonals must lie in [0, 1]",
                    inp=value,
                    ctx={f"chi_{label}": "[0, 1]"},
                )
        total = float(self.diagonal().sum())
        if abs(total - 1.0) > SETTINGS.POSITIVITY_TOLERANCE:
            CustomValidations.raize_custom_error(
                error_type="invalid_chi",
                loc="chi_diag",
                msg="Process matrix diagonals must sum to one",
                inp=total,
                ctx={"sum": 1.0},
            )
        if self.chi_offdiag is not None and np.asarray(self.chi_offdiag).shape != (4, 4):
            CustomValidations.raize_custom_error(
                error_type="invalid_chi",
                loc="chi_offdiag",
                msg="Off-diagonal chi block must be 4x4",
                inp=str(np.asarray(self.chi_offdiag).shape),
                ctx={"chi_offdiag": "4x4"},
            )
        return self

    def diagonal(self) -> np.ndarray:
        """
        Diagonals in the order (00, zz, xy, xx).
        """
        return np.array([self.chi_00, self.chi_zz, self.chi_xy, self.chi_xx])

    def full(self) -> np.ndarray:
        """
        The 4x4 chi matrix; the diagonal always comes from the chi_* fields.
        """
        matrix = (
            np.zeros((4, 4), dtype=complex)
            if self.chi_offdiag is None
            else np.array(self.chi_offdiag, dtype=complex)
        )
        np.fill_diagonal(matrix, self.diagonal())
        return matrix

    @classmethod
    def from_diagonal(cls, values) -> "ProcessMatrix":
        """
        Builds a ProcessMatrix from (00, zz, xy, xx).
        """
        chi_00, chi_zz, chi_xy, chi_xx = (float(value) for value in values)
        return cls(chi_00=chi_00, chi_zz=chi_zz, chi_xy=chi_xy, chi_xx=chi_xx)

    @classmethod
    def ideal(cls) -> "ProcessMatrix":
        """
        The ideal parity check, chi = (1, 0, 0, 0).
        """
        return cls(chi_00=1.0)

    def to_json(self, f_model: Optional["DephasingFunction"] = None) -> dict:
        """
        Serializes to {"chi_diag": {...}, "f_model": {...}}.
        """
        payload = {"chi_diag": dict(zip(CHI_LABELS, self.diagonal().tolist()))}
        if f_model is not None:
            payload["f_model"] = f_model.to_json()
        return payload


class DephasingFunction(BaseModel):
    """
    Dephasing function f(delta_tau) in [0, 1].

    gaussian_hom: exp(-(delta_tau / sigma_t)^2 / 2)
    constant: a fixed value
    custom-tabulated: linear interpolation over |delta_tau|, clipped at the ends
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["gaussian_hom", "constant", "custom-tabulated"] = "gaussian_hom"
    sigma_t_ps: float = Field(default_factory=lambda: SETTINGS.SIGMA_T_PS, gt=0)
    constant: float = Field(1.0, ge=0, le=1)
    table_delays_ps: list[float] = []
    table_values: list[float] = []

    @model_validator(mode="after")
    def check_table(self):
        """
        A tabulated function needs matching, sorted, non-negative delays and values in [0, 1].
        """
        if self.kind != "custom-tabulated":
            return self
        delays, values = self.table_delays_ps, self.table_values
        if (
            len(delays) < 2
            or len(delays) != len(values)
            or any(later <= earlier for earlier, later in zip(delays, delays[1:]))
            or delays[0] < 0
            or any(value < 0 or value > 1 for value in values)
        ):
            CustomValidations.raize_custom_error(
                error_type="invalid",
                loc="table",
                msg="Tabulated dephasing needs sorted delays and values in [0, 1]",
                inp=f"{len(delays)} delays, {len(values)} values",
                ctx={"table": "sorted, matching, in [0, 1]"},
            )
        return self

    def value(self, delta_tau: float) -> float:
        """
        Evaluates f at a delay in picoseconds.
        """
        if self.kind == "constant":
            return self.constant
        if self.kind == "custom-tabulated":
            return float(
                np.interp(abs(delta_tau), self.table_delays_ps, self.table_values)
            )
        return math.exp(-((delta_tau / self.sigma_t_ps) ** 2) / 2)

    def to_json(self) -> dict:
        """
        Serializes the model description used in chi reports.
        """
        payload = {"kind": self.kind, "sigma_t_ps": self.sigma_t_ps}
        if self.kind == "constant":
            payload["constant"] = self.constant
        if self.kind == "custom-tabulated":
            payload["table_delays_ps"] = self.table_delays_ps
            payload["table_values"] = self.table_values
        return payload


class PhaseDampParams(BaseModel):
    """
    Amplitudes alpha = sqrt((1+f)/2) and beta = sqrt((1-f)/2) of the damping Kraus set.
    """

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float

    @classmethod
    def from_f(cls, f_value: float) -> "PhaseDampParams":
        """
        Builds the amplitudes for a dephasing value f in [0, 1].
        """
        CustomValidations.validate_probability(f_value, "f_value")
        return cls(
            alpha=math.sqrt((1 + f_value) / 2), beta=math.sqrt((1 - f_value) / 2)
        )


class KrausSet(BaseModel):
    """
    Labelled list of Kraus operators.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    operators: list[np.ndarray]
    labels: list[str]

    def completeness(self) -> np.ndarray:
        """
        Returns sum_i K_i^dagger K_i.
        """
        return sum(op.conj().T @ op for op in self.operators)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """
        Returns sum_i K_i rho K_i^dagger.
        """
        return sum(op @ rho @ op.conj().T for op in self.operators)


class ProcessFidelity(BaseModel):
    """
    Process fidelity from the three basis fidelities.

    `raw` is the unclamped value; `valid` is false when it fell outside [0, 1].
    """

    value: float
    raw: float
    valid: bool


class TotalProcessPoint(BaseModel):
    """
    One delay of the total (fusion plus damping) process curve.
    """

    delta_tau_ps: float
    f_value: float
    chi_00: float
    chi_zz: float
    chi_xy: float
    chi_xx: float
    process_fidelity: float
    capability_bound: float
