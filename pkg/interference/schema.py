# -*- coding: utf-8 -*-
"""
interference/schema.py
Date: 19/10/2026
"""
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dependencies import SETTINGS, CustomValidations


class ModeFunction(BaseModel):
    """
    Gaussian single-photon pulse
    zeta(t) = (2/pi)^(1/4) exp(-((t - delay)/sigma_t)^2 - i w t) / sqrt(sigma_t),
    normalized over t in picoseconds.
    """

    model_config = ConfigDict(frozen=True)

    center_frequency: float = 0.0
    pulse_duration: float = Field(default_factory=lambda: SETTINGS.SIGMA_T_PS, gt=0)
    delay: float = 0.0

    def amplitude(self, time_ps: float) -> complex:
        """
        Returns zeta(t) in ps^(-1/2).
        """
        scaled = (time_ps - self.delay) / self.pulse_duration
        return (
            (2 / math.pi) ** 0.25
            * np.exp(-(scaled**2) - 1j * self.center_frequency * time_ps)
            / math.sqrt(self.pulse_duration)
        )


class DetectionWindow(BaseModel):
    """
    Coincidence window and pulse repetition period, both in nanoseconds.
    """

    model_config = ConfigDict(frozen=True)

    tau_coinc: float = Field(default_factory=lambda: SETTINGS.TAU_COINC_NS, gt=0)
    tau_rep: float = Field(default_factory=lambda: SETTINGS.TAU_REP_NS, gt=0)

    @model_validator(mode="after")
    def check_order(self):
        """
        The window must close before the next pulse arrives.
        """
        if self.tau_rep <= self.tau_coinc:
            CustomValidations.raize_custom_error(
                error_type="domain",
                loc="tau_coinc",
                msg="Coincidence window must be shorter than the repetition period",
                inp=self.tau_coinc,
                ctx={"tau_rep": self.tau_rep},
            )
        return self


class AntidipFit(BaseModel):
    """
    Result of fitting N_av (p0 exp(-(dt/sigma_t)^2) + 1) / 8 to count data.
    """

    N_av: float = Field(gt=0)
    p0: float = Field(ge=0, le=1.05)
    residual: float
    iterations: int = 0
    converged: bool = True

    def to_json(self) -> dict:
        """
        Report shape {"N_av", "p0", "residual"} plus solver diagnostics.
        """
        return self.model_dump()


class AntidipPoint(BaseModel):
    """
    One row of an antidip curve.
    """

    delta_tau_ps: float
    p_coinc: float
    expected_counts: float
    p_coinc_mismatch: Optional[float] = None
    expected_counts_mismatch: Optional[float] = None


class DelayGrid(BaseModel):
    """
    Evenly spaced delay grid in picoseconds.
    """

    start: float = -4.0
    stop: float = 4.0
    points: int = Field(33, ge=2)

    @model_validator(mode="after")
    def check_span(self):
        """
        The grid must span a non-empty, finite interval.
        """
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.stop <= self.start:
            CustomValidations.raize_custom_error(
                error_type="bad_grid",
                loc="grid",
                msg="Grid stop must be greater than start",
                inp=f"{self.start}:{self.stop}",
                ctx={"grid": "start < stop"},
            )
        return self

    def values(self) -> np.ndarray:
        """
        Grid points.
        """
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def parse(cls, text: str) -> "DelayGrid":
        """
        Parses "start:stop:points".
        """
        try:
            start, stop, points = text.split(":")
            start, stop, points = float(start), float(stop), int(points)
        except ValueError:
            CustomValidations.raize_custom_error(
                error_type="bad_grid",
                loc="grid",
                msg="Grid must read start:stop:points",
                inp=text,
                ctx={"grid": "start:stop:points"},
            )
        if points < 2:
            CustomValidations.raize_custom_error(
                error_type="bad_grid",
                loc="grid",
                msg="Grid needs at least two points",
                inp=text,
                ctx={"points": ">= 2"},
            )
        return cls(start=start, stop=stop, points=points)


class ModeExpression(BaseModel):
    """
    Sum of products of creation operators on labelled modes.

    Keys are sorted tuples of mode labels such as ("H1", "V2"); a label names
    polarization then spatial mode, primed after the FPBS and suffixed a/b
    after the analysing PBS.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    terms: dict[tuple[str, ...], complex]

    @field_validator("terms", mode="before")
    @classmethod
    def cast_terms(cls, value):
        """
        Sorts label tuples and casts coefficients to complex.
        """
        return {tuple(sorted(labels)): complex(coefficient) for labels, coefficient in value.items()}

    def norm(self) -> float:
        """
        Squared norm of the state the expression creates from vacuum,
        including the n! factor of repeated modes.
        """
        total = 0.0
        for labels, coefficient in self.terms.items():
            factor = math.prod(math.factorial(labels.count(label)) for label in set(labels))
            total += factor * abs(coefficient) ** 2
        return total

    def pruned(self, atol: Optional[float] = None) -> "ModeExpression":
        """
        Drops terms whose coefficient vanished by interference.
        """
        atol = SETTINGS.MATRIX_TOLERANCE if atol is None else atol
        return ModeExpression(
            terms={key: value for key, value in self.terms.items() if abs(value) > atol}
        )
