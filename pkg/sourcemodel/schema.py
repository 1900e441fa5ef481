# -*- coding: utf-8 -*-
"""
sourcemodel/schema.py
Date: 19/10/2026
"""
import math

from pydantic import BaseModel, ConfigDict, Field, field_validator

from dependencies import SETTINGS


class SourceParams(BaseModel):
    """
    A pydantic model for a pair of heralded four-wave-mixing sources.

    mean_pairs is the mean number of signal-idler pairs per pulse, eta the
    lumped detector efficiency.
    """

    model_config = ConfigDict(frozen=True)

    mean_pairs: float = Field(ge=0)
    eta: float = Field(default_factory=lambda: SETTINGS.DETECTOR_EFFICIENCY, gt=0, le=1)
    fock_cutoff: int = Field(default_factory=lambda: SETTINGS.FOCK_CUTOFF, ge=2)
    first_order: bool = True

    def eta_n(self, photons: int) -> float:
        """
        Click probability 1 - (1 - eta)^n of a threshold detector hit by n photons.
        """
        return 1.0 - (1.0 - self.eta) ** photons

    @property
    def gamma(self) -> float:
        """
        eta_2 / (2 eta_1), between 1/2 and 1.
        """
        return self.eta_n(2) / (2 * self.eta_n(1))

    @property
    def alpha(self) -> float:
        """
        Four-wave-mixing amplitude, taken real.
        """
        return math.sqrt(self.mean_pairs)


class FockTerm(BaseModel):
    """
    One term of a state in the photon-number basis.

    Pure-state lists use `amplitude`; mixed-state lists use `weight`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    occupation: dict[str, int]
    amplitude: complex = 1.0 + 0.0j
    weight: float = 1.0

    @field_validator("amplitude", mode="before")
    @classmethod
    def cast_amplitude(cls, value):
        """
        Accepts real and numpy amplitudes.
        """
        return complex(value)

    @property
    def photons(self) -> int:
        """
        Total photon number of the term.
        """
        return sum(self.occupation.values())


class HigherOrderReport(BaseModel):
    """
    Visibility and fidelity limits imposed by higher-order emission.
    """

    n_bar: float
    eta: float
    gamma: float
    p0_limit: float
    p0_brute_force: float
    fidelity_bound: float
    higher_order_share: float
    first_order: bool
    clamped: bool = False
    detector_model: str = "threshold-split"
