# -*- coding: utf-8 -*-
"""
pipeline/schema.py
Date: 19/10/2026
"""
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from dependencies import SETTINGS

Command = Literal[
    "antidip",
    "fuse",
    "chi-compose",
    "tomo-state",
    "tomo-process",
    "higher-order",
    "fit",
    "pipeline",
]

# Pairs per pulse of the five pump powers.
POWER_SERIES = (0.037, 0.064, 0.103, 0.160, 0.193)


class RunConfig(BaseModel):
    """
    A pydantic model for the resolved configuration of one command.

    `params` holds the command parameters after merging flags over the
    config file over the defaults.
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    params: dict[str, Any] = {}
    seed: int = Field(default_factory=lambda: SETTINGS.DEFAULT_SEED)
    out: Optional[str] = None
    format: Literal["csv", "json"] = "json"

    def echo(self) -> dict:
        """
        Provenance block written into every JSON report.
        """
        return {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "format": self.format,
        }


class PipelineConfig(BaseModel):
    """
    A pydantic model for the end-to-end power-series run.
    """

    model_config = ConfigDict(frozen=True)

    n_bar_values: list[float] = list(POWER_SERIES)
    eta: float = Field(default_factory=lambda: SETTINGS.DETECTOR_EFFICIENCY, gt=0, le=1)
    fock_cutoff: int = Field(default_factory=lambda: SETTINGS.FOCK_CUTOFF, ge=2)
    first_order: bool = True
    chi_diag: dict[str, float] = {"00": 1.0, "zz": 0.0, "xy": 0.0, "xx": 0.0}
    delta_tau_ps: float = 0.0
    sigma_t_ps: float = Field(default_factory=lambda: SETTINGS.SIGMA_T_PS, gt=0)
    counts_per_setting: int = Field(
        default_factory=lambda: SETTINGS.COUNTS_PER_SETTING, gt=0
    )
    n_mc: int = Field(0, ge=0)
    seed: int = Field(default_factory=lambda: SETTINGS.DEFAULT_SEED)


class PipelineRow(BaseModel):
    """
    Results for one pump power.
    """

    n_bar: float
    four_fold_rate_model: float
    fidelity: float
    fidelity_std: float = 0.0
    concurrence: float
    concurrence_std: float = 0.0
    purity: float
    purity_std: float = 0.0
    process_fidelity: float
    process_fidelity_std: float = 0.0
    capability_bound: float
    capability_bound_std: float = 0.0
    fidelity_bound: float
    p0_limit: float
