# -*- coding: utf-8 -*-
"""
tomography/schema.py
Date: 19/10/2026
"""
import logging
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dependencies import LABEL_BASIS
from fusionchannel.schema import ProcessFidelity, ProcessMatrix
from quantumcore.schema import TwoQubitState

_log = logging.getLogger(__name__)

Label = Literal["H", "V", "P", "M", "R", "L"]

CSV_HEADER = ("prep_q1", "prep_q2", "proj_q1", "proj_q2", "counts", "duration_s")

# Integration time of one four-fold coincidence point.
DEFAULT_DURATION_S = 621.0


class CountRow(BaseModel):
    """
    A pydantic model for one row of a count file.
    """

    model_config = ConfigDict(frozen=True)

    prep_q1: Label
    prep_q2: Label
    proj_q1: Label
    proj_q2: Label
    counts: int = Field(ge=0)
    duration_s: float = Field(DEFAULT_DURATION_S, ge=0)

    @property
    def prep(self) -> tuple[str, str]:
        """
        Input product state labels.
        """
        return (self.prep_q1, self.prep_q2)

    @property
    def proj(self) -> tuple[str, str]:
        """
        Output projector labels.
        """
        return (self.proj_q1, self.proj_q2)

    @property
    def setting(self) -> str:
        """
        Two-letter measurement setting such as "ZX".
        """
        return LABEL_BASIS[self.proj_q1] + LABEL_BASIS[self.proj_q2]


class CountTable(BaseModel):
    """
    A pydantic model for a table of coincidence counts.

    Rows repeating a (prep, proj) pair are summed on construction.
    """

    model_config = ConfigDict(frozen=True)

    rows: list[CountRow]
    duplicates_merged: int = 0

    @model_validator(mode="before")
    @classmethod
    def merge_duplicates(cls, data):
        """
        Sums counts and durations of rows sharing a (prep, proj) pair.
        """
        if not isinstance(data, dict):
            return data
        merged: dict[tuple, dict] = {}
        duplicates = data.get("duplicates_merged", 0)
        for row in data.get("rows", []):
            row = row.model_dump() if isinstance(row, CountRow) else dict(row)
            key = (row["prep_q1"], row["prep_q2"], row["proj_q1"], row["proj_q2"])
            if key in merged:
                duplicates += 1
                merged[key]["counts"] += row["counts"]
                merged[key]["duration_s"] = merged[key].get(
                    "duration_s", DEFAULT_DURATION_S
                ) + row.get("duration_s", DEFAULT_DURATION_S)
            else:
                merged[key] = row
        if duplicates > data.get("duplicates_merged", 0):
            _log.warning("Summed %d duplicate count rows", duplicates)
        return {"rows": list(merged.values()), "duplicates_merged": duplicates}

    @property
    def total(self) -> int:
        """
        Sum of all counts.
        """
        return sum(row.counts for row in self.rows)

    def settings(self) -> dict[str, int]:
        """
        Number of distinct outcome rows per measurement setting.
        """
        found: dict[str, set] = {}
        for row in self.rows:
            found.setdefault(row.setting, set()).add(row.proj)
        return {setting: len(outcomes) for setting, outcomes in found.items()}

    def with_counts(self, counts) -> "CountTable":
        """
        Copy of the table with new counts in row order.
        """
        return CountTable(
            rows=[
                row.model_copy(update={"counts": int(value)})
                for row, value in zip(self.rows, counts)
            ]
        )


class Estimate(BaseModel):
    """
    Mean and standard deviation of an estimator under Poisson resampling.
    """

    mean: float
    std: float = Field(ge=0)
    n_mc: int
    seed: int


class ReconstructionResult(BaseModel):
    """
    Maximum-likelihood state with its quality metrics.

    Standard deviations stay zero when no Monte Carlo resampling was run.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    rho: TwoQubitState
    log_likelihood: float
    likelihood_trace: list[float] = []
    iterations: int = 0
    converged: bool = True
    fidelity: float
    fidelity_std: float = 0.0
    purity: float
    purity_std: float = 0.0
    concurrence: float
    concurrence_std: float = 0.0
    n_mc: int = 0
    seed: Optional[int] = None

    def to_json(self) -> dict:
        """
        Report with the density matrix and metrics as value/"±" pairs.
        """
        return {
            "rho": self.rho.to_json(),
            "log_likelihood": self.log_likelihood,
            "iterations": self.iterations,
            "converged": self.converged,
            "clamped": self.rho.clamped,
            "metrics": {
                name: {"value": getattr(self, name), "±": getattr(self, f"{name}_std")}
                for name in ("fidelity", "purity", "concurrence")
            },
            "n_mc": self.n_mc,
            "seed": self.seed,
        }


class ProcessReconstruction(BaseModel):
    """
    Diagonal process matrix recovered from the three basis fidelities.
    """

    chi: ProcessMatrix
    basis_fidelities: dict[str, float]
    process_fidelity: ProcessFidelity
    capability_bound: float
    diagonal_sum_deviation: float = 0.0
    chi_clamped: bool = False
    errors: dict[str, float] = {}

    def to_json(self) -> dict:
        """
        Report with chi diagonals, basis fidelities and bounds.
        """
        payload = self.chi.to_json()
        payload.update(
            {
                "basis_fidelities": self.basis_fidelities,
                "process_fidelity": self.process_fidelity.value,
                "process_fidelity_valid": self.process_fidelity.valid,
                "capability_bound": self.capability_bound,
                "diagonal_sum_deviation": self.diagonal_sum_deviation,
                "chi_clamped": self.chi_clamped,
                "±": self.errors,
            }
        )
        return payload
