# -*- coding: utf-8 -*-
"""
dependencies.py
Date: 19/10/2026
"""
import math
from typing import Any, Optional

import numpy as np
import orjson
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Configuration class that defines various settings for the toolkit.
    """

    APP_NAME: str = "Fusion-Kit"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    DEFAULT_SEED: int = 621
    MATRIX_TOLERANCE: float = 1e-12
    POSITIVITY_TOLERANCE: float = 1e-9
    SIGMA_T_PS: float = 1.0
    TAU_COINC_NS: float = 3.0
    TAU_REP_NS: float = 12.5
    CENTER_LAMBDA_NM: float = 625.0
    DETECTOR_EFFICIENCY: float = 0.1
    FOCK_CUTOFF: int = 2
    MC_SAMPLES: int = 1000
    MLE_TOLERANCE: float = 1e-10
    MLE_MAX_ITERATIONS: int = 5000
    FIT_TOLERANCE: float = 1e-10
    FIT_MAX_ITERATIONS: int = 200
    QUAD_TOLERANCE: float = 1e-10
    QUAD_HALF_WIDTH: float = 8.0
    SIGNIFICANT_DIGITS: int = 12
    COUNTS_PER_SETTING: int = 10000

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")


class FusionKitError(Exception):
    """
    Raised by every operation of the toolkit when its input is rejected.

    `detail` keeps the list-of-dicts shape used for validation errors:
    type, loc, msg, input and ctx.
    """

    def __init__(self, detail: list[dict]):
        self.detail = detail
        super().__init__(detail[0]["msg"] if detail else "fusionkit error")

    @property
    def error_type(self) -> str:
        """
        The `type` of the first error entry.
        """
        return self.detail[0]["type"]


class CustomValidations:
    """
    Contains static methods for performing custom validations on user input.
    """

    @staticmethod
    # pylint: disable=R0913
    def raize_custom_error(
        error_type: str = "",
        loc: str = "",
        msg: str = "",
        inp: Any = "",
        ctx: Optional[dict] = None,
    ):
        """
        Raises a FusionKitError with a custom error detail.
        """
        detail = [
            {
                "type": error_type,
                "loc": ["input", loc],
                "msg": msg,
                "input": inp if isinstance(inp, (str, int, float)) else str(inp),
                "ctx": ctx,
            }
        ]
        raise FusionKitError(detail)

    @staticmethod
    def validate_probability(value: float, loc: str, error_type: str = "domain"):
        """
        Validates that a value lies in the closed interval [0, 1].

        Raises:
            FusionKitError: If the value is not finite or outside [0, 1].
        """
        if not math.isfinite(value) or value < 0.0 or value > 1.0:
            CustomValidations.raize_custom_error(
                error_type=error_type,
                loc=loc,
                msg=f"{loc} must lie in [0, 1]",
                inp=value,
                ctx={loc: "[0, 1]"},
            )
        return value

    @staticmethod
    def validate_positive(value: float, loc: str):
        """
        Validates that a value is finite and strictly positive.

        Raises:
            FusionKitError: If the value is not a positive number.
        """
        if not math.isfinite(value) or value <= 0.0:
            CustomValidations.raize_custom_error(
                error_type="domain",
                loc=loc,
                msg=f"{loc} must be positive",
                inp=value,
                ctx={loc: "> 0"},
            )
        return value


def round_significant(value: float, digits: Optional[int] = None) -> float:
    """
    Rounds a float to a fixed number of significant digits.
    """
    digits = digits or SETTINGS.SIGNIFICANT_DIGITS
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(f"{value:.{digits}g}")


class ExactFloats(list):
    """
    A list written by `dump_json` at full precision, skipping the rounding.
    """


def _rounded(obj: Any) -> Any:
    if isinstance(obj, ExactFloats):
        return obj
    if isinstance(obj, float):
        return round_significant(obj)
    if isinstance(obj, np.floating):
        return round_significant(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _rounded(obj.tolist())
    if isinstance(obj, dict):
        return {str(key): _rounded(item) for key, item in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(item) for item in obj]
    return obj


def dump_json(payload: Any) -> bytes:
    """
    Serializes a report to JSON with floats fixed at SETTINGS.SIGNIFICANT_DIGITS
    significant digits and sorted keys.
    """
    return orjson.dumps(
        _rounded(payload), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS
    )


def load_json(raw: bytes | str) -> Any:
    """
    Parses JSON text produced by `dump_json` or written by hand.
    """
    return orjson.loads(raw)


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """
    Returns a numpy Generator seeded explicitly; None falls back to SETTINGS.DEFAULT_SEED.
    """
    return np.random.default_rng(SETTINGS.DEFAULT_SEED if seed is None else seed)


SETTINGS = Settings()

# Ordered two-qubit polarization basis used by every matrix and serializer.
BASIS_ORDER = ("HH", "HV", "VH", "VV")

# Count-file labels: P and M stand for the diagonal states + and -.
COUNT_LABELS = ("H", "V", "P", "M", "R", "L")

# Measurement basis of each count label.
LABEL_BASIS = {"H": "Z", "V": "Z", "P": "X", "M": "X", "R": "Y", "L": "Y"}

# Outcome labels per basis, first label is the +1 eigenstate of the Pauli.
BASIS_LABELS = {"Z": ("H", "V"), "X": ("P", "M"), "Y": ("R", "L")}

# Speed of light in nm/ps.
SPEED_OF_LIGHT_NM_PS = 299792.458

# Waveplate angles: fast axis measured from horizontal, in radians.
# HWP(theta) = [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]]
# QWP(theta) = R(-theta) diag(1, i) R(theta)
WAVEPLATES = ("HWP", "QWP")
