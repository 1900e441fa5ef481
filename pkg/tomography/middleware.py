# -*- coding: utf-8 -*-
"""
tomography/middleware.py
Date: 19/10/2026
"""
import itertools

from dependencies import CustomValidations

from .schema import CountTable

# The nine two-qubit settings of an informationally complete measurement.
REQUIRED_SETTINGS = tuple(
    first + second for first, second in itertools.product("ZXY", repeat=2)
)


def check_complete_settings(table: CountTable) -> CountTable:
    """
    Every one of the nine settings must carry all four outcome rows.
    """
    present = table.settings()
    missing = [setting for setting in REQUIRED_SETTINGS if present.get(setting, 0) < 4]
    if missing:
        CustomValidations.raize_custom_error(
            error_type="incomplete_settings",
            loc="table",
            msg=f"incomplete settings: missing {', '.join(missing)}",
            inp=", ".join(missing),
            ctx={"required": list(REQUIRED_SETTINGS)},
        )
    return table


def check_nonzero(table: CountTable) -> CountTable:
    """
    A table without a single count carries no information.
    """
    if table.total == 0:
        CustomValidations.raize_custom_error(
            error_type="zero_counts",
            loc="table",
            msg="Count table has no counts",
            inp=0,
            ctx={"counts": "> 0"},
        )
    return table


def check_mc_samples(n_mc: int) -> int:
    """
    Monte Carlo needs at least 100 resamples.
    """
    if n_mc < 100:
        CustomValidations.raize_custom_error(
            error_type="domain",
            loc="n_mc",
            msg="At least 100 Monte Carlo resamples are required",
            inp=n_mc,
            ctx={"n_mc": ">= 100"},
        )
    return n_mc
