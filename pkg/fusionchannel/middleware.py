# -*- coding: utf-8 -*-
"""
fusionchannel/middleware.py
Date: 19/10/2026
"""
from dependencies import CustomValidations

from .schema import BASIS_MAPS


def check_f_value(f_value: float) -> float:
    """
    Guards a dephasing value; f must lie in [0, 1].
    """
    return CustomValidations.validate_probability(f_value, "f_value")


def check_basis_map(which: str) -> str:
    """
    Guards a basis-map name.
    """
    if which not in BASIS_MAPS:
        CustomValidations.raize_custom_error(
            error_type="invalid",
            loc="which",
            msg=f"Allowed values are {list(BASIS_MAPS)}",
            inp=which,
            ctx={"which": "basis map"},
        )
    return which


def parse_chi(text: str) -> list[float]:
    """
    Parses "chi_00,chi_zz,chi_xy,chi_xx".
    """
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        values = []
    if len(values) != 4:
        CustomValidations.raize_custom_error(
            error_type="invalid_chi",
            loc="chi",
            msg="chi must read chi_00,chi_zz,chi_xy,chi_xx",
            inp=text,
            ctx={"chi": "four comma-separated numbers"},
        )
    return values
