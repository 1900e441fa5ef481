# -*- coding: utf-8 -*-
"""
interference/controller.py
Date: 19/10/2026
"""
import csv
import itertools
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from dependencies import SETTINGS, SPEED_OF_LIGHT_NM_PS, CustomValidations, make_rng
from quantumcore.controller import waveplate_matrix

from .schema import AntidipFit, AntidipPoint, DelayGrid, ModeExpression, ModeFunction

_log = logging.getLogger(__name__)


def _resolve_sigma_t(sigma_t: Optional[float]) -> float:
    return CustomValidations.validate_positive(
        SETTINGS.SIGMA_T_PS if sigma_t is None else sigma_t, "sigma_t"
    )


def coincidence_density(
    zeta1: ModeFunction, zeta2: ModeFunction, t0: float, tau: float
) -> float:
    """
    Joint density (1/16)|zeta1(t0+tau) zeta2(t0) + zeta1(t0) zeta2(t0+tau)|^2
    for one photon at each FPBS output, in ps^-2.
    """
    amplitude = zeta1.amplitude(t0 + tau) * zeta2.amplitude(t0) + zeta1.amplitude(
        t0
    ) * zeta2.amplitude(t0 + tau)
    return float(abs(amplitude) ** 2 / 16)


def coincidence_density_delay(
    tau: float,
    delta_tau: float,
    delta_omega: float = 0.0,
    sigma_t: Optional[float] = None,
) -> float:
    """
    Density of a coincidence separated by tau, integrated over the first
    detection time, in ps^-1:

        exp(-dt^2 - t^2) (cos(t dw) + cosh(2 dt t)) / sqrt(64 pi)

    with t, dt in units of sigma_t and dw in units of 1/sigma_t.
    """
    sigma_t = _resolve_sigma_t(sigma_t)
    scaled_tau, scaled_delay = tau / sigma_t, delta_tau / sigma_t
    scaled_omega = delta_omega * sigma_t
    # exp(-dt^2 - t^2) cosh(2 dt t) written as two shifted Gaussians
    density = (
        math.exp(-(scaled_delay**2) - scaled_tau**2) * math.cos(scaled_tau * scaled_omega)
        + 0.5 * math.exp(-((scaled_tau - scaled_delay) ** 2))
        + 0.5 * math.exp(-((scaled_tau + scaled_delay) ** 2))
    ) / math.sqrt(64 * math.pi)
    return density / sigma_t


def antidip_probability(delta_tau: float, sigma_t: Optional[float] = None) -> float:
    """
    Coincidence probability (exp(-(dt/sigma_t)^2) + 1) / 8, between 1/8 and 1/4.
    """
    sigma_t = _resolve_sigma_t(sigma_t)
    return (math.exp(-((delta_tau / sigma_t) ** 2)) + 1) / 8


def delta_omega_from_lambda(delta_lambda: float, center_lambda: float) -> float:
    """
    Converts a wavelength mismatch in nm to an angular frequency mismatch in rad/ps.
    """
    CustomValidations.validate_positive(center_lambda, "center_lambda")
    return 2 * math.pi * SPEED_OF_LIGHT_NM_PS * delta_lambda / center_lambda**2


def antidip_probability_mismatch(
    delta_tau: float,
    sigma_t: Optional[float] = None,
    delta_lambda: float = 0.0,
    center_lambda: Optional[float] = None,
) -> float:
    """
    Coincidence probability with a frequency mismatch between the two photons,
    integrated over tau on [-QUAD_HALF_WIDTH, QUAD_HALF_WIDTH] sigma_t.
    """
    sigma_t = _resolve_sigma_t(sigma_t)
    center_lambda = SETTINGS.CENTER_LAMBDA_NM if center_lambda is None else center_lambda
    delta_omega = delta_omega_from_lambda(delta_lambda, center_lambda)
    if delta_omega == 0.0:
        return antidip_probability(delta_tau, sigma_t)
    half_width = SETTINGS.QUAD_HALF_WIDTH * sigma_t
    # the cosh term widens the density by delta_tau
    half_width += abs(delta_tau)
    value, abserr = integrate.quad(
        coincidence_density_delay,
        -half_width,
        half_width,
        args=(delta_tau, delta_omega, sigma_t),
        epsabs=SETTINGS.QUAD_TOLERANCE,
        limit=200,
        points=sorted({-abs(delta_tau), 0.0, abs(delta_tau)}),
    )
    _log.debug("Mismatch quadrature at dt=%s: %s +- %s", delta_tau, value, abserr)
    return value


def expected_counts(
    delta_tau: float, n_av: float, p0: float, sigma_t: Optional[float] = None
) -> float:
    """
    Model count level N_av (p0 exp(-(dt/sigma_t)^2) + 1) / 8.
    """
    sigma_t = _resolve_sigma_t(sigma_t)
    CustomValidations.validate_positive(n_av, "N_av")
    return n_av * (p0 * math.exp(-((delta_tau / sigma_t) ** 2)) + 1) / 8


def antidip_curve(
    grid: DelayGrid,
    sigma_t: Optional[float] = None,
    delta_lambda: float = 0.0,
    center_lambda: Optional[float] = None,
    n_av: float = 401.0,
    p0: float = 1.0,
) -> list[AntidipPoint]:
    """
    Antidip curve over a delay grid; the mismatch columns are filled only when
    delta_lambda > 0.
    """
    sigma_t = _resolve_sigma_t(sigma_t)
    CustomValidations.validate_probability(p0, "p0")
    rows = []
    for delta_tau in grid.values():
        delta_tau = float(delta_tau)
        row = AntidipPoint(
            delta_tau_ps=delta_tau,
            p_coinc=antidip_probability(delta_tau, sigma_t),
            expected_counts=expected_counts(delta_tau, n_av, p0, sigma_t),
        )
        if delta_lambda > 0:
            mismatch = antidip_probability_mismatch(
                delta_tau, sigma_t, delta_lambda, center_lambda
            )
            # counts scale with the probability over its 1/8 wing level
            row.p_coinc_mismatch = mismatch
            row.expected_counts_mismatch = n_av * (
                p0 * (8 * mismatch - 1) + 1
            ) / 8
        rows.append(row)
    return rows


def _model_and_jacobian(
    delays: np.ndarray, n_av: float, p0: float, sigma_t: float
) -> tuple[np.ndarray, np.ndarray]:
    gauss = np.exp(-((delays / sigma_t) ** 2))
    model = n_av * (p0 * gauss + 1) / 8
    jacobian = np.column_stack([(p0 * gauss + 1) / 8, n_av * gauss / 8])
    return model, jacobian


def fit_antidip(
    points: Sequence[tuple[float, float]], sigma_t: Optional[float] = None
) -> AntidipFit:
    """
    Gauss-Newton least-squares fit of (N_av, p0).

    Starts at N_av = 8 x mean wing counts and p0 = 0.5; stops when the step
    norm drops below FIT_TOLERANCE or after FIT_MAX_ITERATIONS steps.
    """
    sigma_t = _resolve_sigma_t(sigma_t)
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or data.shape[0] < 5 or data.shape[1] != 2:
        CustomValidations.raize_custom_error(
            error_type="degenerate_fit",
            loc="points",
            msg="Fit needs at least five (delta_tau, counts) points",
            inp=len(data),
            ctx={"points": ">= 5"},
        )
    delays, counts = data[:, 0], data[:, 1]
    if np.ptp(delays) == 0.0:
        CustomValidations.raize_custom_error(
            error_type="degenerate_fit",
            loc="points",
            msg="All points share the same delay",
            inp=float(delays[0]),
            ctx={"delta_tau": "at least two distinct values"},
        )

    scaled = np.abs(delays) / sigma_t
    wings = scaled >= 2.0
    if not wings.any():
        wings = scaled >= np.median(scaled)
    n_av, p0 = 8.0 * float(np.mean(counts[wings])), 0.5
    if n_av <= 0:
        n_av = 8.0 * max(float(np.mean(counts)), 1.0)

    converged = False
    iteration = 0
    for iteration in range(1, SETTINGS.FIT_MAX_ITERATIONS + 1):
        model, jacobian = _model_and_jacobian(delays, n_av, p0, sigma_t)
        step, *_ = np.linalg.lstsq(jacobian, counts - model, rcond=None)
        n_av = max(n_av + step[0], 1e-12)
        p0 = min(max(p0 + step[1], 0.0), 1.05)
        if np.linalg.norm(step) < SETTINGS.FIT_TOLERANCE:
            converged = True
            break
    if not converged:
        _log.warning("Antidip fit stopped after %d iterations", iteration)

    model, _ = _model_and_jacobian(delays, n_av, p0, sigma_t)
    residual = float(np.sum((counts - model) ** 2))
    _log.debug("Antidip fit N_av=%s p0=%s after %d iterations", n_av, p0, iteration)
    return AntidipFit(
        N_av=n_av, p0=p0, residual=residual, iterations=iteration, converged=converged
    )


def waveplate_stage(matrix: np.ndarray, suffix: str = "") -> dict:
    """
    Single-mode polarization map {label: [(label, coefficient)]} for modes 1 and 2.
    """
    stage = {}
    for mode in ("1", "2"):
        name = mode + suffix
        for column, pol in enumerate("HV"):
            stage[pol + name] = [
                (out_pol + name, matrix[row, column])
                for row, out_pol in enumerate("HV")
                if abs(matrix[row, column]) > 0
            ]
    return stage


# H is transmitted into the other spatial mode, V reflected with a +-i phase.
FPBS_STAGE = {
    "H1": [("H2'", 1.0)],
    "V1": [("V1'", 1j)],
    "H2": [("H1'", 1.0)],
    "V2": [("V2'", -1j)],
}

PBS_STAGE = {
    "H1'": [("H1a", 1.0)],
    "V1'": [("V1b", 1j)],
    "H2'": [("H2a", 1.0)],
    "V2'": [("V2b", -1j)],
}


def apply_stage(expression: ModeExpression, stage: dict) -> ModeExpression:
    """
    Substitutes every creation operator named in `stage` by its linear
    combination of output operators; labels missing from `stage` pass through.
    """
    terms: dict[tuple[str, ...], complex] = {}
    for labels, coefficient in expression.terms.items():
        expansions = [[(label, 1.0)] if label not in stage else stage[label] for label in labels]
        for choice in itertools.product(*expansions):
            key = tuple(sorted(label for label, _ in choice))
            weight = coefficient * math.prod(factor for _, factor in choice)
            terms[key] = terms.get(key, 0.0) + weight
    return ModeExpression(terms=terms).pruned()


def mode_transform_chain(
    expression: ModeExpression,
    input_rotation: bool = False,
    stages: Sequence[str] = ("fpbs", "analyzer", "pbs"),
    analyzer: Sequence[tuple[str, float]] = (("HWP", math.pi / 8),),
) -> ModeExpression:
    """
    Pushes creation operators on input modes 1 and 2 through the fusion
    optics: optional input half-wave plates at 22.5 deg, the FPBS, per-mode
    analyzer waveplates and the analysing PBS. Returns the coefficient table
    over output labels.
    """
    for labels in expression.terms:
        if len(set(label[1:] for label in labels)) != len(labels):
            CustomValidations.raize_custom_error(
                error_type="unsupported_input",
                loc="expression",
                msg="One creation operator per input mode is supported",
                inp=str(labels),
                ctx={"expression": "one photon per mode"},
            )
    if input_rotation:
        expression = apply_stage(
            expression, waveplate_stage(waveplate_matrix("HWP", math.pi / 8))
        )
    analyzer_matrix = np.eye(2, dtype=complex)
    for plate, angle in analyzer:
        analyzer_matrix = waveplate_matrix(plate, angle) @ analyzer_matrix
    available = {
        "fpbs": FPBS_STAGE,
        "analyzer": waveplate_stage(analyzer_matrix, "'"),
        "pbs": PBS_STAGE,
    }
    for name in stages:
        if name not in available:
            CustomValidations.raize_custom_error(
                error_type="invalid",
                loc="stages",
                msg=f"Allowed values are {list(available)}",
                inp=name,
                ctx={"stages": "fpbs, analyzer, pbs"},
            )
        expression = apply_stage(expression, available[name])
    return expression


def synthetic_antidip_points(
    grid: DelayGrid,
    n_av: float,
    p0: float,
    sigma_t: Optional[float] = None,
    seed: Optional[int] = None,
) -> list[tuple[float, float]]:
    """
    Poisson-noised counts around the model curve; without a seed the counts
    are the model values themselves.
    """
    model = [(float(delay), expected_counts(float(delay), n_av, p0, sigma_t)) for delay in grid.values()]
    if seed is None:
        return model
    rng = make_rng(seed)
    return [(delay, float(rng.poisson(level))) for delay, level in model]


def read_antidip_points(path: str) -> list[tuple[float, float]]:
    """
    Reads `delta_tau_ps,counts` rows from a CSV file.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = [cell.strip() for cell in next(reader, [])]
            if header[:2] != ["delta_tau_ps", "counts"]:
                CustomValidations.raize_custom_error(
                    error_type="malformed_row",
                    loc=f"{path}:1",
                    msg="Header must start with delta_tau_ps,counts",
                    inp=",".join(header),
                    ctx={"line": 1},
                )
            points = []
            for record in reader:
                if not any(cell.strip() for cell in record):
                    continue
                try:
                    points.append((float(record[0]), float(record[1])))
                except (ValueError, IndexError):
                    CustomValidations.raize_custom_error(
                        error_type="malformed_row",
                        loc=f"{path}:{reader.line_num}",
                        msg=f"Line {reader.line_num} needs two numbers",
                        inp=",".join(record),
                        ctx={"line": reader.line_num},
                    )
            return points
    except OSError as error:
        CustomValidations.raize_custom_error(
            error_type="file_error",
            loc=str(path),
            msg=error.strerror or str(error),
            inp=str(path),
            ctx={"path": str(path)},
        )
    except UnicodeDecodeError as error:
        CustomValidations.raize_custom_error(
            error_type="file_error",
            loc=str(path),
            msg=f"File is not valid UTF-8: {error.reason}",
            inp=str(path),
            ctx={"path": str(path), "position": error.start},
        )
