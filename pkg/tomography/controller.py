# -*- coding: utf-8 -*-
"""
tomography/controller.py
Date: 19/10/2026
"""
import csv
import itertools
import logging
from pathlib import Path
from typing import Callable, Iterable, Optional, TextIO, Union

import numpy as np
from scipy.optimize import minimize

from dependencies import (
    BASIS_LABELS,
    COUNT_LABELS,
    LABEL_BASIS,
    SETTINGS,
    CustomValidations,
    make_rng,
    round_significant,
)
from fusionchannel.controller import (
    channel_outcome_probabilities,
    process_fidelity_from_basis,
)
from fusionchannel.middleware import check_basis_map
from fusionchannel.schema import BASIS_MAPS, ProcessMatrix
from quantumcore.controller import (
    PAULI,
    concurrence,
    fidelity,
    make_bell_phi_plus,
    product_ket,
    purity,
)
from quantumcore.schema import PureState, TwoQubitState

from .middleware import (
    REQUIRED_SETTINGS,
    check_complete_settings,
    check_mc_samples,
    check_nonzero,
)
from .schema import (
    CSV_HEADER,
    DEFAULT_DURATION_S,
    CountRow,
    CountTable,
    Estimate,
    ProcessReconstruction,
    ReconstructionResult,
)

_log = logging.getLogger(__name__)

# Eigenvalue floor of the starting point handed to the likelihood search.
_START_FLOOR = 1e-6
_PROBABILITY_FLOOR = 1e-300

_TRIL = np.tril_indices(4, -1)
_SIGNS = {
    **{labels[0]: 1.0 for labels in BASIS_LABELS.values()},
    **{labels[1]: -1.0 for labels in BASIS_LABELS.values()},
}


def _projector(first: str, second: str) -> np.ndarray:
    ket = product_ket(first, second)
    return np.outer(ket, ket.conj())


def _setting_outcomes(setting: str) -> list[tuple[str, str]]:
    if len(setting) != 2 or any(basis not in BASIS_LABELS for basis in setting):
        CustomValidations.raize_custom_error(
            error_type="invalid",
            loc="settings",
            msg=f"Allowed values are {list(REQUIRED_SETTINGS)}",
            inp=setting,
            ctx={"settings": "two letters from Z, X, Y"},
        )
    return list(itertools.product(BASIS_LABELS[setting[0]], BASIS_LABELS[setting[1]]))


def _born_probabilities(rho: TwoQubitState, setting: str) -> np.ndarray:
    outcomes = _setting_outcomes(setting)
    probabilities = np.array(
        [np.real(np.trace(_projector(*outcome) @ rho.rho)) for outcome in outcomes]
    )
    probabilities = np.clip(probabilities, 0.0, None)
    return probabilities / probabilities.sum()


def _resolve_total(total: Optional[int], loc: str) -> int:
    return CustomValidations.validate_positive(
        SETTINGS.COUNTS_PER_SETTING if total is None else total, loc
    )


def simulate_counts(
    rho: TwoQubitState,
    settings: Optional[Iterable[str]] = None,
    total_per_setting: Optional[int] = None,
    seed: Optional[int] = None,
    prep: tuple[str, str] = ("P", "P"),
    duration_s: float = DEFAULT_DURATION_S,
) -> CountTable:
    """
    Multinomial draw of total_per_setting counts over the four outcomes of
    every setting, with Born probabilities of rho.
    """
    if not rho.trace_normalized:
        CustomValidations.raize_custom_error(
            error_type="unnormalized",
            loc="rho",
            msg="unnormalized state",
            inp=rho.trace,
            ctx={"trace_normalized": True},
        )
    total = _resolve_total(total_per_setting, "total_per_setting")
    rng = make_rng(seed)
    rows = []
    for setting in settings or REQUIRED_SETTINGS:
        draws = rng.multinomial(int(total), _born_probabilities(rho, setting))
        for (first, second), counts in zip(_setting_outcomes(setting), draws):
            rows.append(
                CountRow(
                    prep_q1=prep[0],
                    prep_q2=prep[1],
                    proj_q1=first,
                    proj_q2=second,
                    counts=int(counts),
                    duration_s=duration_s,
                )
            )
    return CountTable(rows=rows)


def noiseless_counts(
    rho: TwoQubitState,
    settings: Optional[Iterable[str]] = None,
    total_per_setting: Optional[int] = None,
    prep: tuple[str, str] = ("P", "P"),
) -> CountTable:
    """
    Counts rounded from the exact Born probabilities.
    """
    total = _resolve_total(total_per_setting, "total_per_setting")
    rows = []
    for setting in settings or REQUIRED_SETTINGS:
        expected = np.rint(total * _born_probabilities(rho, setting))
        for (first, second), counts in zip(_setting_outcomes(setting), expected):
            rows.append(
                CountRow(
                    prep_q1=prep[0],
                    prep_q2=prep[1],
                    proj_q1=first,
                    proj_q2=second,
                    counts=int(counts),
                )
            )
    return CountTable(rows=rows)


def _likelihood_data(table: CountTable):
    grouped: dict[tuple[str, str], int] = {}
    for row in table.rows:
        grouped[row.proj] = grouped.get(row.proj, 0) + row.counts
    outcomes = list(grouped)
    counts = np.array([grouped[outcome] for outcome in outcomes], dtype=float)
    setting_totals: dict[str, float] = {}
    for row in table.rows:
        setting_totals[row.setting] = setting_totals.get(row.setting, 0.0) + row.counts
    totals = np.array(
        [setting_totals[LABEL_BASIS[first] + LABEL_BASIS[second]] for first, second in outcomes]
    )
    projectors = np.array([_projector(*outcome) for outcome in outcomes])
    return projectors, counts, totals


def linear_inversion(table: CountTable) -> np.ndarray:
    """
    Density matrix from Pauli correlations of the measured frequencies; it may
    have negative eigenvalues.
    """
    correlations: dict[tuple[str, str], list[float]] = {("I", "I"): [1.0]}
    for setting in REQUIRED_SETTINGS:
        rows = [row for row in table.rows if row.setting == setting]
        total = sum(row.counts for row in rows)
        if total == 0:
            continue
        first_basis, second_basis = setting
        for key, value in (
            (
                (first_basis, second_basis),
                sum(_SIGNS[r.proj_q1] * _SIGNS[r.proj_q2] * r.counts for r in rows),
            ),
            ((first_basis, "I"), sum(_SIGNS[r.proj_q1] * r.counts for r in rows)),
            (("I", second_basis), sum(_SIGNS[r.proj_q2] * r.counts for r in rows)),
        ):
            correlations.setdefault(key, []).append(value / total)
    return (
        sum(
            np.mean(values) * np.kron(PAULI[first], PAULI[second])
            for (first, second), values in correlations.items()
        )
        / 4
    )


def _pack(lower: np.ndarray) -> np.ndarray:
    return np.concatenate(
        [np.diag(lower).real, lower[_TRIL].real, lower[_TRIL].imag]
    )


def _unpack(params: np.ndarray) -> np.ndarray:
    lower = np.diag(params[:4]).astype(complex)
    lower[_TRIL] = params[4:10] + 1j * params[10:16]
    return lower


def _negative_log_likelihood(params, projectors, counts, totals):
    """
    Poisson negative log-likelihood sum(N p - n log p) of rho = T T^dagger / Tr
    and its gradient in the 16 real parameters of T.
    """
    lower = _unpack(params)
    unnormalized = lower @ lower.conj().T
    trace = float(np.trace(unnormalized).real)
    probabilities = np.einsum("ijk,kj->i", projectors, unnormalized).real / trace
    probabilities = np.clip(probabilities, _PROBABILITY_FLOOR, None)
    observed = counts > 0
    value = float(
        np.sum(totals * probabilities)
        - np.sum(counts[observed] * np.log(probabilities[observed]))
    )
    weights = totals - counts / probabilities
    gradient_matrix = (
        np.einsum("i,ijk->jk", weights, projectors)
        - np.dot(weights, probabilities) * np.eye(4)
    ) / trace
    # dL/dT_jk = 2 (T^dagger G)_kj
    coupling = (lower.conj().T @ gradient_matrix).T
    gradient = np.concatenate(
        [
            2 * np.diag(coupling).real,
            2 * coupling[_TRIL].real,
            -2 * coupling[_TRIL].imag,
        ]
    )
    return value, gradient


def _maximum_likelihood(table: CountTable) -> tuple[TwoQubitState, float, list[float], int, bool]:
    projectors, counts, totals = _likelihood_data(table)
    start = linear_inversion(table)
    start = (start + start.conj().T) / 2
    values, vectors = np.linalg.eigh(start)
    values = np.clip(values, _START_FLOOR, None)
    start = (vectors * values) @ vectors.conj().T
    start /= np.trace(start).real
    params = _pack(np.linalg.cholesky(start))

    trace: list[float] = []

    def record(current):
        trace.append(-_negative_log_likelihood(current, projectors, counts, totals)[0])

    _log.debug("Starting likelihood search over %d outcomes", len(counts))
    result = minimize(
        _negative_log_likelihood,
        params,
        args=(projectors, counts, totals),
        jac=True,
        method="L-BFGS-B",
        callback=record,
        options={
            "maxiter": SETTINGS.MLE_MAX_ITERATIONS,
            "ftol": SETTINGS.MLE_TOLERANCE,
            "gtol": 1e-12,
        },
    )
    _log.debug("Likelihood search stopped after %d iterations: %s", result.nit, result.message)
    lower = _unpack(result.x)
    rho = lower @ lower.conj().T
    rho /= np.trace(rho).real
    return TwoQubitState(rho=rho), -float(result.fun), trace, int(result.nit), bool(result.success)


def reconstruct_state(
    table: CountTable,
    n_mc: int = 0,
    seed: Optional[int] = None,
    target: Optional[PureState] = None,
) -> ReconstructionResult:
    """
    Maximum-likelihood two-qubit state over a complete nine-setting table.

    With n_mc > 0 the metrics get Poisson Monte Carlo standard deviations.
    """
    check_nonzero(table)
    check_complete_settings(table)
    target = target or make_bell_phi_plus()
    rho, log_likelihood, trace, iterations, converged = _maximum_likelihood(table)
    stds = {"fidelity": 0.0, "purity": 0.0, "concurrence": 0.0}
    if n_mc:
        check_mc_samples(n_mc)
        samples = {name: [] for name in stds}
        for resampled in _resampled_tables(table, n_mc, seed):
            sample_rho = _maximum_likelihood(resampled)[0]
            samples["fidelity"].append(fidelity(sample_rho, target))
            samples["purity"].append(purity(sample_rho))
            samples["concurrence"].append(concurrence(sample_rho))
        stds = {name: float(np.std(values, ddof=1)) for name, values in samples.items()}
    return ReconstructionResult(
        rho=rho,
        log_likelihood=log_likelihood,
        likelihood_trace=trace,
        iterations=iterations,
        converged=converged,
        fidelity=fidelity(rho, target),
        fidelity_std=stds["fidelity"],
        purity=purity(rho),
        purity_std=stds["purity"],
        concurrence=concurrence(rho),
        concurrence_std=stds["concurrence"],
        n_mc=n_mc,
        seed=seed if n_mc else None,
    )


def basis_fidelity_from_counts(table: CountTable, which: str) -> float:
    """
    Ratio of counts in the correct output states to all transmitted counts
    over the inputs of one basis map.
    """
    check_basis_map(which)
    basis_map = BASIS_MAPS[which]
    proj_labels = BASIS_LABELS[basis_map["proj"]]
    transmitted, correct = 0, 0
    for row in table.rows:
        if row.prep not in basis_map["correct"]:
            continue
        if row.proj_q1 not in proj_labels or row.proj_q2 not in proj_labels:
            continue
        transmitted += row.counts
        if row.proj in basis_map["correct"][row.prep]:
            correct += row.counts
    if transmitted == 0:
        CustomValidations.raize_custom_error(
            error_type="zero_transmitted",
            loc=which,
            msg=f"No transmitted counts for {which}",
            inp=0,
            ctx={"counts": "> 0"},
        )
    return correct / transmitted


def process_reconstruction(
    table: CountTable, log_level: int = logging.WARNING
) -> ProcessReconstruction:
    """
    Diagonal chi from the three basis fidelities:
    chi_00 = F_P, chi_zz = F_ZZ - F_P, chi_xx = F_XX - F_P, chi_xy = F_XY - F_P.

    Diagonals in [-0.02, 0) are clamped and logged at log_level; lower ones
    are rejected. Monte Carlo resamples log at DEBUG.
    """
    fidelities = {
        which: basis_fidelity_from_counts(table, which) for which in BASIS_MAPS
    }
    process = process_fidelity_from_basis(
        fidelities["ZtoZ"], fidelities["XtoX"], fidelities["XtoY"]
    )
    diagonal = np.array(
        [
            process.raw,
            fidelities["ZtoZ"] - process.raw,
            fidelities["XtoY"] - process.raw,
            fidelities["XtoX"] - process.raw,
        ]
    )
    if diagonal.min() < -0.02:
        CustomValidations.raize_custom_error(
            error_type="chi_inconsistent",
            loc="chi_diag",
            msg="Basis fidelities are inconsistent with a diagonal process matrix",
            inp=float(diagonal.min()),
            ctx={"chi_diag": ">= -0.02"},
        )
    clamped = bool(diagonal.min() < 0)
    if clamped:
        _log.log(log_level, "Clamping chi diagonal %.4f to zero", diagonal.min())
        diagonal = np.clip(diagonal, 0.0, None)
    deviation = float(diagonal.sum() - 1.0)
    chi = ProcessMatrix.from_diagonal(diagonal / diagonal.sum())
    return ProcessReconstruction(
        chi=chi,
        basis_fidelities=fidelities,
        process_fidelity=process,
        capability_bound=max(0.0, 2 * process.value - 1),
        diagonal_sum_deviation=deviation,
        chi_clamped=clamped,
    )


def _state_metric(metric: Callable[[TwoQubitState], float]) -> Callable[[CountTable], float]:
    def estimate(table: CountTable) -> float:
        check_nonzero(table)
        check_complete_settings(table)
        return metric(_maximum_likelihood(table)[0])

    return estimate


ESTIMATORS: dict[str, Callable[[CountTable], float]] = {
    "fidelity": _state_metric(lambda rho: fidelity(rho, make_bell_phi_plus())),
    "purity": _state_metric(purity),
    "concurrence": _state_metric(concurrence),
    "FZZ": lambda table: basis_fidelity_from_counts(table, "ZtoZ"),
    "FXX": lambda table: basis_fidelity_from_counts(table, "XtoX"),
    "FXY": lambda table: basis_fidelity_from_counts(table, "XtoY"),
    "process_fidelity": lambda table: process_reconstruction(
        table, logging.DEBUG
    ).process_fidelity.value,
    "capability_bound": lambda table: process_reconstruction(
        table, logging.DEBUG
    ).capability_bound,
}


def _resampled_tables(table: CountTable, n_mc: int, seed: Optional[int]):
    seed = SETTINGS.DEFAULT_SEED if seed is None else seed
    original = np.array([row.counts for row in table.rows])
    for index in range(n_mc):
        yield table.with_counts(make_rng(seed + index).poisson(original))


def monte_carlo_errors(
    table: CountTable,
    estimator: Union[str, Callable[[CountTable], float]],
    n_mc: Optional[int] = None,
    seed: Optional[int] = None,
) -> Estimate:
    """
    Resamples every count as Poisson(count) with seed + index per resample and
    returns the sample mean and standard deviation of the estimator.
    """
    n_mc = check_mc_samples(SETTINGS.MC_SAMPLES if n_mc is None else n_mc)
    seed = SETTINGS.DEFAULT_SEED if seed is None else seed
    if isinstance(estimator, str):
        if estimator not in ESTIMATORS:
            CustomValidations.raize_custom_error(
                error_type="invalid",
                loc="estimator",
                msg=f"Allowed values are {list(ESTIMATORS)}",
                inp=estimator,
                ctx={"estimator": "named estimator"},
            )
        estimator = ESTIMATORS[estimator]
    values = np.array([estimator(sample) for sample in _resampled_tables(table, n_mc, seed)])
    return Estimate(
        mean=float(values.mean()), std=float(values.std(ddof=1)), n_mc=n_mc, seed=seed
    )


def channel_process_counts(
    chi: ProcessMatrix,
    total_per_input: Optional[int] = None,
    seed: Optional[int] = None,
) -> CountTable:
    """
    Prep/proj count table of the three basis maps for a chi channel.

    Without a seed the counts are the rounded expected values; with one, every
    input is a multinomial draw over its four outputs and the rejected events.
    """
    total = int(_resolve_total(total_per_input, "total_per_input"))
    rng = None if seed is None else make_rng(seed)
    rows = []
    for which in BASIS_MAPS:
        table = channel_outcome_probabilities(chi, which)
        for prep in BASIS_MAPS[which]["correct"]:
            outputs = [key[1] for key in table if key[0] == prep]
            weights = np.array([table[(prep, output)] for output in outputs])
            if rng is None:
                counts = np.rint(total * weights)
            else:
                lost = max(0.0, 1.0 - weights.sum())
                draws = np.append(weights, lost)
                counts = rng.multinomial(total, draws / draws.sum())[:-1]
            for output, value in zip(outputs, counts):
                rows.append(
                    CountRow(
                        prep_q1=prep[0],
                        prep_q2=prep[1],
                        proj_q1=output[0],
                        proj_q2=output[1],
                        counts=int(value),
                    )
                )
    return CountTable(rows=rows)


def ideal_process_counts(
    total_per_input: Optional[int] = None, seed: Optional[int] = None
) -> CountTable:
    """
    Process count table of the ideal parity check.
    """
    return channel_process_counts(ProcessMatrix.ideal(), total_per_input, seed)


def _read_counts(handle: TextIO, origin: str) -> CountTable:
    reader = csv.reader(handle)
    header = next(reader, None)
    if header is None or tuple(cell.strip() for cell in header) != CSV_HEADER:
        CustomValidations.raize_custom_error(
            error_type="malformed_row",
            loc=f"{origin}:1",
            msg=f"Header must be {','.join(CSV_HEADER)}",
            inp=",".join(header or []),
            ctx={"line": 1},
        )
    rows = []
    for record in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in record):
            continue
        if len(record) != len(CSV_HEADER):
            CustomValidations.raize_custom_error(
                error_type="malformed_row",
                loc=f"{origin}:{line}",
                msg=f"Line {line} has {len(record)} fields, expected {len(CSV_HEADER)}",
                inp=",".join(record),
                ctx={"line": line},
            )
        labels = [cell.strip() for cell in record[:4]]
        unknown = [label for label in labels if label not in COUNT_LABELS]
        if unknown:
            CustomValidations.raize_custom_error(
                error_type="unknown_label",
                loc=f"{origin}:{line}",
                msg=f"Unknown label {unknown[0]} on line {line}",
                inp=unknown[0],
                ctx={"labels": list(COUNT_LABELS), "line": line},
            )
        try:
            counts, duration = int(record[4]), float(record[5])
        except ValueError:
            counts, duration = -1, -1.0
        if counts < 0 or duration < 0:
            CustomValidations.raize_custom_error(
                error_type="malformed_row",
                loc=f"{origin}:{line}",
                msg=f"Line {line} needs a non-negative integer count and duration",
                inp=",".join(record),
                ctx={"line": line},
            )
        rows.append(
            CountRow(
                prep_q1=labels[0],
                prep_q2=labels[1],
                proj_q1=labels[2],
                proj_q2=labels[3],
                counts=counts,
                duration_s=duration,
            )
        )
    return CountTable(rows=rows)


def ingest_counts(source: Union[str, Path, TextIO]) -> CountTable:
    """
    Reads a count CSV from a path or an open text stream.
    """
    if not isinstance(source, (str, Path)):
        return _read_counts(source, "stream")
    path = Path(source)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            return _read_counts(handle, str(path))
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


def write_counts(table: CountTable, target: Union[str, Path, TextIO]):
    """
    Writes a count table as CSV to a path or an open text stream.
    """
    if isinstance(target, (str, Path)):
        with Path(target).open("w", newline="", encoding="utf-8") as handle:
            write_counts(table, handle)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in table.rows:
        writer.writerow(
            [
                row.prep_q1,
                row.prep_q2,
                row.proj_q1,
                row.proj_q2,
                row.counts,
                round_significant(row.duration_s),
            ]
        )
