# -*- coding: utf-8 -*-
"""
sourcemodel/controller.py
Date: 19/10/2026
"""
import itertools
import logging
import math
from collections import Counter
from typing import Optional

import numpy as np

from dependencies import BASIS_LABELS, CustomValidations
from interference.controller import FPBS_STAGE, apply_stage, waveplate_stage
from interference.schema import ModeExpression
from quantumcore.controller import (
    KETS,
    PAULI,
    fidelity,
    make_bell_phi_plus,
    waveplate_matrix,
)
from quantumcore.schema import TwoQubitState

from .schema import FockTerm, HigherOrderReport, SourceParams

_log = logging.getLogger(__name__)

DETECTOR_MODEL = "threshold-split"
SINGLE_PAIRS = {"H1": 1, "H2": 1}

# Input half-wave plates rotate H into the diagonal state before the FPBS.
DIAGONAL_STAGE = waveplate_stage(waveplate_matrix("HWP", math.pi / 8))


def fwm_state(params: SourceParams) -> list[FockTerm]:
    """
    Truncated two-mode squeezed state N (|0,0> + a|1,1> + a^2|2,2> + ...)
    over signal and idler, up to fock_cutoff pairs.
    """
    norm_sq = sum(params.mean_pairs**pairs for pairs in range(params.fock_cutoff + 1))
    terms = []
    for pairs in range(params.fock_cutoff + 1):
        amplitude = params.alpha**pairs / math.sqrt(norm_sq)
        if amplitude:
            terms.append(
                FockTerm(occupation={"signal": pairs, "idler": pairs}, amplitude=amplitude)
            )
    return terms


def heralded_signal(params: SourceParams) -> list[FockTerm]:
    """
    Signal state after an idler click, as unnormalized weights eta_n n^(n-1).

    With first_order set only one and two photons are kept.
    """
    top = 2 if params.first_order else params.fock_cutoff
    terms = []
    for photons in range(1, top + 1):
        weight = params.eta_n(photons) * params.mean_pairs ** (photons - 1)
        if weight > 0:
            terms.append(FockTerm(occupation={"signal": photons}, weight=weight))
    return terms


def two_source_heralded(params: SourceParams) -> list[FockTerm]:
    """
    Normalized mixture of |n H, m H> inputs to the FPBS.

    First order: |H,H> with weight 1 and |H,2H>, |2H,H> with weight 2 n gamma
    each. Otherwise the product of the two heralded signal states.
    """
    if params.first_order:
        higher = 2 * params.mean_pairs * params.gamma
        raw = [((1, 1), 1.0), ((1, 2), higher), ((2, 1), higher)]
    else:
        signal = heralded_signal(params)
        raw = [
            (
                (first.occupation["signal"], second.occupation["signal"]),
                first.weight * second.weight,
            )
            for first, second in itertools.product(signal, signal)
        ]
    total = sum(weight for _, weight in raw)
    return [
        FockTerm(occupation={"H1": first, "H2": second}, weight=weight / total)
        for (first, second), weight in raw
        if weight > 0
    ]


def _tagged(stage: dict, tags: set[str]) -> dict:
    return {
        f"{label}@{tag}": [(f"{out}@{tag}", coefficient) for out, coefficient in outputs]
        for label, outputs in stage.items()
        for tag in tags
    }


def _measurement_stage(first_basis: str, second_basis: str) -> dict:
    """
    Rewrites H/V creation operators of modes 1' and 2' in the measured basis:
    a_pol = sum_o <o|pol> a_o.
    """
    stage = {}
    for mode, basis in (("1'", first_basis), ("2'", second_basis)):
        for pol in "HV":
            stage[pol + mode] = [
                (outcome + mode, complex(np.vdot(KETS[outcome], KETS[pol])))
                for outcome in BASIS_LABELS[basis]
                if abs(np.vdot(KETS[outcome], KETS[pol])) > 0
            ]
    return stage


def _check_term(term: FockTerm, params: Optional[SourceParams]) -> tuple[int, int]:
    unknown = {label for label, count in term.occupation.items() if count and label not in ("H1", "H2")}
    if unknown:
        CustomValidations.raize_custom_error(
            error_type="unsupported_input",
            loc="term",
            msg="Only H photons in input modes 1 and 2 are supported",
            inp=str(sorted(unknown)),
            ctx={"occupation": "H1, H2"},
        )
    first, second = term.occupation.get("H1", 0), term.occupation.get("H2", 0)
    cutoff = params.fock_cutoff if params else 2
    if first > cutoff or second > cutoff:
        CustomValidations.raize_custom_error(
            error_type="cutoff_exceeded",
            loc="term",
            msg=f"At most {cutoff} photons per input mode",
            inp=str(term.occupation),
            ctx={"fock_cutoff": cutoff},
        )
    return first, second


def _input_expression(first: int, second: int, amplitude: complex, tags: tuple[str, str]) -> ModeExpression:
    labels = tuple(sorted((f"H1@{tags[0]}",) * first + (f"H2@{tags[1]}",) * second))
    norm = math.sqrt(math.factorial(first) * math.factorial(second))
    return ModeExpression(terms={labels: amplitude / norm})


def _fock_probability(labels: tuple[str, ...], coefficient: complex) -> float:
    return abs(coefficient) ** 2 * math.prod(
        math.factorial(count) for count in Counter(labels).values()
    )


def fpbs_fock_transform(
    term: FockTerm, params: Optional[SourceParams] = None
) -> list[FockTerm]:
    """
    Expands |n H, m H> (rotated to the diagonal and sent through the FPBS) into
    Fock terms over H1', V1', H2', V2'. Amplitudes carry the bosonic
    sqrt(k!) factors, so squared amplitudes sum to |amplitude|^2.
    """
    first, second = _check_term(term, params)
    expression = _input_expression(first, second, term.amplitude, ("0", "0"))
    for stage in (DIAGONAL_STAGE, FPBS_STAGE):
        expression = apply_stage(expression, _tagged(stage, {"0"}))
    terms = []
    for labels, coefficient in expression.terms.items():
        counts = Counter(label.split("@")[0] for label in labels)
        factor = math.sqrt(math.prod(math.factorial(count) for count in counts.values()))
        terms.append(FockTerm(occupation=dict(counts), amplitude=coefficient * factor))
    return terms


def click_response(params: SourceParams, photons: int) -> float:
    """
    Relative click weight eta_k / (k eta_1) of a detector hit by k photons.
    """
    return params.eta_n(photons) / (photons * params.eta_n(1))


def term_coincidences(
    term: FockTerm,
    params: SourceParams,
    first_basis: str,
    second_basis: str,
    distinguishable: bool = False,
) -> dict[tuple[str, str], float]:
    """
    Coincidence weights of one input term for every outcome pair of a
    polarimeter setting on modes 1' and 2'.

    A pair (o1, o2) needs at least one photon on detector o1 of mode 1' and
    on detector o2 of mode 2'. Distinguishable sources carry separate time tags.
    """
    first, second = _check_term(term, params)
    tags = ("s1", "s2") if distinguishable else ("s", "s")
    expression = _input_expression(first, second, 1.0, tags)
    for stage in (DIAGONAL_STAGE, FPBS_STAGE, _measurement_stage(first_basis, second_basis)):
        expression = apply_stage(expression, _tagged(stage, set(tags)))
    weights = {
        pair: 0.0
        for pair in itertools.product(BASIS_LABELS[first_basis], BASIS_LABELS[second_basis])
    }
    for labels, coefficient in expression.terms.items():
        probability = _fock_probability(labels, coefficient)
        clicks = Counter(label.split("@")[0] for label in labels)
        for first_out, second_out in weights:
            hits_first, hits_second = clicks[first_out + "1'"], clicks[second_out + "2'"]
            if hits_first and hits_second:
                weights[(first_out, second_out)] += (
                    term.weight
                    * probability
                    * click_response(params, hits_first)
                    * click_response(params, hits_second)
                )
    return weights


def coincidence_weights(
    params: SourceParams,
    first_basis: str,
    second_basis: str,
    distinguishable: bool = False,
) -> dict[tuple[str, str], float]:
    """
    Coincidence weights of the heralded two-source state, summed over its terms.
    """
    totals: dict[tuple[str, str], float] = {}
    for term in two_source_heralded(params):
        for pair, weight in term_coincidences(
            term, params, first_basis, second_basis, distinguishable
        ).items():
            totals[pair] = totals.get(pair, 0.0) + weight
    return totals


def higher_order_visibility(params: SourceParams) -> float:
    """
    Antidip visibility (1 - 4 n g + 6 n g^2) / (1 + 6 n g + 3 n g^2).
    """
    n_bar, gamma = params.mean_pairs, params.gamma
    return (1 - 4 * n_bar * gamma + 6 * n_bar * gamma**2) / (
        1 + 6 * n_bar * gamma + 3 * n_bar * gamma**2
    )


def brute_force_visibility(params: SourceParams) -> float:
    """
    Antidip visibility from the ++ coincidence weight of indistinguishable
    against distinguishable sources.
    """
    matched = coincidence_weights(params, "X", "X")[("P", "P")]
    separated = coincidence_weights(params, "X", "X", distinguishable=True)[("P", "P")]
    return matched / separated - 1.0


def higher_order_share(params: SourceParams) -> float:
    """
    Fraction of the Z-basis coincidence weight coming from inputs other than |H,H>.
    """
    total, single_pairs = 0.0, 0.0
    for term in two_source_heralded(params):
        weight = sum(term_coincidences(term, params, "Z", "Z").values())
        total += weight
        if term.occupation == SINGLE_PAIRS:
            single_pairs += weight
    return 1.0 - single_pairs / total


def setting_probabilities(
    params: SourceParams,
    first_basis: str,
    second_basis: str,
    pair_state: Optional[TwoQubitState] = None,
) -> dict[tuple[str, str], float]:
    """
    Normalized coincidence probabilities of one polarimeter setting.

    With pair_state given, the |H,H> term contributes its transmitted weight
    1/2 spread over the outcomes of pair_state instead of the Fock expansion.
    """
    totals = {
        pair: 0.0
        for pair in itertools.product(BASIS_LABELS[first_basis], BASIS_LABELS[second_basis])
    }
    for term in two_source_heralded(params):
        if pair_state is not None and term.occupation == SINGLE_PAIRS:
            rho = pair_state.normalized().rho
            for first_out, second_out in totals:
                ket = np.kron(KETS[first_out], KETS[second_out])
                totals[(first_out, second_out)] += (
                    term.weight * 0.5 * float(np.real(np.vdot(ket, rho @ ket)))
                )
            continue
        for pair, weight in term_coincidences(term, params, first_basis, second_basis).items():
            totals[pair] += weight
    total = sum(totals.values())
    return {pair: weight / total for pair, weight in totals.items()}


def post_selected_state(
    params: SourceParams, pair_state: Optional[TwoQubitState] = None
) -> TwoQubitState:
    """
    Linear inversion of the nine polarimeter settings computed with the
    brute-force Fock pipeline, negative eigenvalues clamped. pair_state
    replaces the ideally fused single pairs, see setting_probabilities.
    """
    signs = {labels[0]: 1.0 for labels in BASIS_LABELS.values()}
    signs.update({labels[1]: -1.0 for labels in BASIS_LABELS.values()})
    correlations = {("I", "I"): [1.0]}
    for first_basis, second_basis in itertools.product("XYZ", repeat=2):
        probabilities = setting_probabilities(params, first_basis, second_basis, pair_state)
        both = sum(signs[o1] * signs[o2] * p for (o1, o2), p in probabilities.items())
        first = sum(signs[o1] * p for (o1, _), p in probabilities.items())
        second = sum(signs[o2] * p for (_, o2), p in probabilities.items())
        correlations.setdefault((first_basis, second_basis), []).append(both)
        correlations.setdefault((first_basis, "I"), []).append(first)
        correlations.setdefault(("I", second_basis), []).append(second)
    rho = sum(
        np.mean(values) * np.kron(PAULI[first], PAULI[second])
        for (first, second), values in correlations.items()
    ) / 4
    state = TwoQubitState(rho=rho)
    if state.clamped:
        _log.debug("Post-selected state clamped at n=%s", params.mean_pairs)
    return state


def higher_order_fidelity_bound(params: SourceParams) -> float:
    """
    Fidelity of the post-selected fused state with |phi+>, assuming an ideal
    fusion gate; an upper bound for the experiment.
    """
    return fidelity(post_selected_state(params), make_bell_phi_plus())


def higher_order_report(params: SourceParams) -> HigherOrderReport:
    """
    Closed-form and brute-force visibility and the fidelity bound for one
    source setting.
    """
    state = post_selected_state(params)
    return HigherOrderReport(
        n_bar=params.mean_pairs,
        eta=params.eta,
        gamma=params.gamma,
        p0_limit=higher_order_visibility(params),
        p0_brute_force=brute_force_visibility(params),
        fidelity_bound=fidelity(state, make_bell_phi_plus()),
        higher_order_share=higher_order_share(params),
        clamped=state.clamped,
        first_order=params.first_order,
        detector_model=DETECTOR_MODEL,
    )
