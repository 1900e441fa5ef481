# -*- coding: utf-8 -*-
"""
tests/test_fusionchannel.py
Date: 19/10/2026
"""
import math

import numpy as np
import pytest

from dependencies import FusionKitError
from fusionchannel.controller import (
    FUSION_BASIS,
    basis_fidelity_from_channel,
    basis_fidelity_model,
    channel_outcome_probabilities,
    compose_total_chi,
    experimental_fusion,
    fusion_kraus_set,
    ideal_fusion,
    leak_probability,
    phase_damp_two_qubit,
    phase_damping_kraus_set,
    process_fidelity_from_basis,
    process_operator_set,
    total_process_curve,
)
from fusionchannel.middleware import parse_chi
from fusionchannel.schema import BASIS_MAPS, DephasingFunction, ProcessMatrix
from quantumcore.controller import fidelity, make_bell_phi_plus, matrices_equal, product_state
from quantumcore.schema import TwoQubitState


def test_fusion_kraus_set_is_complete_on_input_space():
    kraus = fusion_kraus_set()
    assert len(FUSION_BASIS) == 6
    expected = np.diag([1, 1, 1, 1, 0, 0]).astype(complex)
    assert matrices_equal(kraus.completeness(), expected)


def test_process_operators_are_orthogonal():
    operators = process_operator_set().operators
    for row, left in enumerate(operators):
        for col, right in enumerate(operators):
            overlap = np.trace(left.conj().T @ right)
            assert overlap == pytest.approx(2.0 if row == col else 0.0)


def test_ideal_fusion_of_plus_plus_gives_phi_plus():
    rho_in = product_state("P", "P").density()
    rho_out, probability = ideal_fusion(rho_in)
    assert probability == pytest.approx(0.5)
    assert leak_probability(rho_in) == pytest.approx(0.5)
    assert fidelity(rho_out.normalized(), make_bell_phi_plus()) == pytest.approx(1.0)


def test_ideal_fusion_of_mixed_input_transmits_half(mixed):
    rho_out, probability = ideal_fusion(mixed)
    assert probability == pytest.approx(0.5)
    assert matrices_equal(rho_out.normalized().rho, np.diag([0.5, 0, 0, 0.5]))


def test_ideal_fusion_rejects_hv():
    rho_out, probability = ideal_fusion(product_state("H", "V").density())
    assert probability == pytest.approx(0.0)
    with pytest.raises(FusionKitError) as error:
        rho_out.normalized()
    assert error.value.error_type == "zero_trace"


def test_experimental_fusion_with_ideal_chi_matches_parity_check(random_states):
    for state in random_states:
        ideal_out, ideal_prob = ideal_fusion(state)
        out, prob = experimental_fusion(state, ProcessMatrix.ideal())
        assert prob == pytest.approx(ideal_prob)
        assert matrices_equal(out.rho, ideal_out.rho, atol=1e-12)


def test_experimental_fusion_success_probability(random_states, measured_chi):
    for state in random_states:
        _, prob = experimental_fusion(state, measured_chi)
        even = state.rho[0, 0].real + state.rho[3, 3].real
        expected = (measured_chi.chi_00 + measured_chi.chi_zz) * even + (
            measured_chi.chi_xy + measured_chi.chi_xx
        ) * (1 - even)
        assert prob == pytest.approx(expected)


def test_experimental_fusion_of_mixed_input_transmits_half(mixed, measured_chi):
    _, prob = experimental_fusion(mixed, measured_chi)
    assert prob == pytest.approx(0.5)


def test_full_chi_with_zero_offdiag_equals_diagonal_model(random_states, measured_chi):
    full = ProcessMatrix(
        chi_00=measured_chi.chi_00,
        chi_zz=measured_chi.chi_zz,
        chi_xy=measured_chi.chi_xy,
        chi_xx=measured_chi.chi_xx,
        chi_offdiag=np.zeros((4, 4)),
    )
    for state in random_states[:5]:
        diagonal_out, _ = experimental_fusion(state, measured_chi)
        full_out, _ = experimental_fusion(state, full)
        assert matrices_equal(diagonal_out.rho, full_out.rho)


def test_basis_fidelities_from_channel_match_chi_diagonals(measured_chi):
    assert basis_fidelity_model(measured_chi, "ZtoZ") == pytest.approx(0.958)
    assert basis_fidelity_model(measured_chi, "XtoX") == pytest.approx(0.768)
    assert basis_fidelity_model(measured_chi, "XtoY") == pytest.approx(0.759)
    for which in BASIS_MAPS:
        assert basis_fidelity_from_channel(measured_chi, which) == pytest.approx(
            basis_fidelity_model(measured_chi, which)
        )


def test_process_fidelity_from_basis_example():
    result = process_fidelity_from_basis(0.958, 0.768, 0.759)
    assert result.value == pytest.approx(0.7425)
    assert result.valid
    assert max(0.0, 2 * result.value - 1) == pytest.approx(0.485)


def test_process_fidelity_is_clamped_and_flagged():
    result = process_fidelity_from_basis(0.2, 0.2, 0.2)
    assert result.value == 0.0
    assert result.raw == pytest.approx(-0.2)
    assert not result.valid
    with pytest.raises(FusionKitError) as error:
        process_fidelity_from_basis(1.1, 0.5, 0.5)
    assert error.value.error_type == "domain"


def test_phase_damping_kraus_set_is_complete():
    for f_value in (0.0, 0.3, math.exp(-0.5), 1.0):
        kraus = phase_damping_kraus_set(f_value)
        assert matrices_equal(kraus.completeness(), np.eye(4))


def test_phase_damping_scales_coherences(phi_plus):
    f_value = 0.6
    damped = phase_damp_two_qubit(phi_plus, f_value)
    assert damped.rho[0, 3].real == pytest.approx(0.5 * f_value**2)
    assert damped.rho[0, 0].real == pytest.approx(0.5)
    plus_plus = product_state("P", "P").density()
    assert phase_damp_two_qubit(plus_plus, f_value).rho[0, 1].real == pytest.approx(0.25 * f_value)


def test_phase_damping_rejects_out_of_range_f(phi_plus):
    with pytest.raises(FusionKitError) as error:
        phase_damp_two_qubit(phi_plus, 1.5)
    assert error.value.error_type == "domain"


def test_damping_at_f_one_is_identity(random_states):
    for state in random_states[:5]:
        assert matrices_equal(phase_damp_two_qubit(state, 1.0).rho, state.rho, atol=1e-12)


def test_ideal_chi_fully_dephased():
    chi_t = compose_total_chi(ProcessMatrix.ideal(), 0.0)
    assert chi_t.diagonal() == pytest.approx([0.5, 0.5, 0.0, 0.0])


def test_ideal_chi_at_one_pulse_delay():
    f_value = DephasingFunction(sigma_t_ps=1.0).value(1.0)
    assert f_value == pytest.approx(math.exp(-0.5))
    chi_t = compose_total_chi(ProcessMatrix.ideal(), f_value)
    assert chi_t.chi_00 == pytest.approx(0.684, abs=1e-3)
    assert chi_t.chi_zz == pytest.approx(0.316, abs=1e-3)


def test_compose_preserves_pair_sums(measured_chi):
    chi_t = compose_total_chi(measured_chi, 0.37)
    assert chi_t.chi_00 + chi_t.chi_zz == pytest.approx(measured_chi.chi_00 + measured_chi.chi_zz)
    assert chi_t.chi_xy + chi_t.chi_xx == pytest.approx(measured_chi.chi_xy + measured_chi.chi_xx)
    assert compose_total_chi(measured_chi, 1.0).diagonal() == pytest.approx(measured_chi.diagonal())


def test_compose_matches_sequential_channel(random_states, measured_chi):
    for f_value in (0.0, 0.45, 0.9):
        chi_t = compose_total_chi(measured_chi, f_value)
        for state in random_states:
            fused, _ = experimental_fusion(state, measured_chi)
            sequential = phase_damp_two_qubit(fused, f_value)
            composed, _ = experimental_fusion(state, chi_t)
            assert matrices_equal(sequential.rho, composed.rho, atol=1e-10)


def test_total_process_curve_is_symmetric_and_peaks_at_zero(measured_chi):
    points = total_process_curve(measured_chi, [-2.0, -1.0, 0.0, 1.0, 2.0])
    fidelities = [point.process_fidelity for point in points]
    assert fidelities[2] == pytest.approx(measured_chi.chi_00)
    assert fidelities[0] == pytest.approx(fidelities[4])
    assert fidelities[1] < fidelities[2]
    assert points[2].capability_bound == pytest.approx(0.485)


def test_tabulated_dephasing_interpolates():
    dephasing = DephasingFunction(
        kind="custom-tabulated", table_delays_ps=[0.0, 1.0, 2.0], table_values=[1.0, 0.5, 0.1]
    )
    assert dephasing.value(-0.5) == pytest.approx(0.75)
    assert dephasing.value(5.0) == pytest.approx(0.1)
    with pytest.raises(FusionKitError):
        DephasingFunction(kind="custom-tabulated", table_delays_ps=[1.0, 0.0], table_values=[1.0, 0.5])


def test_outcome_probabilities_give_basis_fidelity(measured_chi):
    for which, basis_map in BASIS_MAPS.items():
        table = channel_outcome_probabilities(measured_chi, which)
        assert len(table) == 16
        correct = sum(
            weight for (prep, out), weight in table.items() if out in basis_map["correct"][prep]
        )
        assert 0.5 * correct == pytest.approx(basis_fidelity_model(measured_chi, which))


def test_process_matrix_validation():
    with pytest.raises(FusionKitError) as error:
        ProcessMatrix(chi_00=0.5, chi_zz=0.2)
    assert error.value.error_type == "invalid_chi"
    with pytest.raises(FusionKitError):
        ProcessMatrix(chi_00=1.2, chi_zz=-0.2)
    with pytest.raises(FusionKitError):
        parse_chi("0.5,0.5")
    assert parse_chi("0.7,0.2,0.05,0.05") == [0.7, 0.2, 0.05, 0.05]


def test_unknown_basis_map_is_rejected(measured_chi):
    with pytest.raises(FusionKitError) as error:
        basis_fidelity_model(measured_chi, "ZtoX")
    assert error.value.error_type == "invalid"


def test_unnormalized_input_is_rejected():
    rho = TwoQubitState(rho=np.diag([0.25, 0, 0, 0.25]), trace_normalized=False)
    with pytest.raises(FusionKitError) as error:
        ideal_fusion(rho)
    assert error.value.error_type == "unnormalized"


def _random_chi(rng) -> ProcessMatrix:
    return ProcessMatrix.from_diagonal(rng.dirichlet(np.ones(4)))


def test_compose_identities_over_random_channels(rng, random_states):
    for _ in range(100):
        chi_f, f_value = _random_chi(rng), float(rng.uniform(0.0, 1.0))
        chi_t = compose_total_chi(chi_f, f_value)
        assert sum(chi_t.diagonal()) == pytest.approx(1.0, abs=1e-9)
        for state in random_states[:3]:
            fused, _ = experimental_fusion(state, chi_f)
            composed, _ = experimental_fusion(state, chi_t)
            assert matrices_equal(phase_damp_two_qubit(fused, f_value).rho, composed.rho, atol=1e-10)


def test_mixed_input_transmits_half_for_any_chi(rng, mixed):
    for _ in range(50):
        _, prob = experimental_fusion(mixed, _random_chi(rng))
        assert prob == pytest.approx(0.5, abs=1e-12)


def test_count_ratio_matches_basis_fidelity_over_random_channels(rng):
    for _ in range(50):
        chi = _random_chi(rng)
        for which, basis_map in BASIS_MAPS.items():
            table = channel_outcome_probabilities(chi, which)
            correct = sum(
                weight for (prep, out), weight in table.items() if out in basis_map["correct"][prep]
            )
            assert correct / sum(table.values()) == pytest.approx(
                basis_fidelity_model(chi, which), abs=1e-9
            )
