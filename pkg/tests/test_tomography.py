# -*- coding: utf-8 -*-
"""
tests/test_tomography.py
Date: 19/10/2026
"""
import io
import logging
import math

import numpy as np
import pytest

from conftest import werner
from dependencies import FusionKitError
from fusionchannel.controller import compose_total_chi
from fusionchannel.schema import ProcessMatrix
from quantumcore.controller import (
    concurrence,
    fidelity,
    make_bell_phi_plus,
    product_state,
    random_pure_state,
)
from tomography.controller import (
    ESTIMATORS,
    basis_fidelity_from_counts,
    channel_process_counts,
    ideal_process_counts,
    ingest_counts,
    linear_inversion,
    monte_carlo_errors,
    noiseless_counts,
    process_reconstruction,
    reconstruct_state,
    simulate_counts,
    write_counts,
)
from tomography.middleware import REQUIRED_SETTINGS
from tomography.schema import CSV_HEADER, CountRow, CountTable

HEADER = ",".join(CSV_HEADER) + "\n"


def test_product_state_counts_land_on_one_outcome():
    table = simulate_counts(product_state("H", "H").density(), settings=["ZZ"], total_per_setting=500, seed=1)
    counts = {row.proj: row.counts for row in table.rows}
    assert counts == {("H", "H"): 500, ("H", "V"): 0, ("V", "H"): 0, ("V", "V"): 0}


def test_simulate_counts_is_seeded(phi_plus):
    first = simulate_counts(phi_plus, seed=621)
    assert first == simulate_counts(phi_plus, seed=621)
    assert len(first.rows) == 36
    assert first.settings() == {setting: 4 for setting in REQUIRED_SETTINGS}


def test_linear_inversion_of_noiseless_counts(phi_plus):
    rho = linear_inversion(noiseless_counts(phi_plus))
    assert np.allclose(rho, phi_plus.rho, atol=1e-12)


def test_mle_of_noiseless_bell_counts(phi_plus):
    result = reconstruct_state(noiseless_counts(phi_plus))
    assert result.fidelity >= 0.999
    assert result.purity >= 0.99
    assert result.rho.trace == pytest.approx(1.0)
    assert np.linalg.eigvalsh(result.rho.rho).min() >= -1e-12
    assert len(result.likelihood_trace) == result.iterations


def test_mle_of_sampled_werner_state(rng):
    state = werner(0.8)
    table = simulate_counts(state, total_per_setting=20000, seed=int(rng.integers(1 << 30)))
    result = reconstruct_state(table)
    assert result.fidelity == pytest.approx(fidelity(state, make_bell_phi_plus()), abs=0.02)
    assert result.concurrence == pytest.approx(concurrence(state), abs=0.03)
    assert result.to_json()["metrics"]["fidelity"]["±"] == 0.0
    assert result.likelihood_trace == sorted(result.likelihood_trace)


def test_mle_rejects_incomplete_and_empty_tables(phi_plus):
    with pytest.raises(FusionKitError) as error:
        reconstruct_state(simulate_counts(phi_plus, settings=["ZZ", "XX"], seed=3))
    assert error.value.error_type == "incomplete_settings"
    assert "ZX" in str(error.value)
    empty = noiseless_counts(phi_plus).with_counts([0] * 36)
    with pytest.raises(FusionKitError) as error:
        reconstruct_state(empty)
    assert error.value.error_type == "zero_counts"


def test_mle_with_monte_carlo_errors(phi_plus):
    table = simulate_counts(phi_plus, total_per_setting=2000, seed=7)
    result = reconstruct_state(table, n_mc=100, seed=11)
    assert result.n_mc == 100
    assert result.seed == 11
    assert 0.0 < result.fidelity_std < 0.05


def test_ideal_process_counts_give_unit_fidelities():
    table = ideal_process_counts(10000)
    for which in ("ZtoZ", "XtoX", "XtoY"):
        assert basis_fidelity_from_counts(table, which) == pytest.approx(1.0)
    report = process_reconstruction(table)
    assert report.chi.diagonal() == pytest.approx([1.0, 0.0, 0.0, 0.0])
    assert report.capability_bound == pytest.approx(1.0)


def test_process_reconstruction_recovers_measured_chi(measured_chi):
    report = process_reconstruction(channel_process_counts(measured_chi, 10**12))
    assert report.basis_fidelities["ZtoZ"] == pytest.approx(0.958, abs=1e-9)
    assert report.basis_fidelities["XtoX"] == pytest.approx(0.768, abs=1e-9)
    assert report.basis_fidelities["XtoY"] == pytest.approx(0.759, abs=1e-9)
    assert report.chi.diagonal() == pytest.approx(measured_chi.diagonal(), abs=1e-9)
    assert report.process_fidelity.value == pytest.approx(0.7425, abs=1e-9)
    assert report.capability_bound == pytest.approx(0.485, abs=1e-9)
    assert not report.chi_clamped


def test_process_reconstruction_of_dephased_ideal_gate():
    chi_t = compose_total_chi(ProcessMatrix.ideal(), math.exp(-0.5))
    report = process_reconstruction(channel_process_counts(chi_t, 10**12))
    assert report.chi.chi_00 == pytest.approx(0.684, abs=1e-3)
    assert report.chi.chi_zz == pytest.approx(0.316, abs=1e-3)


def test_named_estimators_agree_with_direct_calls(measured_chi):
    table = channel_process_counts(measured_chi, 10**12)
    assert ESTIMATORS["FZZ"](table) == pytest.approx(0.958, abs=1e-9)
    assert ESTIMATORS["process_fidelity"](table) == pytest.approx(0.7425, abs=1e-9)
    assert ESTIMATORS["capability_bound"](table) == pytest.approx(0.485, abs=1e-9)


def test_sampled_process_counts_are_seeded(measured_chi):
    first = channel_process_counts(measured_chi, 5000, seed=5)
    assert first == channel_process_counts(measured_chi, 5000, seed=5)
    assert first.total < 3 * 4 * 5000


def test_monte_carlo_errors_on_basis_fidelity(measured_chi):
    table = channel_process_counts(measured_chi, 5000, seed=5)
    estimate = monte_carlo_errors(table, "FZZ", n_mc=200, seed=9)
    assert estimate.mean == pytest.approx(basis_fidelity_from_counts(table, "ZtoZ"), abs=0.01)
    assert 0.0 < estimate.std < 0.02
    assert monte_carlo_errors(table, "FZZ", n_mc=200, seed=9) == estimate


def test_monte_carlo_guards(measured_chi):
    table = channel_process_counts(measured_chi, 1000)
    with pytest.raises(FusionKitError) as error:
        monte_carlo_errors(table, "FZZ", n_mc=50)
    assert error.value.error_type == "domain"
    with pytest.raises(FusionKitError) as error:
        monte_carlo_errors(table, "visibility", n_mc=100)
    assert error.value.error_type == "invalid"


def test_chi_inconsistent_counts_are_rejected():
    entries = [
        (("H", "H"), ("H", "H")),
        (("H", "H"), ("H", "V")),
        (("P", "P"), ("P", "P")),
        (("P", "P"), ("L", "R")),
    ]
    rows = [
        CountRow(prep_q1=prep[0], prep_q2=prep[1], proj_q1=proj[0], proj_q2=proj[1], counts=100)
        for prep, proj in entries
    ]
    with pytest.raises(FusionKitError) as error:
        process_reconstruction(CountTable(rows=rows))
    assert error.value.error_type == "chi_inconsistent"


def test_zero_transmitted_basis_is_rejected():
    table = CountTable(rows=[CountRow(prep_q1="H", prep_q2="H", proj_q1="H", proj_q2="H", counts=10)])
    with pytest.raises(FusionKitError) as error:
        basis_fidelity_from_counts(table, "XtoX")
    assert error.value.error_type == "zero_transmitted"


def test_duplicate_rows_are_summed():
    table = ingest_counts(io.StringIO(HEADER + "P,P,H,H,10,621\nP,P,H,H,5,621\nP,P,V,V,7,621\n"))
    assert table.duplicates_merged == 1
    assert {row.proj: row.counts for row in table.rows} == {("H", "H"): 15, ("V", "V"): 7}
    assert table.rows[0].duration_s == pytest.approx(1242.0)


def test_count_file_round_trip(tmp_path, phi_plus):
    table = simulate_counts(phi_plus, seed=621)
    path = tmp_path / "counts.csv"
    write_counts(table, path)
    assert ingest_counts(path) == table
    assert path.read_text(encoding="utf-8").splitlines()[0] == ",".join(CSV_HEADER)


@pytest.mark.parametrize(
    "body, error_type, line",
    [
        ("P,P,H,Q,10,621\n", "unknown_label", 2),
        ("P,P,H,H,10\n", "malformed_row", 2),
        ("P,P,H,H,10,621\nP,P,H,V,-3,621\n", "malformed_row", 3),
        ("P,P,H,H,ten,621\n", "malformed_row", 2),
    ],
)
def test_ingest_reports_bad_lines(body, error_type, line):
    with pytest.raises(FusionKitError) as error:
        ingest_counts(io.StringIO(HEADER + body))
    assert error.value.error_type == error_type
    assert error.value.detail[0]["loc"] == ["input", f"stream:{line}"]


def test_ingest_rejects_bad_header_and_missing_file(tmp_path):
    with pytest.raises(FusionKitError) as error:
        ingest_counts(io.StringIO("a,b,c\n"))
    assert error.value.error_type == "malformed_row"
    with pytest.raises(FusionKitError) as error:
        ingest_counts(tmp_path / "absent.csv")
    assert error.value.error_type == "file_error"


def test_mle_of_random_states_at_high_counts(rng):
    for index in range(50):
        state = random_pure_state(rng)
        table = simulate_counts(state.density(), total_per_setting=10**6, seed=index)
        assert reconstruct_state(table, target=state).fidelity >= 0.995


def test_monte_carlo_std_scales_with_inverse_root_counts():
    totals = (10**3, 10**4, 10**5, 10**6)
    stds = [
        monte_carlo_errors(
            simulate_counts(werner(0.8), total_per_setting=total, seed=5), "fidelity", n_mc=100, seed=17
        ).std
        for total in totals
    ]
    slope = np.polyfit(np.log10(totals), np.log10(stds), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.1)


def test_explicit_zero_totals_are_rejected(phi_plus, measured_chi):
    with pytest.raises(FusionKitError) as error:
        simulate_counts(phi_plus, total_per_setting=0)
    assert error.value.error_type == "domain"
    with pytest.raises(FusionKitError):
        noiseless_counts(phi_plus, total_per_setting=0)
    with pytest.raises(FusionKitError):
        channel_process_counts(measured_chi, 0, seed=1)
    with pytest.raises(FusionKitError):
        monte_carlo_errors(ideal_process_counts(1000), "FZZ", n_mc=0)


def test_ingest_rejects_non_utf8_file(tmp_path):
    path = tmp_path / "counts.csv"
    path.write_bytes(b"\xff\xfe" + HEADER.encode("utf-8"))
    with pytest.raises(FusionKitError) as error:
        ingest_counts(path)
    assert error.value.error_type == "file_error"
    assert error.value.detail[0]["loc"] == ["input", str(path)]


def test_resampled_clamping_logs_at_debug(caplog):
    table = channel_process_counts(ProcessMatrix.from_diagonal([0.9, 0.1, 0.0, 0.0]), 2000, seed=1)
    with caplog.at_level(logging.DEBUG, logger="tomography.controller"):
        monte_carlo_errors(table, "process_fidelity", n_mc=100, seed=3)
    clamps = [record for record in caplog.records if "Clamping chi" in record.getMessage()]
    assert clamps
    assert {record.levelno for record in clamps} == {logging.DEBUG}
    caplog.clear()
    with caplog.at_level(logging.DEBUG, logger="tomography.controller"):
        result = process_reconstruction(table)
    assert result.chi_clamped
    assert [record.levelno for record in caplog.records if "Clamping chi" in record.getMessage()] == [
        logging.WARNING
    ]
