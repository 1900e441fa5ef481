# -*- coding: utf-8 -*-
"""
tests/test_pipeline.py
Date: 19/10/2026
"""
import orjson
import pytest
from click.testing import CliRunner

from dependencies import FusionKitError
from fusionchannel.schema import ProcessMatrix
from main import cli
from pipeline.controller import fused_state, resolve_config, run_pipeline
from pipeline.schema import POWER_SERIES, PipelineConfig
from quantumcore.controller import fidelity, make_bell_phi_plus
from sourcemodel.controller import higher_order_fidelity_bound
from sourcemodel.schema import SourceParams
from tomography.controller import channel_process_counts, simulate_counts, write_counts


def _error_detail(stderr: str) -> list:
    return orjson.loads(stderr[stderr.index("{\n  \"detail\"") :])["detail"]


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner(mix_stderr=False)


def test_fused_state_without_multi_pairs_is_phi_plus():
    state = fused_state(ProcessMatrix.ideal(), SourceParams(mean_pairs=0.0))
    assert fidelity(state, make_bell_phi_plus()) == pytest.approx(1.0)


def test_fused_state_stays_below_bound(measured_chi):
    params = SourceParams(mean_pairs=0.037, eta=0.1)
    state = fused_state(measured_chi, params)
    assert fidelity(state, make_bell_phi_plus()) < higher_order_fidelity_bound(params) - 0.1


def test_pipeline_fidelity_falls_with_pump_power():
    rows = run_pipeline(PipelineConfig(seed=621))
    assert [row.n_bar for row in rows] == list(POWER_SERIES)
    for column in ("fidelity", "concurrence", "purity"):
        values = [getattr(row, column) for row in rows]
        assert values == sorted(values, reverse=True), column
    bounds = [row.fidelity_bound for row in rows]
    assert bounds == sorted(bounds, reverse=True)
    assert rows[0].fidelity == pytest.approx(rows[0].fidelity_bound, abs=0.02)
    assert all(row.process_fidelity == pytest.approx(1.0) for row in rows)


def test_resolve_config_precedence(tmp_path):
    config = tmp_path / "run.json"
    config.write_bytes(orjson.dumps({"seed": 5, "format": "csv", "antidip": {"grid": "-1:1:3", "p0": 0.5}}))
    resolved = resolve_config("antidip", {"grid": "-2:2:5", "p0": None}, {"config": str(config)})
    assert resolved.params == {"grid": "-2:2:5", "p0": 0.5}
    assert resolved.seed == 5
    assert resolved.format == "csv"
    override = resolve_config("antidip", {}, {"config": str(config), "seed": 9, "format": "json"})
    assert (override.seed, override.format) == (9, "json")


def test_malformed_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_text("{not json", encoding="utf-8")
    with pytest.raises(FusionKitError) as error:
        resolve_config("fit", {}, {"config": str(config)})
    assert error.value.error_type == "malformed_config"


def test_antidip_command_writes_csv(runner):
    result = runner.invoke(cli, ["antidip"])
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == "delta_tau_ps,p_coinc,expected_counts"
    assert len(lines) == 34
    centre = lines[17].split(",")
    assert float(centre[0]) == 0.0
    assert float(centre[1]) == pytest.approx(0.25)


def test_antidip_command_with_mismatch_to_file(runner, tmp_path):
    target = tmp_path / "curve.json"
    result = runner.invoke(
        cli, ["--out", str(target), "--format", "json", "antidip", "--delta-lambda", "0.06", "--grid", "-1:1:3"]
    )
    assert result.exit_code == 0, result.stderr
    report = orjson.loads(target.read_bytes())
    assert report["config"]["command"] == "antidip"
    assert report["rows"][1]["p_coinc_mismatch"] == pytest.approx(0.2474, abs=1e-4)


def test_fit_command_on_synthetic_counts(runner):
    result = runner.invoke(cli, ["--seed", "621", "fit", "--grid", "-4:4:81"])
    assert result.exit_code == 0, result.stderr
    report = orjson.loads(result.stdout)
    assert report["N_av"] == pytest.approx(401, rel=0.08)
    assert report["p0"] == pytest.approx(0.61, abs=0.15)
    assert report["config"]["seed"] == 621


def test_fuse_command(runner):
    result = runner.invoke(cli, ["fuse", "--input", "PP"])
    assert result.exit_code == 0, result.stderr
    report = orjson.loads(result.stdout)
    assert report["success_prob"] == pytest.approx(0.5)
    assert report["fidelity_phi_plus"] == pytest.approx(1.0)


def test_chi_compose_command(runner):
    result = runner.invoke(cli, ["chi-compose", "--chi", "0.7425,0.2155,0.0165,0.0255", "--f", "1.0"])
    assert result.exit_code == 0, result.stderr
    report = orjson.loads(result.stdout)
    assert report["process_fidelity"] == pytest.approx(0.7425)
    assert report["capability_bound"] == pytest.approx(0.485)


def test_chi_compose_curve(runner):
    result = runner.invoke(cli, ["--format", "csv", "chi-compose", "--delays", "-2:2:5"])
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert len(lines) == 6
    assert lines[0].startswith("delta_tau_ps,f_value,chi_00")


def test_higher_order_command(runner):
    result = runner.invoke(cli, ["higher-order", "--n-bar", "0.037", "--eta", "0.1"])
    assert result.exit_code == 0, result.stderr
    report = orjson.loads(result.stdout)
    assert report["gamma"] == pytest.approx(0.95)
    assert report["p0_limit"] == pytest.approx(0.8083, abs=1e-4)
    assert report["fidelity_bound"] == pytest.approx(0.897, abs=0.01)
    assert report["fidelity_bound"] > 0.740
    assert report["detector_model"] == "threshold-split"


def test_tomo_state_command(runner, tmp_path, phi_plus):
    counts = tmp_path / "counts.csv"
    write_counts(simulate_counts(phi_plus, seed=621), counts)
    result = runner.invoke(cli, ["tomo-state", str(counts)])
    assert result.exit_code == 0, result.stderr
    report = orjson.loads(result.stdout)
    assert report["metrics"]["fidelity"]["value"] >= 0.99
    assert report["n_mc"] == 0


def test_tomo_process_command(runner, tmp_path, measured_chi):
    counts = tmp_path / "process.csv"
    write_counts(channel_process_counts(measured_chi, 10**9), counts)
    result = runner.invoke(cli, ["tomo-process", str(counts)])
    assert result.exit_code == 0, result.stderr
    report = orjson.loads(result.stdout)
    assert report["process_fidelity"] == pytest.approx(0.7425, abs=1e-6)
    assert report["chi_diag"]["zz"] == pytest.approx(0.2155, abs=1e-6)


def test_pipeline_output_is_reproducible(runner):
    arguments = ["--seed", "17", "pipeline", "--n-bar", "0.037", "--n-bar", "0.193", "--counts", "2000"]
    first = runner.invoke(cli, arguments)
    second = runner.invoke(cli, arguments)
    assert first.exit_code == 0, first.stderr
    assert first.stdout == second.stdout
    rows = orjson.loads(first.stdout)["rows"]
    assert rows[0]["fidelity"] > rows[1]["fidelity"]


@pytest.mark.parametrize(
    "arguments, error_type",
    [
        (["fuse", "--chi", "0.5,0.5"], "invalid_chi"),
        (["antidip", "--grid", "2:1:5"], "bad_grid"),
        (["tomo-state", "missing.csv"], "file_error"),
        (["chi-compose", "--f", "1.5"], "domain"),
        (["antidip", "--sigma-t", "0"], "domain"),
    ],
)
def test_domain_errors_exit_with_code_one(runner, arguments, error_type):
    result = runner.invoke(cli, arguments)
    assert result.exit_code == 1
    assert result.stdout == ""
    detail = _error_detail(result.stderr)
    assert detail[0]["type"] == error_type


def test_validation_errors_exit_with_code_one(runner):
    result = runner.invoke(cli, ["higher-order", "--n-bar", "-1"])
    assert result.exit_code == 1
    detail = _error_detail(result.stderr)
    assert detail[0]["loc"] == ["mean_pairs"]


def test_non_utf8_count_file_exits_with_json_error(runner, tmp_path):
    counts = tmp_path / "bad.csv"
    counts.write_bytes(b"\xff\xfe")
    result = runner.invoke(cli, ["tomo-state", str(counts)])
    assert result.exit_code == 1
    detail = _error_detail(result.stderr)
    assert detail[0]["type"] == "file_error"
    assert detail[0]["loc"] == ["input", str(counts)]
