import json

import pandas as pd
import pytest

from src.app import main
from src.controller.cli.schemas.run_config import parse_config, sweep_values
from src.controller.errors.exceptions import ConfigParseError, ConfigValidationError


SOLITONIC_SPECTRUM = """
# solitonic profile, alpha only
profile.family = solitonic
profile.q = 1, kappa = 2
model.omega = 1.1, alpha = 0.1, beta = 0   # omega~ = 1
grid.n = 200
job = spectrum
k = 3
"""


JONES = """
profile.family = harmonic
model.omega = 2, alpha = 0.4, beta = 0.2
grid.n = {n}
job = {job}
"""


def _error_payload(capsys: pytest.CaptureFixture) -> dict:
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


def test_parse_config_with_shorthand_and_comments():
    config = parse_config(SOLITONIC_SPECTRUM)
    assert config.profile.family == "solitonic"
    assert (config.profile.q, config.profile.kappa) == (1.0, 2.0)
    assert config.model.to_params().omega_tilde == pytest.approx(1.0)
    assert config.grid.n == 200
    assert config.job == "spectrum"
    assert config.k == 3


def test_parse_config_rejects_nonpositive_omega_tilde():
    text = SOLITONIC_SPECTRUM.replace("omega = 1.1", "omega = 0.1")
    with pytest.raises(ConfigValidationError, match="appropriate to assume") as error:
        parse_config(text)
    assert error.value.key == "model"


def test_parse_config_rejects_small_kappa():
    text = SOLITONIC_SPECTRUM.replace("kappa = 2", "kappa = 0.4")
    with pytest.raises(ConfigValidationError, match="kappa > 1/2") as error:
        parse_config(text)
    assert error.value.key == "profile"


def test_parse_config_rejects_unknown_key():
    with pytest.raises(ConfigValidationError, match="unknown key") as error:
        parse_config(SOLITONIC_SPECTRUM + "profile.width = 3\n")
    assert error.value.key == "profile.width"


def test_parse_config_rejects_missing_block():
    text = "\n".join(line for line in SOLITONIC_SPECTRUM.splitlines() if "grid" not in line)
    with pytest.raises(ConfigValidationError, match="required key is missing"):
        parse_config(text)


def test_parse_config_rejects_duplicate_key():
    with pytest.raises(ConfigParseError, match="line 9: duplicate key"):
        parse_config(SOLITONIC_SPECTRUM + "k = 4\n")


def test_parse_config_rejects_malformed_line():
    with pytest.raises(ConfigParseError, match="line 2"):
        parse_config("profile.family = harmonic\nmodel.omega 2\n")


def test_parse_config_requires_k_for_spectrum():
    text = SOLITONIC_SPECTRUM.replace("k = 3", "")
    with pytest.raises(ConfigValidationError, match="requires k"):
        parse_config(text)


def test_sweep_values_are_inclusive():
    config = parse_config(
        JONES.format(n=100, job="sweep")
        + "k = 1\nsweep.parameter = alpha, start = 0, stop = 0.3, steps = 4\n"
    )
    assert sweep_values(config.sweep) == pytest.approx([0.0, 0.1, 0.2, 0.3])


def test_sweep_parameter_must_belong_to_the_profile():
    with pytest.raises(ConfigValidationError, match="needs a solitonic profile"):
        parse_config(
            JONES.format(n=100, job="sweep")
            + "k = 1\nsweep.parameter = kappa, start = 1, stop = 2, steps = 3\n"
        )


def test_main_reports_config_errors_as_json(write_config, tmp_path, capsys):
    path = write_config(SOLITONIC_SPECTRUM.replace("kappa = 2", "kappa = 0.4"))
    assert main(["--config", str(path), "--out", str(tmp_path / "out")]) == 2
    payload = _error_payload(capsys)
    assert payload["exit_code"] == 2
    assert payload["messages"][0]["code"] == "CONFIG_ERROR"
    assert "kappa > 1/2" in payload["messages"][0]["description"]


def test_main_reports_missing_config_file(tmp_path, capsys):
    assert main(["--config", str(tmp_path / "absent.cfg")]) == 2
    assert _error_payload(capsys)["messages"][0]["code"] == "CONFIG_ERROR"


def test_main_requires_config_flag():
    assert main([]) == 2


def test_main_reports_numeric_failures(write_config, tmp_path, capsys):
    path = write_config(SOLITONIC_SPECTRUM + "grid.x_min = -40, x_max = 40\n")
    assert main(["--config", str(path), "--out", str(tmp_path / "out")]) == 3
    payload = _error_payload(capsys)
    assert payload["exit_code"] == 3
    assert payload["messages"][0]["code"] == "NUMERIC_ERROR"
    assert "range limit" in payload["messages"][0]["description"]


def test_veff_job_writes_coefficients(write_config, tmp_path):
    path = write_config(SOLITONIC_SPECTRUM.replace("job = spectrum", "job = veff"))
    out = tmp_path / "veff"
    assert main(["--config", str(path), "--out", str(out), "--quiet"]) == 0
    frame = pd.read_csv(out / "coefficients.csv")
    assert list(frame.columns) == [
        "x", "a", "b", "c1", "c2", "veff", "rho_tilde", "zeta_plus"
    ]
    assert len(frame) == 200


def test_metric_job_writes_jones_metric(write_config, tmp_path):
    path = write_config(JONES.format(n=100, job="metric"))
    out = tmp_path / "metric"
    assert main(["--config", str(path), "--out", str(out), "--quiet"]) == 0
    frame = pd.read_csv(out / "metric.csv")
    assert "jones_rho" in frame.columns
    assert (out / "coefficients.csv").exists()


def test_spectrum_job_writes_tables_and_matrices(write_config, tmp_path):
    path = write_config(SOLITONIC_SPECTRUM)
    out = tmp_path / "spectrum"
    assert main(["--config", str(path), "--out", str(out), "--quiet", "--dump-matrix"]) == 0
    spectrum = pd.read_csv(out / "spectrum.csv")
    assert list(spectrum["n"]) == [0, 1, 2]
    assert spectrum["E_closed_form"].iloc[0] == pytest.approx(0.55)
    assert (spectrum["abs_err"] >= 0).all()
    closed_form = pd.read_csv(out / "closedform.csv")
    assert list(closed_form.columns) == ["n", "E_n", "chi_sha256"]
    assert closed_form["chi_sha256"].str.len().eq(64).all()
    triplets = (out / "h_tilde.triplets").read_text(encoding="utf-8").splitlines()
    assert len(triplets) == 3 * 200 - 2
    assert (out / "H_tilde.triplets").exists()
    assert (out / "wavefunctions.csv").exists()


def test_verify_job_writes_its_record(write_config, tmp_path, capsys):
    path = write_config(JONES.format(n=999, job="verify") + "k = 3\n")
    out = tmp_path / "verify"
    code = main(["--config", str(path), "--out", str(out)])
    record = json.loads((out / "verify.json").read_text(encoding="utf-8"))
    checks = {check["name"]: check for check in record["checks"]}
    assert code == 0
    assert [name for name, check in checks.items() if not check["passed"]] == []
    for name in (
        "eta_adjoint_exact",
        "metric:rho_times_swapped_rho",
        "metric:zeta_plus_positive",
        "metric:veff_swap_symmetry",
        "spectrum:eigenpair_residuals",
        "spectrum:sturm_count",
        "control:inverted_metric_does_not_converge",
        "order:ground_energy",
        "order:transport",
        "order:isospectrality",
    ):
        assert checks[name]["passed"], name
    assert "factorization:beta_zero" not in checks
    summary = capsys.readouterr().out
    assert "eta_adjoint_exact" in summary


def test_sweep_reruns_are_byte_identical(write_config, tmp_path):
    text = (
        JONES.format(n=100, job="sweep")
        + "k = 1\nsweep.parameter = alpha, start = 0, stop = 0.4, steps = 3\n"
    )
    path = write_config(text)
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["--config", str(path), "--out", str(first), "--quiet"]) == 0
    assert main(["--config", str(path), "--out", str(second), "--quiet"]) == 0
    assert (first / "sweep.csv").read_bytes() == (second / "sweep.csv").read_bytes()
    frame = pd.read_csv(first / "sweep.csv")
    assert list(frame.columns) == ["value", "E0", "max_im", "delta", "lambda"]
    assert list(frame["value"]) == pytest.approx([0.0, 0.2, 0.4])
    assert frame["delta"].isna().all()


def test_solitonic_sweep_lambda_grows_with_alpha(write_config, tmp_path):
    text = """
profile.family = solitonic
profile.q = 1, kappa = 2
model.omega = 1.6, alpha = 0, beta = 0
grid.n = 100
job = sweep
k = 1
sweep.parameter = alpha, start = 0, stop = 0.5, steps = 6
"""
    out = tmp_path / "sweep"
    assert main(["--config", str(write_config(text)), "--out", str(out), "--quiet"]) == 0
    frame = pd.read_csv(out / "sweep.csv")
    assert frame["lambda"].iloc[0] == pytest.approx(1.5)
    assert frame["lambda"].is_monotonic_increasing
    assert (frame["delta"] > 0).all()
