import csv
import io
import json
import subprocess
import sys

import mpmath as mp
import pytest

from hyperstokes.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_gamma_star_one(capsys):
    code, out, _ = call(capsys, "eval", "--z-mod", "1", "--z-arg", "0", "--level", "0", "--N", "1")
    assert code == 0
    assert json.loads(out)["oracle"]["re"].startswith("1.0844375514")


def test_json_numbers_round_trip(capsys):
    _, out, _ = call(capsys, "eval", "--z-mod", "2", "--z-arg", "0.3pi", "--N", "8", "--digits", "40")
    data = json.loads(out)
    with mp.workdps(40):
        re = mp.mpf(data["remainder"]["re"])
        assert mp.nstr(re, 40) == data["remainder"]["re"]
    assert json.loads(json.dumps(data)) == data


def test_smooth_row_on_stokes_line(capsys, tmp_path):
    path = tmp_path / "curve.csv"
    code, _, _ = call(capsys, "smooth", "--absz", "5", "--kind", "s2", "--theta-min", "0.49",
                      "--theta-max", "0.51", "--steps", "2", "--out", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["theta_over_pi", "re_S", "im_S", "N", "M", "digits_used"]
    mid = [r for r in rows if abs(float(r["theta_over_pi"]) - 0.5) < 1e-9]
    assert len(mid) == 1 and 0.355 <= float(mid[0]["re_S"]) <= 0.395
    assert (mid[0]["N"], mid[0]["M"]) == ("62", "31")


def test_verify_quadrature_suite(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "howls", "--count", "2", "--digits", "50")
    assert code == 0
    checks = json.loads(out)["checks"]
    assert checks and all(c["passed"] for c in checks)
    assert all(mp.mpf(c["residual"]) <= mp.mpf("1e-8") for c in checks)


def test_terminant_json(capsys):
    code, out, _ = call(capsys, "terminant", "--orders", "5", "--singulant-args", "0.5pi",
                        "--singulant-mods", str(2 * mp.pi), "--z-mod", "3", "--z-arg", "0.3",
                        "--method", "closed")
    assert code == 0
    assert {"value_re", "value_im", "err_estimate"} <= set(json.loads(out))


def test_coeffs_dump(capsys):
    code, out, _ = call(capsys, "coeffs", "dump", "--max", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["gamma_num"], r["gamma_den"]) for r in rows] == [
        ("1", "1"), ("-1", "12"), ("1", "288"), ("139", "51840")]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "eval", "z-mod": 1, "z-arg": "0", "N": 1, "digits": 40}))
    code, out, _ = call(capsys, "--config", str(cfg))
    assert code == 0 and json.loads(out)["digits"] == 40


@pytest.mark.parametrize("argv", [
    ["eval", "--z-mod", "1", "--z-arg", "0", "--N", "1", "--digits", "20"],
    ["eval", "--z-mod", "1", "--z-arg", "0", "--N", "1", "--tol", "1e-2"],
    ["eval", "--z-mod", "1", "--z-arg", "0"],
    ["frobnicate"],
])
def test_config_errors_exit_2(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_numerical_failure_exits_1(capsys):
    code, _, err = call(capsys, "eval", "--z-mod", "12", "--z-arg", "0", "--N", "75", "--digits", "30")
    assert code == 1 and "PrecisionError" in err


def test_deterministic(tmp_path):
    outs = []
    for j in range(2):
        path = tmp_path / f"o{j}.json"
        subprocess.run([sys.executable, "-m", "hyperstokes", "eval", "--z-mod", "3", "--z-arg",
                        "0.4pi", "--level", "1", "--N", "18", "--M", "9", "--out", str(path)],
                       check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_env_default_digits(monkeypatch, capsys):
    monkeypatch.setenv("HYPERSTOKES_DIGITS", "35")
    _, out, _ = call(capsys, "eval", "--z-mod", "1", "--z-arg", "0", "--N", "1")
    assert json.loads(out)["digits"] == 35
