import csv
import io
import json
import math
import subprocess
import sys

import pytest

from genhilbert.cli import main


@pytest.fixture
def spec(tmp_path):
    def write(doc, name="mu.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_lebesgue_csv(spec, capsys, tmp_path):
    out_path = tmp_path / "m.csv"
    code, _, err = run(["moments", "--measure", spec({"type": "power", "gamma": 0}), "--M", "3",
                        "--format", "csv", "--out", str(out_path)], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out_path.read_text(encoding="utf-8"))))
    assert rows[0] == ["n", "value", "method"]
    assert [float(r[1]) for r in rows[1:]] == [1.0, 0.5, 1 / 3, 0.25]
    assert json.loads(err)["violations"] == []


def test_moments_power_gamma1_json(spec, capsys):
    code, out, _ = run(["moments", "--measure", spec({"type": "power", "gamma": 1}), "--M", "2"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["values"] == pytest.approx([0.5, 1 / 6, 1 / 12], rel=1e-15)
    assert doc["complete_monotonicity"]["violations"] == []


def test_moments_quadrature_family(spec, capsys):
    code, out, _ = run(["moments", "--measure", spec({"type": "logpower", "s": 1, "alpha": 2}), "--M", "100"],
                       capsys)
    assert code == 0 and set(json.loads(out)["methods"]) == {"quadrature"}


def test_malformed_json_reports_location(spec, capsys):
    code, out, err = run(["moments", "--measure", spec('{"type": "power",\n "gamma": 0,,}')], capsys)
    assert code == 2 and out == ""
    assert "line 2 column" in err


def test_bad_field_and_missing_file(spec, capsys, tmp_path):
    code, _, err = run(["moments", "--measure", spec({"type": "power", "gamma": -3})], capsys)
    assert code == 2 and "gamma" in err
    code, _, err = run(["moments", "--measure", str(tmp_path / "nope.json")], capsys)
    assert code == 2
    code, _, err = run(["moments"], capsys)
    assert code == 2 and "--measure" in err


def test_classify_lebesgue(spec, capsys):
    code, out, _ = run(["classify", "--measure", spec({"type": "power", "gamma": 0}), "--s", "1",
                        "--p", "1", "--q", "1"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["reports"]["carleson"]["verdict"] == "finite"
    assert doc["reports"]["carleson"]["sup_value"] == pytest.approx(1.0)
    assert doc["predict"]["verdict"] == "unbounded"


def test_classify_logpower_compact_csv(spec, capsys):
    code, out, _ = run(["classify", "--measure", spec({"type": "logpower", "s": 1, "alpha": 2}),
                        "--alpha", "1", "--p", "1", "--q", "1", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "j,a_j,value" and len(lines) == 1 + 15 + 1
    first = lines[1].split(",")
    assert first[0] == "0" and float(first[1]) == 0.0
    record = json.loads(lines[-1])
    assert record["predict"]["verdict"] == "compact"
    assert record["reports"]["log_carleson"]["vanishing"] is True


def test_apply_impulse_and_value(spec, capsys, tmp_path):
    coeffs = tmp_path / "f.json"
    coeffs.write_text("[[1, 0]]")
    code, out, _ = run(["apply", "--measure", spec({"type": "power", "gamma": 0}), "--coeffs", str(coeffs),
                        "--N", "512", "--z", "0.5"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["fast_naive_residual"] <= 1e-12 and doc["agreement_error"] <= 1e-8
    assert doc["output"][3] == pytest.approx([0.25, 0.0], abs=1e-15)
    assert doc["points"][0]["integral"][0] == pytest.approx(2 * math.log(2), rel=1e-14)


def test_apply_large_n_skips_naive(spec, capsys, tmp_path):
    coeffs = tmp_path / "f.json"
    coeffs.write_text("[1, 2, 3]")
    code, out, _ = run(["apply", "--measure", spec({"type": "power", "gamma": 1}), "--coeffs", str(coeffs),
                        "--format", "csv"], capsys)
    rows = out.splitlines()
    assert code == 0 and rows[0] == "n,re,im" and len(rows) == 4097


def test_apply_bad_coeffs(spec, capsys, tmp_path):
    coeffs = tmp_path / "f.json"
    coeffs.write_text('[[1, 2, 3]]')
    code, _, err = run(["apply", "--measure", spec({"type": "power", "gamma": 0}), "--coeffs", str(coeffs)], capsys)
    assert code == 2 and "coefficient 0" in err


def test_schatten_outputs(spec, capsys):
    mu = spec({"type": "atomic", "points": [0.5], "weights": [1]})
    code, out, _ = run(["schatten", "--measure", mu, "--p", "2", "--N", "256"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["membership"]["verdict"] == "in_Sp"
    assert doc["report"]["N"] == 256 and len(doc["report"]["singular_values"]) == 256
    code, out, _ = run(["schatten", "--measure", mu, "--N", "256", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["N", "schatten_partial", "criterion_partial"]
    assert [int(r[0]) for r in rows[1:]] == [32, 64, 128, 256]


def test_schatten_rejects_bad_sizes(spec, capsys):
    mu = spec({"type": "power", "gamma": 0})
    assert run(["schatten", "--measure", mu, "--N", "4096"], capsys)[0] == 2
    assert run(["schatten", "--measure", mu, "--p", "1"], capsys)[0] == 2


def test_verify_is_deterministic_and_detects_corruption(capsys):
    code, first, _ = run(["verify"], capsys)
    assert code == 0
    code, second, _ = run(["verify"], capsys)
    assert first == second
    doc = json.loads(first)
    assert doc["passed"] and all(c["passed"] for c in doc["checks"])
    code, out, _ = run(["verify", "--corrupt", "--seed", "7"], capsys)
    doc = json.loads(out)
    failed = [c["name"] for c in doc["checks"] if not c["passed"]]
    assert code == 1 and failed == ["integral_agreement"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "genhilbert", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
