import json
import subprocess
import sys

import numpy as np
import pytest

from confmax import cli
from confmax.conformal import extract_EH
from confmax.fields import maxwell_basis


def _run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = cli.main(list(argv) + ["--output", str(out)])
    return code, out.read_text()


def test_verify_reports_are_byte_identical(tmp_path):
    c1, a = _run(tmp_path, "verify", "--suite", "conformal", "--seed", "7", "--samples", "10")
    c2, b = _run(tmp_path, "verify", "--suite", "conformal", "--seed", "7", "--samples", "10")
    assert c1 == c2 == 0 and a == b
    report = json.loads(a)
    assert report["config"]["seed"] == 7 and report["config"]["samples"] == 10
    ids = [c["id"] for c in report["checks"]]
    assert ids == sorted(ids, key=lambda i: (int(i.split(".")[0]), i))
    for c in report["checks"]:
        assert set(c) == {"id", "criterion", "description", "measured", "expected", "tolerance", "passed"}


def test_seed_changes_the_report(tmp_path):
    _, a = _run(tmp_path, "verify", "--suite", "conformal", "--seed", "1", "--samples", "5")
    _, b = _run(tmp_path, "verify", "--suite", "conformal", "--seed", "2", "--samples", "5")
    assert a != b


def test_branching_suite_example(tmp_path):
    code, text = _run(tmp_path, "verify", "--suite", "branching", "--order", "40")
    assert code == 0
    assert "exact match to x^40" in text


def test_pairing_suite_diagonal(tmp_path):
    code, text = _run(tmp_path, "verify", "--suite", "pairing", "--k-max", "3")
    assert code == 0
    checks = {c["id"]: c for c in json.loads(text)["checks"]}
    got = [checks[f"1.norm.L+{k}"]["measured"] for k in range(4)]
    assert np.allclose(got, [-8, -6, -16 / 3, -5], rtol=1e-8)


def test_failing_check_exits_one(tmp_path, capsys):
    code, text = _run(tmp_path, "verify", "--suite", "geometry", "--tol", "schur=-1")
    assert code == 1
    assert json.loads(text)["passed"] is False
    assert "FAIL 2.schur" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "unknown"],
    ["verify", "--tol", "nonsense=1"],
    ["verify", "--order", "zero"],
    ["export-field", "--label", "Q+1"],
    ["export-field", "--label", "L+0", "--lo", "1", "--hi", "0"],
    ["planewave", "--u", "0", "0", "1", "--freq", "2", "--E0", "1", "0", "0"],
])
def test_usage_errors_exit_two(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_module_entry_point_exit_code():
    proc = subprocess.run([sys.executable, "-m", "confmax", "verify", "--suite", "unknown"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_csv_report_format(tmp_path):
    code, text = _run(tmp_path, "verify", "--suite", "planewave", "--format", "csv")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0].startswith("id,criterion,passed")
    assert len(lines) == 4


def test_gram_and_character_commands(tmp_path):
    code, text = _run(tmp_path, "gram", "--side", "R", "--sign", "1", "--k-max", "1")
    d = json.loads(text)
    assert code == 0 and d["labels"] == ["R+0", "R+1"]
    assert d["matrix_pi2"][0][0][0] == pytest.approx(8)
    code, text = _run(tmp_path, "character", "--order", "12")
    d = json.loads(text)
    assert code == 0 and d["families"]["+"]["sumSeries"]["4"] == {"-2": 1, "0": 1, "2": 1}
    assert "-4" in d["families"]["-"]["sumSeries"]


def test_planewave_command(tmp_path):
    code, text = _run(tmp_path, "planewave", "--u", "0", "0", "1", "--freq", "1", "--E0", "1", "0", "0")
    d = json.loads(text)
    assert code == 0 and d["triadDet"] == pytest.approx(1)
    assert d["H0"] == [[0.0, 0.0], [-1.0, 0.0], [0.0, 0.0]]


def test_export_field_rows_and_origin(tmp_path):
    path = tmp_path / "field.csv"
    assert cli.main(["export-field", "--label", "L+0", "--points", "5", "--output", str(path)]) == 0
    text = path.read_text().splitlines()
    assert text[0] == "# schema: confmax.field/1"
    label, x, E, H = cli.read_field_csv(path)
    assert label == "L+0" and len(x) == 625
    origin = np.flatnonzero(np.all(x == 0, axis=1))[0]
    E0, H0 = extract_EH(maxwell_basis((0, "L", 1)), np.zeros(4))
    assert np.allclose(E[origin], E0, atol=1e-15) and np.allclose(H[origin], H0, atol=1e-15)


def test_exported_grid_satisfies_maxwell(tmp_path):
    path = tmp_path / "fine.csv"
    n, half = 5, 0.01
    cli.main(["export-field", "--label", "R-1", "--points", str(n), "--lo", str(-half),
              "--hi", str(half), "--output", str(path)])
    _, x, E, H = cli.read_field_csv(path)
    h = 2 * half / (n - 1)
    E = E.reshape(n, n, n, n, 3)
    H = H.reshape(n, n, n, n, 3)
    dE = np.gradient(E, h, axis=(0, 1, 2, 3))
    dH = np.gradient(H, h, axis=(0, 1, 2, 3))
    inner = (slice(1, -1),) * 4

    def curl(d):
        return np.stack([d[1][..., 2] - d[2][..., 1], d[2][..., 0] - d[0][..., 2],
                         d[0][..., 1] - d[1][..., 0]], axis=-1)

    res = [sum(dE[i][..., i] for i in range(3)), sum(dH[i][..., i] for i in range(3)),
           dE[3] + curl(dH), dH[3] - curl(dE)]
    scale = max(np.abs(E).max(), np.abs(H).max())
    worst = max(np.abs(r[inner]).max() for r in res)
    assert worst <= 1e-3 * scale
