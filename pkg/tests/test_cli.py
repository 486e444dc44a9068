import csv
import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from shfkit import cli
from shfkit.catalog import families, regions

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_flat_model(capsys):
    code, out, _ = run(capsys, "verify", "--input", str(DATA / "flat_model.json"), "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["validation"]["valid"]
    assert rep["torsion"]["scal"] == 0.0 and rep["torsion"]["torsion_free"]


def test_verify_normalization_failure(capsys, tmp_path):
    data = json.loads((DATA / "flat_model.json").read_text())
    data["psi"]["coeffs"] = {k: 2 * v for k, v in data["psi"]["coeffs"].items()}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, err = run(capsys, "verify", "--input", str(path), "--output", "json")
    rep = json.loads(out)
    assert code == 1 and rep["validation"]["error"]["type"] == "NormalizationError"
    assert rep["validation"]["error"]["ratio"] == pytest.approx(4.0)
    assert "NormalizationError" in err


def test_verify_malformed_json(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"omega": {"degree": 2,\n "coeffs": }')
    code, _, err = run(capsys, "verify", "--input", str(path))
    assert code == 2 and "line 2 column" in err


def test_verify_missing_file_and_keys(capsys, tmp_path):
    assert run(capsys, "verify", "--input", str(tmp_path / "none.json"))[0] == 2
    path = tmp_path / "partial.json"
    path.write_text('{"omega": {"degree": 2, "coeffs": {"12": 1}}}')
    assert run(capsys, "verify", "--input", str(path))[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "catalog", "--family", "su21", "--a", "-1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "scan", "--family", "so41")[0] == 2


def test_catalog_example(capsys):
    code, out, _ = run(capsys, "catalog", "--family", "su21", "--a", "-1", "--b", "1",
                       "--output", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["q"] == pytest.approx(2.0)
    assert rep["torsion"]["j_hermitian_ricci"] is True
    assert rep["region"]["in_A"] and not rep["region"]["on_V"]


def test_catalog_not_admissible(capsys):
    code, out, _ = run(capsys, "catalog", "--family", "su21", "--a", "1", "--b", "1",
                       "--output", "json")
    assert code == 1 and json.loads(out)["error"]["type"] == "NotAdmissible"


def test_catalog_so41_text(capsys):
    code, out, _ = run(capsys, "catalog", "--family", "so41", "--a", "2")
    assert code == 0 and "q: 2\n" in out


def test_output_is_deterministic(capsys):
    argv = ("catalog", "--family", "so41", "--a", "-1.5", "--output", "json")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    argv = ("catalog", "--family", "so41", "--a", "-1.5", "--output", "text")
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    # 12 significant digits in text output
    value = next(line for line in first.splitlines() if line.startswith("q: ")).split()[1]
    assert len(value.replace(".", "").lstrip("0")) <= 12


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_scan_on_slice_maximum_near_c(capsys):
    code, out, _ = run(capsys, "scan", "--family", "su21", "--on-slice", "--grid", "1", "1.9", "30")
    rows = _rows(out)
    assert code == 0 and list(rows[0]) == list(cli.SCAN_COLUMNS)
    scal = np.array([float(r["scal"]) for r in rows])
    dist = [np.hypot(float(r["a"]) - regions.CRITICAL_POINT[0],
                     float(r["b"]) - regions.CRITICAL_POINT[1]) for r in rows]
    assert np.argmax(scal) == np.argmin(dist)
    assert all(r["in_V_SHF"] == "true" for r in rows)


def test_scan_rectangle_flags_rows(capsys):
    code, out, _ = run(capsys, "scan", "--grid", "-1.5", "1.5", "7", "--grid", "-1.5", "1.5", "7")
    rows = _rows(out)
    assert code == 0 and len(rows) == 49
    outside = [r for r in rows if not r["scal"]]
    inside = [r for r in rows if r["scal"]]
    assert outside and inside
    for r in inside:
        a, b = float(r["a"]), float(r["b"])
        assert regions.classify_region(a, b).in_Q
        assert float(r["scal"]) == pytest.approx(regions.scal_homogeneous(a, b, 1 / 6), rel=1e-9)


def test_scan_parallel_matches_serial(capsys):
    argv = ["scan", "--grid", "-1.2", "-0.6", "4", "--grid", "0.5", "2", "4"]
    serial = run(capsys, *argv)[1]
    assert run(capsys, *argv, "--jobs", "2")[1] == serial


def test_scan_so41(capsys):
    code, out, _ = run(capsys, "scan", "--family", "so41", "--grid", "-2", "2", "5")
    rows = _rows(out)
    assert code == 0 and rows[2]["scal"] == "" and float(rows[0]["q"]) == pytest.approx(2.0)


def test_regen_matches_shipped(capsys, tmp_path):
    code, out, _ = run(capsys, "regen", "--output", "json", "--write-dir", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert (tmp_path / "su21.json").exists()


def _perturbed_data(tmp_path):
    for name in ("su21.json", "so41.json"):
        shutil.copy(families.PACKAGE_DATA / name, tmp_path / name)
    data = json.loads((tmp_path / "su21.json").read_text())
    entry = data["bracket"][5]
    entry[3] = repr(float(entry[3]) + 1e-6)
    (tmp_path / "su21.json").write_text(json.dumps(data))


def test_selftest_passes_on_shipped_data(capsys):
    code, out, _ = run(capsys, "selftest", "--checks", "2,4,6,9,data")
    assert code == 0 and "5/5 checks passed" in out


def test_selftest_detects_perturbed_constant(capsys, tmp_path, monkeypatch):
    _perturbed_data(tmp_path)
    monkeypatch.setenv(families.DATA_ENV, str(tmp_path))
    code, out, _ = run(capsys, "selftest", "--checks", "2,4,6,9,data")
    assert code == 1 and "[FAIL] data" in out
    assert run(capsys, "regen", "--family", "su21")[0] == 1


def test_selftest_unknown_check(capsys):
    assert run(capsys, "selftest", "--checks", "42")[0] == 2


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "report.json"
    proc = subprocess.run([sys.executable, "-m", "shfkit.cli", "catalog", "--family", "so41",
                           "--a", "2", "--output", "json", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["family"] == "so41"
