import subprocess
import sys

import numpy as np
import pytest
import yaml

from slicecalc.cli import main
from slicecalc.io import save_operator
from slicecalc.qmatrix import QMatrix
from slicecalc.algebra import E1, E2


@pytest.fixture
def files(tmp_path):
    out = {}
    out["d23"] = save_operator(QMatrix.diag([2.0, 3.0]), tmp_path / "d23.yaml")
    out["d49"] = save_operator(QMatrix.diag([4.0, 9.0]), tmp_path / "d49.json")
    out["units"] = save_operator(QMatrix.diag([E1, E2]), tmp_path / "units.yaml")
    out["one"] = save_operator(QMatrix.diag([1.0]), tmp_path / "one.yaml")
    out["ten"] = save_operator(QMatrix.diag([10.0]), tmp_path / "ten.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: quaternion-matrix\nentries: [[[1,0,0,0]]\n")
    out["bad"] = bad
    para = tmp_path / "para.yaml"
    para.write_text("kind: paravector\nn: 2\nm: 2\nentries: [[[1,0],[0,2]], [[0,0],[0,0]], [[0,0],[0,0]]]\n")
    out["para"] = para
    return {k: str(v) for k, v in out.items()}


def run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def load(text):
    lines = text.splitlines()
    assert lines[0].startswith("# generated ")
    return yaml.safe_load(text)


def test_spectrum_summaries(files, capsys):
    code, out, _ = run(["spectrum", files["d23"]], capsys)
    assert code == 0
    doc = load(out)
    assert doc["schema_version"] == 1
    assert doc["summary"] == "(2.0, 0.0) ×1; (3.0, 0.0) ×1; omega=0"
    code, out, _ = run(["spectrum", files["units"], "--sector", "2.0,2.5"], capsys)
    doc = load(out)
    assert doc["summary"] == "(0.0, 1.0) ×2; omega=1.5708"
    assert [r["theta"] for r in doc["sector_constants"]] == [2.0, 2.5]


def test_malformed_file_exit_2(files, capsys):
    code, _, err = run(["spectrum", files["bad"]], capsys)
    assert code == 2
    assert "line 3, column 1" in err


def test_apply_hinf_square_root(files, capsys, tmp_path):
    out_path = tmp_path / "r.yaml"
    code, _, _ = run(["apply", files["d49"], "--func", "frac_pow(0.5)", "--method", "hinf", "--out", str(out_path)],
                     capsys)
    assert code == 0
    doc = load(out_path.read_text())
    E = np.array(doc["result"]["entries"])
    assert np.allclose(E[:, :, 0], np.diag([2.0, 3.0]), atol=1e-6)


def test_matrix_entries_use_17_digits(files, capsys):
    _, out, _ = run(["apply", files["d23"], "--func", "psi(1)", "--method", "rational"], capsys)
    assert "0.40000000000000002" in out or "0.40000000000000000" in out


def test_apply_all_reports_deviation(files, capsys):
    code, out, _ = run(["apply", files["d23"], "--func", "psi(1)", "--method", "all"], capsys)
    doc = load(out)
    assert code == 0 and doc["max_deviation"] <= 1e-6
    assert {"sector", "rational", "oracle"} <= set(doc["results"])


def test_apply_pole_collision_exit_4(files, capsys):
    code, _, err = run(["apply", files["units"], "--func", "rational([0,1],[1,0,1])", "--method", "rational"], capsys)
    assert code == 4 and "PoleOnSpectrum" in err


def test_apply_paravector(files, capsys):
    code, out, _ = run(["apply", files["para"], "--func", "psi(1)", "--method", "rational"], capsys)
    E = np.array(load(out)["result"]["entries"])
    assert code == 0 and np.allclose(E[:, :, 0], np.diag([0.5, 0.4]))


def test_unknown_function_exit_2(files, capsys):
    code, _, err = run(["apply", files["d23"], "--func", "sinh"], capsys)
    assert code == 2 and "UnknownFunction" in err


def test_verify_resolvent_eq(capsys):
    code, out, _ = run(["verify", "resolvent-eq", "--seed", "7", "--trials", "100"], capsys)
    doc = load(out)
    assert code == 0 and doc["passed"] and doc["suites"][0]["value"] <= 1e-8


def test_verify_zero_trials_exit_2(capsys):
    code, _, _ = run(["verify", "all", "--trials", "0"], capsys)
    assert code == 2


def test_verify_is_deterministic(capsys):
    _, a, _ = run(["verify", "star-inverse", "--seed", "3", "--trials", "5", "--detail"], capsys)
    _, b, _ = run(["verify", "star-inverse", "--seed", "3", "--trials", "5", "--detail"], capsys)
    assert a.splitlines()[1:] == b.splitlines()[1:]


def test_quadratic_scalars(files, capsys):
    _, out, _ = run(["quadratic", files["one"], "--psi", "1"], capsys)
    doc = load(out)
    assert abs(doc["integrals"][0] - 0.5) < 1e-6 and doc["closed_form"] == 0.5
    _, out, _ = run(["quadratic", files["ten"], "--psi", "2"], capsys)
    assert abs(load(out)["integrals"][0] - 1 / 12) < 1e-6


def test_quadratic_bound(files, capsys):
    _, out, _ = run(["quadratic", files["d23"], "--func", "exp_neg", "--adjoint"], capsys)
    assert load(out)["bound"]["ratio"] <= 1.0


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "slicecalc", "spectrum", files["d23"]], capture_output=True, text=True)
    assert proc.returncode == 0 and "omega=0" in proc.stdout


def test_verify_all_passes(capsys):
    code, out, _ = run(["verify", "all", "--seed", "1"], capsys)
    doc = load(out)
    assert code == 0 and all(s["status"] == "pass" for s in doc["suites"])
