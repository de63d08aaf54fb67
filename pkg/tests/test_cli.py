import csv
import json
import math
import subprocess
import sys

import pytest

from lorentzseq.cli import main
from lorentzseq.reports import dumps, payload_text


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8"))


def test_norm(tmp_path):
    code, rep = run(["norm", "--space", "lorentz:1,2", "--seq", "[0,3,1,3]"], tmp_path)
    assert code == 0
    assert math.isclose(rep["result"]["value"], math.sqrt(30), rel_tol=1e-15)
    man = rep["manifest"]
    assert man["command"] == "norm" and man["tool_version"] and man["timestamp"].endswith("Z")


def test_norm_from_file(tmp_path):
    f = tmp_path / "a.json"
    f.write_text("[3, 4]")
    code, rep = run(["norm", "--space", "lorentz:2,2", "--seq-file", str(f)], tmp_path)
    assert code == 0 and rep["result"]["value"] == 5.0


def test_classify(tmp_path):
    code, rep = run(["classify", "--source", "lorentz:1,1", "--target", "lorentz:2,2"], tmp_path)
    assert code == 0
    assert rep["result"]["exact_norm"] == {"lo": 1.0, "hi": 1.0}
    assert rep["result"]["maximally_noncompact"] is True


def test_cover_and_replay(tmp_path):
    argv = ["cover", "--space", "lorentz:1,2", "--rho", "0.75", "--L", "64",
            "--samples", "10000", "--seed", "7"]
    code, rep = run(argv, tmp_path)
    assert code == 0
    assert rep["result"]["m"] == 17 and len(rep["result"]["centers"]) == 35
    assert rep["result"]["max_observed_distance"] <= 0.75
    code = main(["replay", str(tmp_path / "out.json"), "--out", str(tmp_path / "r.json")])
    replay = json.loads((tmp_path / "r.json").read_text())
    assert code == 0 and replay["result"]["identical"] is True


def test_reports_byte_identical_apart_from_timestamp(tmp_path):
    argv = ["estimate-norm", "--source", "lorentz:1,inf", "--target", "lorentz:2,2",
            "--L", "300", "--restarts", "2", "--max-iters", "40", "--seed", "3"]
    _, a = run(argv, tmp_path, "a.json")
    _, b = run(argv + ["--workers", "2"], tmp_path, "b.json")
    assert a["result"] == b["result"]
    _, c = run(argv, tmp_path, "c.json")
    assert payload_text(a) == payload_text(c)


def test_converge_csv(tmp_path):
    csv_path = tmp_path / "rows.csv"
    code, rep = run(["converge", "--source", "lorentz:1,2", "--target", "lorentz:1,inf",
                     "--L-values", "10,100,1000", "--restarts", "1", "--max-iters", "20",
                     "--csv", str(csv_path)], tmp_path)
    assert code == 0
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["L", "best_value", "oracle_lo", "oracle_hi", "gap", "family_tag"]
    gaps = [float(r[4]) for r in rows[1:]]
    assert gaps == sorted(gaps, reverse=True) and len(set(gaps)) == 3
    assert "--csv" not in rep["manifest"]["argv"]


def test_series_norm(tmp_path):
    code, rep = run(["series-norm", "--p1", "1", "--p2", "2", "--q2", "2"], tmp_path)
    r = rep["result"]
    assert code == 0 and r["lo"] <= math.pi / math.sqrt(6) <= r["hi"]


def test_span_alpha_rearrange(tmp_path):
    code, rep = run(["span", "--space", "c0", "--L", "8", "--samples", "10"], tmp_path)
    assert code == 0 and rep["result"]["estimate"] == 2.0
    code, rep = run(["alpha", "--source", "lorentz:2,2", "--target", "wlp:2"], tmp_path)
    assert code == 0 and rep["result"]["hi"] == 0.5 ** 0.5
    code, rep = run(["rearrange", "--seq", "[0,3,1,3,0]", "--omega", "2"], tmp_path)
    assert rep["result"]["rearrangement"] == [3.0, 3.0, 1.0, 0.0, 0.0]
    assert rep["result"]["distribution"] == 2


def test_witness_commands(tmp_path):
    code, rep = run(["refute-signflip", "--centers", "[[0.5, 0.2], [-0.1, -0.3]]",
                     "--rho", "0.99"], tmp_path)
    assert code == 0 and rep["result"]["witness"] == [-1.0, 1.0]
    code, rep = run(["refute-spread", "--source", "lorentz:1,1", "--target", "lorentz:2,2",
                     "--centers", "[[0.9, 0, 0, 0]]", "--rho", "0.3", "--L", "4"], tmp_path)
    assert code == 0 and rep["result"]["min_distance_to_centers"] > 0.3


@pytest.mark.parametrize("argv, code", [
    (["bogus"], 2),
    ([], 2),
    (["norm", "--space", "lorentz:1", "--seq", "[1]"], 2),
    (["norm", "--space", "lorentz:1,2", "--seq", "[1, \"a\"]"], 2),
    (["norm", "--space", "lorentz:1,2"], 2),
    (["cover", "--space", "lorentz:1,2", "--rho", "0.7071", "--samples", "10"], 3),
    (["cover", "--space", "c0", "--rho", "0.9", "--samples", "10"], 3),
    (["refute-spread", "--source", "lorentz:1,1", "--target", "lorentz:2,2",
      "--centers", "[[1, 1, 1, 1]]", "--rho", "0.3", "--L", "4"], 3),
    (["converge", "--source", "lorentz:1,2", "--target", "lorentz:2,3", "--L-values", "10"], 2),
    (["estimate-norm", "--source", "lorentz:2,2", "--target", "lorentz:1,2", "--L", "10"], 2),
    (["audit", "--seed", "-1"], 2),
])
def test_exit_codes(argv, code, tmp_path, capsys):
    assert main(argv) == code


def test_refuted_cover_exits_four(tmp_path):
    code, rep = run(["cover", "--space", "wlp:2", "--samples", "10000"], tmp_path)
    assert code == 4
    assert rep["result"]["status"] == "refuted"
    assert rep["result"]["refutation"]["distance"] > rep["result"]["refutation"]["radius"]


def test_error_report_written(tmp_path):
    code, rep = run(["cover", "--space", "lorentz:1,2", "--rho", "0.5", "--samples", "10"], tmp_path)
    assert code == 3 and rep["result"]["error"] == "Infeasible"


def test_backend_recorded(tmp_path):
    out = tmp_path / "o.json"
    main(["--backend", "numpy", "norm", "--space", "c0", "--seq", "[1]", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert rep["manifest"]["backend"] == "numpy"
    assert rep["manifest"]["argv"] == ["norm", "--space", "c0", "--seq", "[1]"]
    main(["--backend", "auto", "norm", "--space", "c0", "--seq", "[1]"])


def test_dumps_format():
    assert dumps({"a": 0.1, "b": float("inf"), "c": [1, 2.0], "d": None}) == \
        '{"a": 0.10000000000000001, "b": "inf", "c": [1, 2.0], "d": null}'


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lorentzseq", "norm", "--space", "c0",
                           "--seq", "[-2, 1]"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"] == 2.0
