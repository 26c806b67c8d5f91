import csv
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from support import solved

from cliffrbvp.cli import EXIT_ERROR, EXIT_OK, EXIT_UNSOLVABLE, main
from cliffrbvp.fixtures import EXAMPLES

GOLDEN = Path(__file__).parent / "golden" / "example1b_report.json"


@pytest.fixture
def config(tmp_path):
    def write(name_or_dict, filename=None):
        data = EXAMPLES[name_or_dict] if isinstance(name_or_dict, str) else name_or_dict
        path = tmp_path / (filename or f"cfg_{len(list(tmp_path.iterdir()))}.json")
        path.write_text(json.dumps(data))
        return str(path)
    return write


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def without_timing(text):
    data = json.loads(text)
    data.pop("timing", None)
    return data


def test_solve_example1b(config, capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, _, _ = run(["solve", config("1b"), "-o", str(out_path)], capsys)
    assert code == EXIT_OK
    report = json.loads(out_path.read_text())
    assert report["status"] == "unique" and report["regime"] == "null_odd" and report["index"] == 0
    assert report["verification"]["passed"] == {"boundary": True, "dirac": True, "decay": True}
    assert report["timing"]["seconds"] > 0


def test_solve_unsolvable_exit_code(config, capsys):
    code, out, _ = run(["solve", config("1c")], capsys)
    assert code == EXIT_UNSOLVABLE
    report = json.loads(out)
    (cond,) = report["solvability"]["upsilon1"]["conditions"]
    assert abs(abs(complex(*cond)) - 4 * np.pi) < 1e-6
    assert report["solvability"]["upsilon0"]["solvable"] is True
    assert report["verification"] is None


@pytest.mark.parametrize("mutate, needle", [
    (lambda d: d.pop("contour"), "contour"),
    (lambda d: d.update(G_const={"a": [1, 0], "b": [0, 0]}), "exactly one"),
    (lambda d: d["g"].update(g0_expr="1/(t-"), "g.g0_expr"),
    (lambda d: d.update(family_count=0), "family_count"),
    (lambda d: d.update(contour={"kind": "circle", "center": [0, 0], "radius": -1}), "radius"),
])
def test_malformed_configs(config, capsys, mutate, needle):
    data = json.loads(json.dumps(EXAMPLES["1b"]))
    mutate(data)
    code, _, err = run(["solve", config(data)], capsys)
    assert code == EXIT_ERROR and needle in err


def test_invalid_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "contour": {"kind": "circle",,}\n}')
    code, _, err = run(["solve", str(path)], capsys)
    assert code == EXIT_ERROR and "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(["solve", str(tmp_path / "nope.json")], capsys)
    assert code == EXIT_ERROR and "error:" in err


def test_example_2(capsys):
    code, out, _ = run(["example", "2"], capsys)
    assert code == EXIT_OK
    worst = float(out.strip().splitlines()[-1].split()[-1])
    assert worst < 1e-7


def test_example_3_family(capsys):
    code, out, _ = run(["example", "3", "--family-count", "3"], capsys)
    assert code == EXIT_OK
    residuals = [float(line.split()[-1]) for line in out.splitlines() if "boundary residual" in line]
    assert len(residuals) == 3 and max(residuals) < 1e-8
    assert float(out.strip().splitlines()[-1].split()[-1]) < 1e-7


def test_example_1d_exterior_vanishes(capsys):
    code, out, _ = run(["example", "1d"], capsys)
    assert code == EXIT_OK and "status=unique" in out
    rows = [line for line in out.splitlines() if " outside " in line]
    assert len(rows) == 10
    assert max(float(r.split()[-1]) for r in rows) < 1e-8


def test_example_1c_is_unsolvable(capsys):
    code, out, _ = run(["example", "1c"], capsys)
    assert code == EXIT_UNSOLVABLE and "unsolvable" in out


def test_unknown_example_is_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["example", "9"])
    assert exc.value.code == 2  # argparse usage error
    capsys.readouterr()


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_sample_field_counts_and_round_trip(config, tmp_path, capsys):
    out_path = tmp_path / "field.csv"
    code, _, _ = run(["sample-field", config("1b"), "--grid", "-2,2,-2,2,50,50", "-o", str(out_path)], capsys)
    assert code == EXIT_OK
    header, rows = read_csv(out_path)
    assert header == ["x1", "x2", "phi_c0", "phi_c1", "phi_c2", "phi_c12", "region"]
    p, sol = solved("1b")
    X, Y = np.meshgrid(np.linspace(-2, 2, 50), np.linspace(-2, 2, 50))
    z = (X + 1j * Y).ravel()
    near = p.contour.locate  # per-point check kept independent of the vectorized classifier
    expected = sum(near(zk).tag != "near_boundary" for zk in z)
    assert len(rows) == expected and 2400 < expected <= 2500
    pts = np.array([float(r[0]) + 1j * float(r[1]) for r in rows])
    vals = np.array([[float(v) for v in r[2:6]] for r in rows])
    direct = sol.evaluate_phi(pts).as_array()
    assert vals.tobytes() == direct.tobytes()
    assert {r[6] for r in rows} == {"inside", "outside"}


def test_sample_field_region_filter(config, tmp_path, capsys):
    out_path = tmp_path / "inside.csv"
    code, _, _ = run(["sample-field", config("1b"), "--grid", "-2,2,-2,2,20,20", "--region", "inside",
                      "-o", str(out_path)], capsys)
    assert code == EXIT_OK
    _, rows = read_csv(out_path)
    assert rows and all(r[6] == "inside" for r in rows)


def test_sample_field_empty_grid_warns(config, tmp_path, capsys):
    out_path = tmp_path / "empty.csv"
    # a single point on the circle lies in the refusal band
    code, _, err = run(["sample-field", config("1b"), "--grid", "1.5,1.5,0,0,1,1", "-o", str(out_path)], capsys)
    assert code == EXIT_OK and "warning" in err
    _, rows = read_csv(out_path)
    assert rows == []


def test_sample_field_threads_env(config, tmp_path, capsys, monkeypatch):
    paths = []
    for threads in ("1", "4"):
        monkeypatch.setenv("CLIFF_RBVP_THREADS", threads)
        path = tmp_path / f"t{threads}.csv"
        assert run(["sample-field", config("2"), "--grid", "-2,2,-2,2,40,40", "-o", str(path)], capsys)[0] == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    monkeypatch.setenv("CLIFF_RBVP_THREADS", "zero")
    code, _, err = run(["sample-field", config("2"), "--grid", "-2,2,-2,2,4,4", "-o", str(tmp_path / "x.csv")], capsys)
    assert code == EXIT_ERROR and "CLIFF_RBVP_THREADS" in err


def test_bad_grid_spec(config, tmp_path, capsys):
    code, _, err = run(["sample-field", config("1b"), "--grid", "0,1,0,1,5", "-o", str(tmp_path / "g.csv")], capsys)
    assert code == EXIT_ERROR and "--grid" in err


def test_index_command(config, capsys):
    code, out, _ = run(["index", config("1a")], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["index"] == -1 and data["regime"] == "null_odd" and data["winding_residual"] < 1e-10
    assert json.loads(run(["index", config("1c")], capsys)[1])["index"] == 1


def test_index_resolution_failure(config, capsys):
    data = {"contour": {"kind": "circle", "center": [0, 0], "radius": 1},
            "G": {"g0_expr": "t^12", "g1_expr": "0"}, "g": {"g0_expr": "0", "g1_expr": "0"}}
    code, _, err = run(["--nodes", "16", "index", config(data)], capsys)
    assert code == EXIT_ERROR and "--nodes" in err
    code, out, _ = run(["index", config(data), "--nodes", "64"], capsys)
    assert code == EXIT_OK and json.loads(out)["index"] == 12


def test_reports_are_deterministic(config, tmp_path, capsys):
    cfg = config("1b")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["solve", cfg, "-o", str(a)], capsys)
    run(["solve", cfg, "-o", str(b)], capsys)
    assert without_timing(a.read_text()) == without_timing(b.read_text())
    text = json.dumps(without_timing(a.read_text()), indent=2, sort_keys=True) + "\n"
    assert text == GOLDEN.read_text()


def test_no_temporary_files_left(config, tmp_path, capsys):
    cfg = config("2")
    run(["solve", cfg, "-o", str(tmp_path / "r.json")], capsys)
    run(["sample-field", cfg, "--grid", "-2,2,-2,2,5,5", "-o", str(tmp_path / "f.csv")], capsys)
    assert not [p for p in tmp_path.iterdir() if p.name.endswith(".tmp")]


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_each_fixture_runs_quickly(name, config, capsys):
    start = time.perf_counter()
    code, _, _ = run(["solve", config(name)], capsys)
    assert time.perf_counter() - start < 5.0
    assert code == (EXIT_UNSOLVABLE if name == "1c" else EXIT_OK)


def test_module_entry_point(config):
    env = dict(os.environ, PYTHONPATH=str(Path(__file__).parents[1] / "src"))
    proc = subprocess.run([sys.executable, "-m", "cliffrbvp", "index", config("1b")],
                          capture_output=True, text=True, env=env, timeout=60)
    assert proc.returncode == 0 and json.loads(proc.stdout)["index"] == 0
