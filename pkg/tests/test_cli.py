import json
import subprocess
import sys

import pytest

from calogero_anyon.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_state_calogero(capsys):
    code, out, err = run(["build-state", "--model", "calogero", "--n", "2", "--g", "1", "--ell", "0,2"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["state"]["energy"] == "4"
    assert "energy=4" in err


def test_build_state_anyon(capsys):
    code, out, _ = run(["build-state", "--model", "anyon", "--n", "2", "--alpha", "1", "--ell", "0,0"], capsys)
    assert code == 0
    from calogero_anyon.exchange_algebra import Expression
    body = Expression.from_dict(json.loads(out)["state"]["body"])
    assert body == (Expression.z(2, 1) - Expression.z(2, 2)).scale(2)


@pytest.mark.parametrize("args", [
    ["build-state", "--n", "2", "--ell", "2,0"],
    ["build-state", "--n", "3", "--ell", "0,1"],
    ["build-state", "--n", "2", "--g", "1/2"],
    ["verify", "--suite", "nope"],
    ["verify", "--suite", "map", "--tol", "-1"],
    ["spectrum", "--omega", "0", "--omega-c", "0"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 2
    assert err


def test_budget_exit_3(capsys):
    code, _, err = run(["build-state", "--n", "3", "--g", "2", "--ell", "0,0,4", "--budget", "10"], capsys)
    assert code == 3 and "budget" in err


def test_verify_eigen(capsys):
    code, out, _ = run(["verify", "--suite", "eigen", "--n", "3", "--g", "2"], capsys)
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_map_free(capsys):
    code, out, _ = run(["verify", "--suite", "map", "--n", "2", "--g", "0", "--ell", "0,2"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["metadata"]["prng"] == "PCG64"


def test_verify_map_unachievable_tolerance(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(["verify", "--suite", "map", "--n", "2", "--g", "1", "--ell", "0,2", "--tol", "1e-20",
                        "--out", str(target)], capsys)
    assert code == 1
    assert out == ""
    d = json.loads(target.read_text())
    assert d["pass"] is False
    assert d["suites"]["map"]["reports"][0]["samples"]


def test_verify_intertwine_and_boundary(capsys):
    code, out, _ = run(["verify", "--suite", "intertwine", "--n", "2", "--g", "1"], capsys)
    assert code == 0
    code, out, _ = run(["verify", "--suite", "boundary", "--g", "0.75"], capsys)
    assert code == 0
    assert len(json.loads(out)["suites"]["boundary"]["reports"]) == 6


def test_verify_spectrum(capsys):
    code, out, _ = run(["verify", "--suite", "spectrum"], capsys)
    assert code == 0


def test_grid_flags(capsys):
    code, out, _ = run(["verify", "--suite", "map", "--n", "2", "--g", "1", "--ell", "0,1",
                        "--grid-points", "40", "--box-radius", "7", "--z-seed", "3"], capsys)
    assert code == 0
    meta = json.loads(out)["suites"]["map"]["reports"][0]["gridMeta"]
    assert meta["fullSpace"]["pointsPerAxis"] == 40
    assert meta["wedge"]["boxRadius"] == 7.0


def test_spectrum_table(capsys):
    code, out, _ = run(["spectrum", "--n", "2", "--alpha-steps", "0,0.5,1", "--max-excitation", "2"], capsys)
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 12
    from fractions import Fraction
    by = {}
    for r in rows:
        by.setdefault(tuple(r["ell"]), []).append(Fraction(r["energyExact"]))
    assert all(e[2] - e[1] == e[1] - e[0] for e in by.values())


def test_spectrum_lll_limit(capsys):
    code, out, _ = run(["spectrum", "--n", "3", "--omega", "1e-6", "--omega-c", "100", "--max-excitation", "3"], capsys)
    assert code == 0
    assert all(abs(r["energy"] - 300) < 1e-3 for r in json.loads(out)["rows"])


def test_count_degeneracy(capsys):
    code, out, _ = run(["spectrum", "--n", "3", "--count-degeneracy", "4"], capsys)
    assert code == 0
    assert json.loads(out)["degeneracy"] == 4


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"n": 2, "g": "2", "ell": [0, 1]}))
    code, out, _ = run(["build-state", "--config", str(cfg)], capsys)
    assert code == 0
    assert json.loads(out)["state"]["ell"] == [0, 1]
    # explicit flags win over the file
    code, out, _ = run(["build-state", "--config", str(cfg), "--ell", "1,1"], capsys)
    assert json.loads(out)["state"]["ell"] == [1, 1]
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, _ = run(["build-state", "--config", str(cfg)], capsys)
    assert code == 2


def test_byte_identical_output(tmp_path):
    args = ["verify", "--suite", "map", "--n", "2", "--g", "2", "--ell", "1,1", "--z-seed", "7"]
    outs = []
    for threads in ("1", "4"):
        target = tmp_path / f"r{threads}.json"
        env = {"CAK_THREADS": threads, "PATH": "/usr/bin:/bin"}
        subprocess.run([sys.executable, "-m", "calogero_anyon.cli", *args, "--out", str(target)],
                       check=True, env=env, capture_output=True)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
