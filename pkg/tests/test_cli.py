import json
import math
import os
import subprocess
import sys

import pytest

from ars3d.cli import main
from ars3d.scenario import bundled_text


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def scen(tmp_path):
    def write(name, mutate=None):
        d = json.loads(bundled_text(name))
        if mutate:
            mutate(d)
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(d))
        return str(p)
    return write


def test_validate(scen, capsys, tmp_path):
    code, out, _ = run(["validate", scen("example_4_3")], capsys)
    assert code == 0 and "LARC: NotSubalgebra" in out and "PlaneStack" in out
    code, out, _ = run(["validate", scen("example_4_4")], capsys)
    assert code == 0 and "LARC: XiOutsideLine" in out and "GraphOverPlane(Hmap)" in out
    bad = scen("example_4_4", lambda d: d["delta"].update(basis=[[0, 1, 0], [0, 0, 1]]))
    code, _, err = run(["validate", bad], capsys)
    assert code == 2 and "DegenerateDistribution" in err
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json")
    code, _, err = run(["validate", str(broken)], capsys)
    assert code == 1 and "line 1" in err
    code, _, err = run(["validate", scen("example_4_4", lambda d: d.pop("A"))], capsys)
    assert code == 1 and "A" in err
    code, _, _ = run(["validate", str(tmp_path / "missing.json")], capsys)
    assert code == 1


def test_locus_csv(scen, capsys, tmp_path):
    out_csv = tmp_path / "a.csv"
    code, _, _ = run(["locus", scen("example_4_4"), "--samples", "20", "--out", str(out_csv)], capsys)
    assert code == 0
    text = out_csv.read_bytes()
    assert b"\r\n" not in text
    lines = text.decode().splitlines()
    assert lines[0] == "t,x,y,F-residual"
    rows = [list(map(float, l.split(","))) for l in lines[1:]]
    assert len(rows) == 400
    ts = [r[0] for r in rows]
    assert ts == sorted(ts)
    for t, x, y, r in rows:
        assert abs(r) <= 1e-8
        assert abs(2 * y - 3 * (1 - math.exp(t))) <= 1e-10
    again = tmp_path / "b.csv"
    run(["locus", scen("example_4_4"), "--samples", "20", "--out", str(again)], capsys)
    assert again.read_bytes() == text


def test_locus_plane_stack(scen, capsys):
    code, out, _ = run(["locus", scen("example_4_3"), "--t-min", "0", "--t-max", str(4 * math.pi),
                        "--samples", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split(",")[0] == "plane"
    planes = {int(l.split(",")[0]) for l in lines[1:]}
    assert planes == {0, 1, 2, 3, 4}


def test_locus_usage_errors(scen, capsys):
    assert run(["locus", scen("example_4_4"), "--samples", "0"], capsys)[0] == 64
    assert run(["locus"], capsys)[0] == 64
    assert run(["frobnicate"], capsys)[0] == 64


def test_crossing(scen, capsys, tmp_path):
    path = scen("example_4_4")
    code, out, _ = run(["crossing", path, "--point", "0,0,1", "--dir", "0,0,1"], capsys)
    assert code == 0 and "DiscreteCrossings" in out
    assert "crossing at s = -1: CPlus -> CMinus" in out
    code, out, _ = run(["crossing", path, "--point", "0,0,0", "--flow"], capsys)
    assert code == 0 and "RemainsInLocus" in out
    code, out, _ = run(["crossing", path, "--point", "0,0,0", "--dir", "0,1,0"], capsys)
    assert code == 0 and "RemainsInLocus" in out
    csv_path = tmp_path / "c.csv"
    code, _, _ = run(["crossing", path, "--point", "0,0,1", "--dir", "0,0,1", "--out", str(csv_path)], capsys)
    assert code == 0 and csv_path.read_text().splitlines()[0].startswith("s,")
    assert run(["crossing", path, "--point", "0,0", "--flow"], capsys)[0] == 64
    assert run(["crossing", path, "--point", "0,0,0"], capsys)[0] == 64


def test_verify(capsys):
    code, out, _ = run(["verify", "--suite", "lambda", "--cases", "20", "--seed", "3"], capsys)
    assert code == 0 and "properties passed" in out
    code2, out2, _ = run(["verify", "--suite", "lambda", "--cases", "20", "--seed", "3"], capsys)
    assert out2 == out
    code, out, _ = run(["verify", "--suite", "symmetry", "--cases", "20", "--inject-fault", "noncommuting"], capsys)
    assert code == 3 and "counterexample for" in out


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ARS3D_SEED", "42")
    _, out, _ = run(["verify", "--suite", "group", "--cases", "5"], capsys)
    assert out.startswith("seed 42,")
    monkeypatch.setenv("ARS3D_SEED", "nope")
    assert run(["verify", "--suite", "group", "--cases", "5"], capsys)[0] == 64


def test_example(capsys, tmp_path):
    code, out, _ = run(["example", "4.3", "--out-dir", str(tmp_path), "--samples", "3"], capsys)
    assert code == 0 and "ok" in out
    assert (tmp_path / "example_4_3.json").exists() and (tmp_path / "example_4_3_locus.csv").exists()
    code, out, _ = run(["example", "4.4", "--out-dir", str(tmp_path), "--samples", "20"], capsys)
    assert code == 0 and "notice" in out
    assert run(["example", "9.9"], capsys)[0] == 64


def test_console_entry_point(tmp_path):
    env = dict(os.environ, ARS3D_SEED="7")
    proc = subprocess.run([sys.executable, "-m", "ars3d", "verify", "--suite", "covering", "--cases", "3"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.startswith("seed 7,")
