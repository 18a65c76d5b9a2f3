import json
import subprocess
import sys

import pytest

from dais.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_schedule_figures(capsys):
    code, out, _ = run(["schedule", "--s", "84", "--e", "100", "--anchor", "85", "--lambda", "10"], capsys)
    assert code == 0
    assert json.loads(out)["intervals"] == [[85, 94], [84, 94], [84, 100]]
    code, out, _ = run(["schedule", "--s", "1", "--e", "100", "--anchor", "65", "--lambda", "10"], capsys)
    assert json.loads(out)["intervals"][:3] == [[65, 74], [55, 74], [55, 84]]


def test_schedule_bad_anchor(capsys):
    code, _, err = run(["schedule", "--s", "1", "--e", "10", "--anchor", "10"], capsys)
    assert code == 2 and "anchor" in err


def test_simulate_then_detect(tmp_path, capsys):
    csv_path = tmp_path / "s1.csv"
    # seed 3 gives a clean two-point fit; seed 7 happens to add two spurious points near 175
    assert run(["simulate", "--signal", "S1", "--seed", "3", "--out", str(csv_path)], capsys)[0] == 0
    assert csv_path.read_text().splitlines()[0] == "t,x"
    code, out, _ = run(["detect", str(csv_path), "--model", "constant"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["T"] == 1000 and doc["d"] == 1
    locs = [c["location"] for c in doc["change_points"]]
    assert len(locs) == 2 and all(abs(a - b) <= 20 for a, b in zip(locs, [485, 515]))
    assert set(doc["change_points"][0]) == {"location", "contrast", "interval", "component"}


def test_detect_is_byte_stable(tmp_path, capsys):
    csv_path = tmp_path / "x.csv"
    run(["simulate", "--signal", "S5", "--seed", "1", "--out", str(csv_path)], capsys)
    first = run(["detect", str(csv_path), "--model", "constant", "--fit"], capsys)[1]
    second = run(["detect", str(csv_path), "--model", "constant", "--fit"], capsys)[1]
    assert first == second
    assert len(json.loads(first)["fitted"]) == 75


def test_detect_two_rows(tmp_path, capsys):
    p = tmp_path / "two.csv"
    p.write_text("1\n2\n")
    code, out, _ = run(["detect", str(p), "--model", "constant"], capsys)
    assert code == 0 and json.loads(out)["change_points"] == []


def test_detect_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("1\n2\nabc\n")
    code, _, err = run(["detect", str(p), "--model", "constant"], capsys)
    assert code == 2 and ":3:" in err


def test_detect_missing_file(tmp_path, capsys):
    assert run(["detect", str(tmp_path / "nope.csv"), "--model", "constant"], capsys)[0] == 2


def test_detect_degenerate(tmp_path, capsys):
    p = tmp_path / "flat.csv"
    p.write_text("\n".join(["3"] * 10) + "\n")
    code, _, err = run(["detect", str(p), "--model", "constant"], capsys)
    assert code == 3 and "--sigma" in err
    assert run(["detect", str(p), "--model", "constant", "--sigma", "1"], capsys)[0] == 0


def test_detect_multivariate_and_robust(tmp_path, capsys):
    p = tmp_path / "m.csv"
    run(["simulate", "--signal", "S3", "--seed", "2", "--dims", "3", "--out", str(p)], capsys)
    code, out, _ = run(["detect", str(p), "--model", "constant", "--norm", "linf"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["d"] == 3 and all(c["component"] in (1, 2, 3) for c in doc["change_points"])
    assert run(["detect", str(p), "--model", "constant", "--robust", "preavg"], capsys)[0] == 2
    u = tmp_path / "u.csv"
    run(["simulate", "--signal", "S1", "--seed", "0", "--out", str(u)], capsys)
    for kind in ("preavg", "subsample"):
        code, out, _ = run(["detect", str(u), "--model", "constant", "--robust", kind, "--factor", "5"], capsys)
        assert code == 0 and json.loads(out)["robust"]["kind"] == kind


def test_missing_model_is_usage_error(tmp_path, capsys):
    p = tmp_path / "x.csv"
    p.write_text("1\n2\n3\n")
    assert run(["detect", str(p)], capsys)[0] == 2


def test_bench_command(tmp_path, capsys):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"signals": ["S2"], "methods": [{"model": "constant"}], "replications": 3}))
    out = tmp_path / "r.csv"
    code, md, _ = run(["bench", "--plan", str(plan), "--out", str(out), "--markdown", "-", "--workers", "1"], capsys)
    assert code == 0
    assert out.read_text().splitlines()[1].startswith("DAIS[constant lam=3 C=1.7],S2")
    assert md.startswith("| Signal")
    plan.write_text("{not json")
    assert run(["bench", "--plan", str(plan)], capsys)[0] == 2


@pytest.mark.parametrize("sub", ["detect", "simulate", "bench", "schedule"])
def test_help(sub):
    proc = subprocess.run([sys.executable, "-m", "dais", sub, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "--" in proc.stdout
