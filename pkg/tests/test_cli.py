from __future__ import annotations

import io
import subprocess
import sys

import pytest

from unisigma.cli import main
from unisigma.sigma import sigma_eval


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


@pytest.mark.parametrize("t, expected", [("1", 0.88087), ("0", 0.55682), ("-100", 0.00868)])
def test_sigma(t, expected):
    code, out = run("sigma", "--alpha", "1", "--lambda", "0.5", "-t", t)
    arg, value = out.strip().split(",")
    assert code == 0 and arg == t
    assert float(value) == pytest.approx(expected, abs=1e-5)
    assert len(value.replace("0.", "", 1).lstrip("0")) >= 16


def test_sigma_many_and_extended():
    code, out = run("sigma", "-t", "1", "-t", "10", "--precision", "extended")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2
    assert float(lines[1].split(",")[1]) == pytest.approx(0.95095, abs=1e-5)


@pytest.mark.parametrize("argv", [["sigma", "-t", "abc"], ["sigma", "--alpha", "0", "-t", "1"],
                                  ["plot", "--from", "5", "--to", "5.0"], ["enum", "q", "0"],
                                  ["bogus"], ["solve", "--expr", "x", "--eps", "0.1"]])
def test_bad_flags_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    assert capsys.readouterr().err


def test_plot(tmp_path):
    code, out = run("plot", "--from", "0", "--to", "10", "--step", "0.01")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "t,sigma" and len(rows) == 1002
    ts = [float(r.split(",")[0]) for r in rows[1:]]
    assert ts == sorted(ts) and ts[-1] == 10.0
    last = float(rows[-1].split(",")[1])
    _, single = run("sigma", "-t", "10")
    assert last == float(single.split(",")[1])
    for row in rows[1::97]:
        t, v = row.split(",")
        assert float(v) == pytest.approx(sigma_eval(float(t)), abs=1e-15)
    target = tmp_path / "fig.csv"
    assert run("plot", "--out", str(target))[0] == 0
    assert target.read_bytes().count(b"\r") == 0


def test_plot_unwritable(tmp_path, capsys):
    code, _ = run("plot", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and "cannot write" in capsys.readouterr().err


@pytest.mark.parametrize("kind, n, text", [("q", "5", "3/2"), ("r", "0", "0"), ("poly", "5", "t"),
                                           ("stern", "5", "3"), ("r", "1", "-1"), ("poly", "3", "-t")])
def test_enum(kind, n, text):
    assert run("enum", kind, n) == (0, text + "\n")


def test_solve_identity():
    code, out = run("solve", "--expr", "x", "-a", "0", "-b", "1", "-L", "1", "--eps", "0.1")
    d = kv(out)
    assert code == 0
    assert d["m"] == "5" and d["numeric_index"] == "true" and d["theta"] == "-9" and d["w"] == "1"
    assert float(d["c1"]) == pytest.approx(20.3874, abs=1e-4)
    assert float(d["c0"]) == pytest.approx(-18.3874, abs=1e-4)
    assert d["p"] == "t" and d["n"] == "476"


def test_solve_constant():
    d = kv(run("solve", "--expr", "0", "-L", "1", "--eps", "0.1")[1])
    assert d["m"] == "1" and float(d["c1"]) == 1


def test_solve_symbolic():
    code, out = run("solve", "--expr", "abs(x-0.5)", "-L", "1", "--eps", "0.1")
    d = kv(out)
    assert code == 0
    assert d["n"] == "476" and d["theta"] == "symbolic" and d["numeric_index"] == "false"
    assert "terms=" in d["placement"] or "cf=" in d["placement"]
    assert float(d["theta_log2_magnitude"]) > 1e6


def test_solve_parse_error(capsys):
    code, _ = run("solve", "--expr", "abs(y-0.5)", "-L", "1", "--eps", "0.1")
    assert code == 3 and "column 5" in capsys.readouterr().err


def test_solve_samples(tmp_path):
    path = tmp_path / "v.csv"
    path.write_text("x,fx\n0,1\n1,0\n2,1\n")
    code, out = run("solve", "--samples", str(path), "-L", "1", "--eps", "0.2")
    assert code == 0 and kv(out)["a"] == "0" and kv(out)["b"] == "2"
    assert run("verify", "--samples", str(path), "-L", "1", "--eps", "0.2")[0] == 0


def test_verify_round_trip(tmp_path):
    for expr, eps in [("x", "0.1"), ("abs(x-0.5)", "0.1")]:
        args = ["--expr", expr, "-L", "1", "--eps", eps]
        _, solved = run("solve", *args)
        params = tmp_path / "p.txt"
        params.write_text(solved)
        code, out = run("verify", *args, "--params", str(params))
        d = kv(out)
        assert code == 0 and d["pass"] == "true"
        assert float(d["sup_error"]) < float(eps)
        if expr == "x":
            assert float(d["sup_error"]) <= 1e-9


def test_verify_tampered(tmp_path):
    args = ["--expr", "x", "-L", "1", "--eps", "0.1"]
    d = kv(run("solve", *args)[1])
    d["c0"] = repr(float(d["c0"]) + 1.0)
    params = tmp_path / "bad.txt"
    params.write_text("".join(f"{k}={v}\n" for k, v in d.items()))
    code, out = run("verify", *args, "--params", str(params))
    assert code == 1 and kv(out)["pass"] == "false"


def test_verify_unreadable(tmp_path, capsys):
    code, _ = run("verify", "--expr", "x", "-L", "1", "--eps", "0.1", "--params", str(tmp_path / "no"))
    assert code == 1


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "unisigma", "enum", "q", "6"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "2/3\n"
