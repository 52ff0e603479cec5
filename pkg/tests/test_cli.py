import csv
import json
import subprocess
import sys

import pytest

from fbwiretap.cli import grid_axis, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(text):
    d = json.loads(text)
    assert d["schema"] == 1
    return d


def test_rate_pure(capsys):
    code, out, _ = run(capsys, "rate", "--ef", "0.02", "--df", "0.01", "--eb", "0.1", "--db", "0.1",
                       "--scheme", "pure")
    d = doc(out)
    assert code == 0
    assert d["result"]["overall_rate"] == pytest.approx(0.097508840139983087161, abs=1e-12)
    assert d["config"]["ef"] == 0.02 and d["config"]["scheme"] == "pure"


def test_rate_wyner(capsys):
    code, out, _ = run(capsys, "rate", "--scheme", "wyner", "--ef", "0.01", "--df", "0.02")
    assert code == 0
    assert doc(out)["result"]["overall_rate"] == pytest.approx(0.0606, abs=6e-4)


@pytest.mark.parametrize("argv", [
    ["rate", "--ef", "0.6", "--df", "0.01", "--scheme", "wyner"],
    ["rate", "--ef", "abc", "--df", "0.01"],
    ["rate", "--ef", "0.02", "--df", "0.01", "--scheme", "pure"],
    ["rate", "--ef", "0.02", "--df", "0.01", "--eb", "0.1", "--db", "0.1", "--scheme", "mixed"],
    ["region", "--rmax", "0.1", "--cs", "0.5"],
    ["region", "--rmax", "-1", "--cs", "0.1"],
    ["sweep", "--ef", "0.02", "--df", "0.01", "--out", "x.csv"],
    ["simulate", "kernel", "--eb", "0.1", "--db", "0.1"],
    ["simulate", "kernel", "--eb", "0.1", "--db", "0.1", "--seed", "1", "--bits", "10", "--block", "3"],
    ["verify", "bsc-optimality", "--samples", "10"],
    ["verify", "bsc-optimality", "--eps", "0.3", "--delta", "0.1", "--seed", "1"],
    [],
])
def test_bad_input_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_sweep_grid(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, text, _ = run(capsys, "sweep", "--ef", "0.02", "--df", "0.01", "--eb-min", "0.1", "--eb-max",
                        "0.2", "--db-min", "0.1", "--db-max", "0.2", "--step", "0.1", "--columns",
                        "pure,reversed,improvement,n_star", "--out", str(out))
    assert code == 0 and doc(text)["result"]["rows"] == 4
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["eps_b", "delta_b", "pure", "reversed", "improvement", "n_star"]
    assert [r[:2] for r in rows[1:]] == [["0.1", "0.1"], ["0.1", "0.2"], ["0.2", "0.1"], ["0.2", "0.2"]]
    assert float(rows[1][2]) == pytest.approx(0.0975088401400, rel=1e-11)
    for r in rows[1:]:
        assert float(r[4]) >= 0
        assert int(r[5]) >= 1


def test_sweep_pure_positive(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert main(["sweep", "--ef", "0.02", "--df", "0.01", "--step", "0.06", "--out", str(out)]) == 0
    capsys.readouterr()
    vals = [float(r["pure"]) for r in csv.DictReader(out.open())]
    assert len(vals) == 81 and min(vals) > 0


def test_sweep_mixed_above_wyner(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["sweep", "--ef", "0.01", "--df", "0.02", "--step", "0.12", "--columns",
                 "wyner,mixed,gamma_star", "--out", str(out)]) == 0
    capsys.readouterr()
    for r in csv.DictReader(out.open()):
        assert float(r["mixed"]) >= 0.0606 - 1e-9
        assert 0.0 <= float(r["gamma_star"]) <= 0.5


def test_sweep_workers_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["sweep", "--ef", "0.01", "--df", "0.02", "--step", "0.16", "--columns", "mixed,best,improvement"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b), "--workers", "3"]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_sweep_unwritable_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--ef", "0.02", "--df", "0.01", "--step", "0.2", "--out",
                       str(tmp_path / "missing" / "x.csv"))
    assert code == 3 and "I/O" in err


def test_grid_axis():
    assert grid_axis(0.01, 0.49, 0.01)[-1] == 0.49
    assert len(grid_axis(0.01, 0.49, 0.01)) == 49
    assert grid_axis(0.1, 0.1, 0.5) == [0.1]


def test_region(capsys, tmp_path):
    code, out, _ = run(capsys, "region", "--rmax", "0.8586", "--cs", "0.0606", "--points", "101")
    d = doc(out)
    assert code == 0 and d["result"]["rows"] == 101 and len(d["result"]["boundary"]) == 101
    path = tmp_path / "r.csv"
    assert main(["region", "--rmax", "0.8586", "--cs", "0.0606", "--points", "11", "--out", str(path)]) == 0
    assert len(path.read_text().splitlines()) == 12


def test_verify_bsc(capsys, tmp_path):
    path = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "bsc-optimality", "--eps", "0.01", "--delta", "0.02",
                       "--samples", "10000", "--seed", "7", "--json-out", str(path))
    d = doc(out)
    assert code == 0
    assert d["result"]["n_pass"] == 10000 and d["result"]["counterexamples"] == []
    assert path.read_text() == out


@pytest.mark.parametrize("kind", ["g-structure", "two-point", "projection-order"])
def test_verify_other_kinds(capsys, kind):
    code, out, _ = run(capsys, "verify", kind, "--samples", "20", "--seed", "3")
    assert code == 0
    assert doc(out)["result"]["n_samples"] == 20


def test_verify_frontier(capsys):
    code, out, _ = run(capsys, "verify", "frontier", "--resolution", "10")
    assert code == 0 and doc(out)["result"]["max_excess"] < 1e-3


def test_verify_counterexample_exit_4(capsys, monkeypatch):
    import fbwiretap.auxverify as ap
    real = ap.verify_bsc_optimality

    def fake(*a, **k):
        rep = real(*a, **k)
        rep.counterexamples.append({"index": -1})
        return rep
    monkeypatch.setattr(ap, "verify_bsc_optimality", fake)
    code, out, _ = run(capsys, "verify", "bsc-optimality", "--samples", "5", "--seed", "1")
    assert code == 4 and doc(out)["result"]["counterexamples"]


def test_simulate_kernel(capsys):
    code, out, _ = run(capsys, "simulate", "kernel", "--eb", "0.1", "--db", "0.1", "--bits", "1000000",
                       "--seed", "1")
    r = doc(out)["result"]
    assert code == 0
    assert abs(r["eve_ber"] - 0.18) <= 3 * r["eve_ber_std"]
    assert abs(r["bob_ber"] - 0.1) <= 3 * r["bob_ber_std"]


def test_simulate_other_kinds(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "leakage", "--eb", "0.1", "--db", "0.1", "--bits", "200000",
                       "--seed", "2", "--dump", str(tmp_path / "run"))
    r = doc(out)["result"]
    assert code == 0 and r["config"]["payload"] == "constant_zero"
    assert abs(r["mi_estimate_bits"] - r["expected_mi"]) <= 3 * r["mi_std"]
    assert (tmp_path / "run_c.bin").stat().st_size == 100000 // 8
    code, out, _ = run(capsys, "simulate", "crypto", "--eb", "0.1", "--db", "0.2", "--bits", "200000",
                       "--seed", "3")
    assert code == 0 and doc(out)["result"]["mi_consistent_with_zero"]
    code, out, _ = run(capsys, "simulate", "repetition", "--p", "0.1", "--nrep", "3", "--trials",
                       "100000", "--seed", "4")
    r = doc(out)["result"]
    assert code == 0 and abs(r["crossover"] - 0.028) <= 3 * r["std"]


def test_simulate_reproducible(capsys):
    argv = ["simulate", "kernel", "--eb", "0.2", "--db", "0.3", "--bits", "50000", "--block", "10000",
            "--seed", "11"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--workers", "4")
    assert json.loads(a)["result"] == json.loads(b)["result"]


def test_equivocation(capsys, tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("110\n011\n")
    code, out, _ = run(capsys, "equivocation", "--matrix", str(path), "--joint")
    r = doc(out)["result"]
    assert code == 0 and r["nondecreasing"]
    assert r["equivocation"][0] == 0.0 and r["equivocation"][-1] == pytest.approx(1.0)
    assert r["max_route_difference"] < 1e-12


def test_equivocation_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("11\n11\n")
    assert run(capsys, "equivocation", "--matrix", str(bad))[0] == 2
    assert run(capsys, "equivocation", "--matrix", str(tmp_path / "none.txt"))[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fbwiretap", "rate", "--scheme", "wyner", "--ef", "0.01",
                           "--df", "0.02"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["scheme"] == "wyner"
