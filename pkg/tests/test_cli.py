"""Command-line surface: subcommands, exit codes, output formats."""

import csv
import json
import math

import fairstops as fs
from fairstops.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def test_gen_writes_valid_instance(tmp_path, capsys):
    out = tmp_path / "t3.json"
    code, stdout, _ = run_cli(capsys, "gen", "--family", "table3", "--out", str(out))
    assert code == 0
    inst = fs.read_instance(out)
    assert fs.validate_instance(inst) == []
    assert "stop legend" in stdout


def test_gen_two_line_family(tmp_path, capsys):
    out = tmp_path / "f5.json"
    code, _, _ = run_cli(capsys, "gen", "--family", "gc-jr-tight", "--eps", "0.01", "--out", str(out))
    assert code == 0
    inst = fs.read_instance(out)
    assert inst.n == 7 and inst.candidate_labels[2] == "y1"


def test_gen_kz(tmp_path, capsys):
    out = tmp_path / "kz.json"
    code, _, _ = run_cli(capsys, "gen", "--family", "kz", "--gamma", "1", "--r", "2", "--out", str(out))
    assert code == 0
    assert fs.read_instance(out).m == 9


def test_gen_line_family_uses_line_format(tmp_path, capsys):
    out = tmp_path / "line.json"
    code, _, _ = run_cli(capsys, "gen", "--family", "fig7", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "line-clustering"
    assert doc["datapoints"] == [1.0, 3.0, 8.0, 10.0]


def test_gen_bad_params_exits_2(tmp_path, capsys):
    out = tmp_path / "x.json"
    code, _, err = run_cli(capsys, "gen", "--family", "kz", "--gamma", "0.2", "--r", "2", "--out", str(out))
    assert code == 2
    assert "gamma" in err
    code, _, _ = run_cli(capsys, "gen", "--family", "nope", "--out", str(out))
    assert code == 2


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def test_run_gc_on_two_line_family(tmp_path, capsys):
    out = tmp_path / "f5.json"
    run_cli(capsys, "gen", "--family", "fig5", "--eps", "0.01", "--out", str(out))
    code, stdout, _ = run_cli(capsys, "run", "--instance", str(out), "--alg", "gc")
    assert code == 0
    assert "stops: y1 y2" in stdout


def test_run_eca_on_table_family(tmp_path, capsys):
    out = tmp_path / "t5.json"
    run_cli(capsys, "gen", "--family", "table5", "--eps", "0.01", "--out", str(out))
    code, stdout, _ = run_cli(capsys, "run", "--instance", str(out), "--alg", "eca")
    assert code == 0
    assert "stops: t2 t4" in stdout


def test_run_hybrid_bad_weight_exits_2(tmp_path, capsys):
    out = tmp_path / "t5.json"
    run_cli(capsys, "gen", "--family", "table5", "--eps", "0.01", "--out", str(out))
    code, _, err = run_cli(
        capsys, "run", "--instance", str(out), "--alg", "hybrid", "--lam", "1.5"
    )
    assert code == 2
    assert "lam" in err
    code, _, _ = run_cli(
        capsys, "run", "--instance", str(out), "--alg", "hybrid", "--lambda", "1.5"
    )
    assert code == 2  # long spelling accepted too


def test_run_writes_trace(tmp_path, capsys):
    inst_path = tmp_path / "t5.json"
    trace_path = tmp_path / "trace.json"
    run_cli(capsys, "gen", "--family", "table5", "--eps", "0.01", "--out", str(inst_path))
    code, _, _ = run_cli(
        capsys, "run", "--instance", str(inst_path), "--alg", "eca", "--trace", str(trace_path)
    )
    assert code == 0
    events = json.loads(trace_path.read_text())
    assert events[0]["opened"] == [1, 3]
    radii = [math.inf if ev["radius"] == "inf" else ev["radius"] for ev in events]
    assert radii == sorted(radii)


def test_run_missing_file_exits_2(capsys):
    code, _, err = run_cli(capsys, "run", "--instance", "/nonexistent.json", "--alg", "gc")
    assert code == 2


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_jr_violation_found(tmp_path, capsys):
    out = tmp_path / "t3.json"
    run_cli(capsys, "gen", "--family", "table3", "--out", str(out))
    code, stdout, _ = run_cli(
        capsys,
        "verify", "--instance", str(out), "--solution", "0,1,3",
        "--prop", "jr", "--beta", "1.36",
    )
    assert code == 1
    assert "witness coalition" in stdout


def test_verify_core_holds(tmp_path, capsys):
    out = tmp_path / "t4.json"
    run_cli(capsys, "gen", "--family", "table4", "--eps", "0.01", "--h", "10", "--out", str(out))
    code, stdout, _ = run_cli(
        capsys,
        "verify", "--instance", str(out), "--solution", "1,3",
        "--prop", "core", "--alpha", "2", "--beta", "2.4142136",
    )
    assert code == 0
    assert "holds at beta=2.4142136: yes" in stdout


def test_verify_zero_cost_solution_holds_everywhere(tmp_path, capsys):
    import numpy as np

    walk = np.zeros((3, 3))
    inst = fs.Instance(
        endpoints=np.array([(0, 1), (1, 2)]),
        candidates=np.array([0, 1, 2]),
        walk=fs.Metric(walk),
        transit=fs.Metric(np.zeros((3, 3))),
        k=3,
    )
    path = tmp_path / "z.json"
    fs.write_instance(inst, path)
    for prop in ("jr", "core", "pf"):
        code, _, _ = run_cli(
            capsys, "verify", "--instance", str(path), "--solution", "0,1,2", "--prop", prop
        )
        assert code == 0


def test_verify_core_guard_exits_3(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("FAIRSTOPS_CORE_GUARD_M", raising=False)
    inst = fs.random_euclidean(3, 25, 4, seed=0)
    path = tmp_path / "big.json"
    fs.write_instance(inst, path)
    code, _, err = run_cli(
        capsys, "verify", "--instance", str(path), "--solution", "0", "--prop", "core"
    )
    assert code == 3
    assert "FAIRSTOPS_CORE_GUARD_M" in err


def test_verify_json_report(tmp_path, capsys):
    out = tmp_path / "t5.json"
    run_cli(capsys, "gen", "--family", "table5", "--eps", "0.01", "--out", str(out))
    code, stdout, _ = run_cli(
        capsys,
        "verify", "--instance", str(out), "--solution", "1,3",
        "--prop", "jr", "--beta", "2.4", "--json",
    )
    assert code == 1
    doc = json.loads(stdout)
    assert doc["property"] == "JR"
    assert doc["deviation"] == [0, 2]
    assert set(doc) == {"property", "alpha", "factor", "coalition", "deviation"}


def test_verify_pf(tmp_path, capsys):
    out = tmp_path / "t3.json"
    run_cli(capsys, "gen", "--family", "table3", "--out", str(out))
    code, stdout, _ = run_cli(
        capsys, "verify", "--instance", str(out), "--solution", "0,1,2", "--prop", "pf",
        "--beta", "1.5",
    )
    assert code == 1  # the whole second region prefers its own stops


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------


def test_experiment_row_count_and_determinism(tmp_path, capsys):
    args = [
        "experiment", "--out", None, "--rounds", "50", "--n", "6", "--m", "5",
        "--k", "2,4", "--algs", "gc,eca,hybrid:0.5", "--checks", "jr",
    ]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args[2] = str(out1)
    assert main([str(a) for a in args]) == 0
    args[2] = str(out2)
    assert main([str(a) for a in args]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    with open(out1) as fh:
        fh.readline()  # schema comment
        rows = list(csv.DictReader(fh))
    assert len(rows) == 50 * 3 * 2
    assert all(float(row["jr_factor"]) >= 1.0 for row in rows)


def test_experiment_rows_sorted_and_mincost(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, _, _ = run_cli(
        capsys,
        "experiment", "--out", str(out), "--rounds", "3", "--n", "5", "--m", "4",
        "--k", "2", "--algs", "eca,gc", "--checks", "jr,mincost",
    )
    assert code == 0
    with open(out) as fh:
        fh.readline()
        rows = list(csv.DictReader(fh))
    keys = [(int(r["seed"]), r["algorithm"], int(r["k"])) for r in rows]
    assert keys == sorted(keys)
    opt = {int(r["seed"]): float(r["total_cost"]) for r in rows if r["algorithm"] == "mincost"}
    for row in rows:
        if row["algorithm"] != "mincost":
            assert opt[int(row["seed"])] <= float(row["total_cost"]) + 1e-9


def test_experiment_family_source(tmp_path, capsys):
    out = tmp_path / "fam.csv"
    code, _, _ = run_cli(
        capsys,
        "experiment", "--out", str(out), "--family", "table5", "--eps", "0.01",
        "--rounds", "2", "--algs", "eca", "--checks", "jr,core", "--alpha", "1",
    )
    assert code == 0
    with open(out) as fh:
        fh.readline()
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert all(row["core_alpha"] == "1" for row in rows)


def test_experiment_records_partial_failures_per_row(tmp_path, capsys):
    out = tmp_path / "guard.csv"
    code, _, _ = run_cli(
        capsys,
        "experiment", "--out", str(out), "--rounds", "1", "--n", "3", "--m", "26",
        "--k", "3", "--algs", "gc", "--checks", "jr,core",
    )
    assert code == 0  # the run continues; the failing cell is marked
    with open(out) as fh:
        fh.readline()
        rows = list(csv.DictReader(fh))
    assert rows[0]["core_factor"] == "error"
    assert float(rows[0]["jr_factor"]) >= 1.0


def test_experiment_bad_args_exit_2(tmp_path, capsys):
    out = tmp_path / "x.csv"
    code, _, _ = run_cli(capsys, "experiment", "--out", str(out), "--checks", "bogus")
    assert code == 2
    code, _, _ = run_cli(capsys, "experiment", "--out", str(out), "--algs", "")
    assert code == 2
    code, _, _ = run_cli(capsys, "experiment", "--out", str(out), "--transit", "fancy")
    assert code == 2


def test_version(capsys):
    code, stdout, _ = run_cli(capsys, "version")
    assert code == 0
    assert stdout.strip() == fs.__version__


def test_usage_error_exits_2(capsys):
    assert main(["run", "--alg", "gc"]) == 2  # missing --instance
