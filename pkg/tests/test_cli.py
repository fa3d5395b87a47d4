"""Command-line interface: commands, formats, and exit codes."""

from __future__ import annotations

import json
import random

from ascentlab import build_2by3, f_max, load_instance
from ascentlab.cli import main
from ascentlab.verification import brute_force_extremes


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_round_trip(tmp_path, capsys):
    path = tmp_path / "chain2.json"
    code, out, _ = run(capsys, "gen", "--family", "2by3", "--n", "2", "--out", str(path))
    assert code == 0 and json.loads(out)["n"] == 2
    inst = load_instance(path)
    _, hi, _ = brute_force_extremes(inst)
    assert hi == 5
    mem = build_2by3(2)
    rng = random.Random(0)
    for _ in range(1000):
        x = tuple(rng.randrange(d.size) for d in inst.domains)
        assert inst.fitness(x) == mem.fitness(x)


def test_gen_boolean_writes_sidecars(tmp_path, capsys):
    path = tmp_path / "b4.json"
    code, _, _ = run(capsys, "gen", "--family", "bool-pw4", "--n", "4", "--out", str(path))
    assert code == 0
    inst = load_instance(path)
    assert inst.n_vars == 10 and inst.max_arity == 5
    codec = json.loads((tmp_path / "b4.codec.json").read_text())
    assert codec["collections"][0]["bits"] == 2
    decomp = json.loads((tmp_path / "b4.decomp.json").read_text())
    assert all(len(bag) <= 5 for bag in decomp["bags"])


def test_gen_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "--family", "2by3", "--n", "1", "--out", str(tmp_path / "x.json"))
    assert code == 2 and "n >= 2" in err


def test_ascend_summary(capsys):
    code, out, _ = run(capsys, "ascend", "--family", "2by3", "--n", "4", "--engine", "ordered")
    summary = json.loads(out)
    assert code == 0
    assert summary["steps"] == 22 and summary["terminal"] is True
    assert summary["final_fitness"] == f_max(4)


def test_ascend_expanded_steepest(capsys):
    code, out, _ = run(capsys, "ascend", "--family", "3by5", "--n", "4", "--engine", "steepest")
    assert code == 0 and json.loads(out)["steps"] == 2 * f_max(4) == 44


def test_ascend_step_limit_exit_code(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    code, out, _ = run(
        capsys,
        "ascend", "--family", "2by3", "--n", "4",
        "--engine", "ordered", "--step-limit", "1", "--trace", str(trace),
    )
    assert code == 3
    lines = trace.read_text().strip().splitlines()
    assert lines[0] == "step,var,from,to,fitness" and len(lines) == 2


def test_ascend_start_file_and_json_trace(tmp_path, capsys):
    start = tmp_path / "start.json"
    start.write_text(json.dumps(["B", "C"]))
    trace = tmp_path / "t.json"
    code, out, _ = run(
        capsys,
        "ascend", "--family", "2by3", "--n", "2",
        "--start", str(start), "--trace", str(trace),
    )
    assert code == 0 and json.loads(out)["steps"] == 0
    assert json.loads(trace.read_text())["terminal"] is True


def test_ascend_flag_conflicts(capsys, tmp_path):
    code, _, err = run(capsys, "ascend", "--family", "2by3")
    assert code == 2 and "--n" in err
    code, _, err = run(capsys, "ascend")
    assert code == 2
    code, _, err = run(
        capsys,
        "ascend", "--family", "2by3", "--n", "2",
        "--summary-only", "--trace", str(tmp_path / "t.csv"),
    )
    assert code == 2


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--check", "rank1")
    report = json.loads(out.strip())
    assert code == 0 and report["passed"] is True and report["name"] == "rank1"


def test_verify_with_caps(capsys):
    code, out, _ = run(
        capsys,
        "verify", "--check", "all",
        "--cap", "ordered-length=4", "--cap", "simulation=3",
        "--cap", "simulation-verify=2", "--cap", "padding=3",
        "--cap", "boolean=3", "--cap", "boolean-equiv=2", "--cap", "pathwidth=5",
    )
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    assert all(json.loads(line)["passed"] for line in lines)


def test_verify_bare_cap_applies_to_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--check", "pathwidth", "--cap", "6")
    assert code == 0 and json.loads(out.strip())["params"]["n_max"] == 6


def test_verify_legacy_check_names(capsys):
    code, out, _ = run(capsys, "verify", "--check", "prop11", "--cap", "4")
    assert code == 0 and json.loads(out.strip())["name"] == "ordered-length"


def test_verify_unknown_check(capsys):
    code, _, err = run(capsys, "verify", "--check", "bogus")
    assert code == 2 and "unknown check" in err


def test_bench_csv(capsys):
    code, out, _ = run(
        capsys, "bench", "--family", "2by3", "--n-list", "2,4,6", "--engine", "ordered"
    )
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "family,n,steps,seconds,steps_per_sec"
    steps = [int(line.split(",")[2]) for line in lines[1:]]
    assert steps == [f_max(n) for n in (2, 4, 6)]


def test_bench_empty_list_is_header_only(capsys):
    code, out, _ = run(capsys, "bench", "--family", "2by3", "--n-list", "")
    assert code == 0 and out == "family,n,steps,seconds,steps_per_sec\n"


def test_bench_boolean_doubles(capsys):
    code, out, _ = run(
        capsys, "bench", "--family", "bool-pw4", "--n-list", "2,4", "--engine", "steepest"
    )
    lines = out.strip().splitlines()
    steps = [int(line.split(",")[2]) for line in lines[1:]]
    assert code == 0 and steps == [2 * f_max(2), 2 * f_max(4)]


def test_ascend_boolean_instance_from_file(tmp_path, capsys):
    path = tmp_path / "b2.json"
    run(capsys, "gen", "--family", "bool-pw4", "--n", "2", "--out", str(path))
    code, out, _ = run(capsys, "ascend", "--instance", str(path), "--engine", "steepest")
    assert code == 0 and json.loads(out)["steps"] == 2 * f_max(2)


def test_verify_failure_exits_nonzero(capsys, monkeypatch):
    import ascentlab.cli as cli
    from ascentlab.verification import CheckReport

    def fake_run_check(name, caps):
        return CheckReport(name, {}, False, "forced", {"why": "injected"}, 0.0)

    monkeypatch.setattr(cli, "run_check", fake_run_check)
    code, out, _ = run(capsys, "verify", "--check", "rank1")
    report = json.loads(out.strip())
    assert code == 1 and report["passed"] is False and report["counterexample"]
