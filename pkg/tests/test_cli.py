"""CLI contract: subcommands, exit codes, and output formats."""

import json

import pytest

from robust_select.cli import main

TINY = {
    "agents": [[0.0, 0.0], [10.0, 0.0]],
    "actions": [[0.0, 0.0], [10.0, 0.0], [5.0, 5.0]],
    "matroid": {"type": "uniform", "rank": 1},
}


@pytest.fixture
def tiny_path(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(TINY))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_fast(tiny_path, capsys):
    code, out, _ = run_cli(capsys, "solve", "--config", tiny_path, "--algorithm", "fast")
    assert code == 0
    document = json.loads(out)
    assert document["selected"] == [2]
    assert document["algorithm"] == "fast"
    assert document["min_value"] == pytest.approx(7.0711, abs=1e-3)


def test_solve_brute_agrees_with_fast(tiny_path, capsys):
    code, fast_out, _ = run_cli(capsys, "solve", "--config", tiny_path, "--algorithm", "fast")
    assert code == 0
    code, brute_out, _ = run_cli(capsys, "solve", "--config", tiny_path, "--algorithm", "brute")
    assert code == 0
    assert json.loads(fast_out)["selected"] == json.loads(brute_out)["selected"]


def test_solve_output_file(tiny_path, tmp_path, capsys):
    out_path = tmp_path / "solution.json"
    code, out, _ = run_cli(
        capsys, "solve", "--config", tiny_path, "--algorithm", "ratio", "--output", str(out_path)
    )
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text())["selected"] == [2]


def test_solve_missing_file(capsys):
    code, _, err = run_cli(capsys, "solve", "--config", "does-not-exist.json", "--algorithm", "fast")
    assert code == 2
    assert "error" in err


def test_solve_malformed_config_names_field(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"agents": [[0, 0]], "matroid": {"type": "uniform", "rank": 1}}')
    code, _, err = run_cli(capsys, "solve", "--config", str(path), "--algorithm", "fast")
    assert code == 2
    assert "'actions'" in err


def test_solve_bad_params(tiny_path, capsys):
    code, _, err = run_cli(
        capsys, "solve", "--config", tiny_path, "--algorithm", "fast", "--delta", "-1"
    )
    assert code == 2
    assert "delta" in err


def test_bench_writes_both_csvs(tmp_path, capsys):
    out = tmp_path / "results.csv"
    summary = tmp_path / "summary.csv"
    code, stdout, _ = run_cli(
        capsys,
        "bench",
        "--agents", "2", "--actions", "8", "--z-min", "1", "--z-max", "2",
        "--trials", "2", "--seed", "5",
        "--algorithms", "fast,ratio",
        "--out", str(out), "--summary", str(summary),
    )
    assert code == 0
    assert len(out.read_text().splitlines()) == 1 + 2 * 2 * 2
    summary_lines = summary.read_text().splitlines()
    assert len(summary_lines) == 1 + 2 * 2  # (z values) x (algorithms)
    # the stdout table mirrors the summary file
    assert stdout.splitlines()[0] == summary_lines[0]
    assert stdout.splitlines()[1:] == summary_lines[1:]


def test_bench_deterministic_files(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        code, _, _ = run_cli(
            capsys,
            "bench",
            "--agents", "2", "--actions", "6", "--z-min", "1", "--z-max", "1",
            "--trials", "3", "--seed", "9", "--no-wall-time",
            "--out", str(path),
        )
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_bench_config_file_with_overrides(tmp_path, capsys):
    config = tmp_path / "bench.json"
    config.write_text('{"n_agents": 2, "n_actions": 6, "trials": 2, "z_min": 1, "z_max": 1}')
    out = tmp_path / "r.csv"
    code, _, _ = run_cli(
        capsys, "bench", "--config", str(config), "--trials", "1", "--algorithms", "greedy",
        "--out", str(out), "--no-wall-time",
    )
    assert code == 0
    assert len(out.read_text().splitlines()) == 2


def test_bench_unknown_algorithm(capsys):
    code, _, err = run_cli(capsys, "bench", "--algorithms", "fast,warp", "--trials", "1")
    assert code == 2
    assert "unknown algorithm" in err


def test_bench_unwritable_output(tmp_path, capsys):
    code, _, err = run_cli(
        capsys,
        "bench",
        "--agents", "2", "--actions", "4", "--z-min", "1", "--z-max", "1", "--trials", "1",
        "--out", str(tmp_path / "nope" / "r.csv"),
    )
    assert code == 2
    assert "error" in err


def test_check_passes_on_small_battery(capsys):
    code, out, _ = run_cli(capsys, "check", "--instances", "25", "--seed", "0")
    assert code == 0
    lines = out.splitlines()
    assert lines
    assert all(line.startswith("PASS") for line in lines)


def test_check_rejects_oversized_cap(capsys):
    code, _, err = run_cli(capsys, "check", "--max-actions", "20")
    assert code == 2
    assert "max-actions" in err


def test_check_injected_defect_fails_with_counterexample(capsys):
    code, out, _ = run_cli(capsys, "check", "--instances", "2", "--inject-defect")
    assert code == 1
    lines = out.splitlines()
    fail_lines = [i for i, line in enumerate(lines) if line.startswith("FAIL matroid_axioms")]
    assert len(fail_lines) == 1
    # the next line is a replayable scenario document
    counterexample = json.loads(lines[fail_lines[0] + 1])
    assert {"agents", "actions", "matroid"} <= set(counterexample)
