import csv
import subprocess


def run(cli, *args):
    return subprocess.run([cli, *map(str, args)], capture_output=True, text=True)


def data_rows(path):
    with open(path) as f:
        return [row for row in csv.reader(line for line in f if not line.startswith("#"))]


def test_validate_exit_codes(cli, demo_dir, tmp_path):
    assert run(cli, "validate", "--world", demo_dir).returncode == 0

    world = tmp_path / "w"
    assert run(cli, "fixture", "--out", world, "--seed", 4).returncode == 0
    lines = (world / "Z.csv").read_text().splitlines()
    cells = lines[1].split(",")
    cells[1] = str(float(cells[1]) * 1.1)
    lines[1] = ",".join(cells)
    (world / "Z.csv").write_text("\n".join(lines) + "\n")
    bad = run(cli, "validate", "--world", world)
    assert bad.returncode == 1
    assert "row_balance" in bad.stdout

    assert run(cli, "validate", "--world", tmp_path / "nowhere").returncode == 2
    assert run(cli, "run", "--scenario", "builtin:1").returncode == 2


def test_zero_tariff_run_reports_no_change(cli, demo_dir, tmp_path):
    scenario = tmp_path / "zero.json"
    scenario.write_text('{"name": "zero", "shocks": []}')
    out = tmp_path / "out"
    result = run(cli, "run", "--world", demo_dir, "--scenario", scenario, "--out", out, "--no-timestamp")
    assert result.returncode == 0, result.stderr
    rows = data_rows(out / "zero" / "employment_by_income_group.csv")
    assert rows[0] == ["income_group", "baseline_jobs", "delta_jobs", "pct_change"]
    assert all(r[2] == "0.000" for r in rows[1:])


def test_run_and_compare(cli, demo_dir, tmp_path):
    out = tmp_path / "out"
    result = run(cli, "run", "--world", demo_dir, "--out", out, "--no-timestamp",
                 "--scenario", "builtin:1", "--scenario", "builtin:2", "--scenario", "builtin:3")
    assert result.returncode == 0, result.stderr
    for name in ("scenario1", "scenario2", "scenario3"):
        assert (out / name / "summary.json").exists()
        assert (out / name / "labour_groups.csv").exists()
    merged = run(cli, "compare", out / "scenario1", out / "scenario2", out / "scenario3")
    assert merged.returncode == 0, merged.stderr
    header = data_rows_from_text(merged.stdout)[0]
    assert header[:3] == ["income_group", "scenario1_jobs", "scenario1_pct"]
    assert len(header) == 7
    assert run(cli, "compare", out / "scenario1").returncode == 2


def data_rows_from_text(text):
    return [r for r in csv.reader(l for l in text.splitlines() if not l.startswith("#"))]
