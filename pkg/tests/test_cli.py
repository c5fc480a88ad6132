import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from polarmem import cli


def run(args, capsys):
    try:
        code = cli.main(args)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def schema(name):
    text = resources.files("polarmem").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def test_verify_passes(capsys):
    code, out, _ = run(["verify", "--n", "7", "--p", "2", "--list", "4", "--trials", "20"], capsys)
    assert code == 0
    assert "cross_model" in out and "recovery_round_trip" in out and "FAIL" not in out


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--n", "7", "--p", "0", "--list", "4"],
        ["verify", "--n", "7", "--p", "2", "--list", "3"],
        ["verify", "--n", "7", "--p", "7", "--list", "4"],
        ["schedule", "--kind", "psn", "--lambda", "1", "--p", "2"],
        ["schedule", "--kind", "nope", "--lambda", "3", "--p", "1"],
        ["report", "--n", "10", "--p", "0"],
        ["fer", "--n", "7", "--p", "2", "--K", "200", "--ebn0", "1"],
        ["fer", "--n", "7", "--p", "2", "--K", "80", "--ebn0", "1", "--frames", "0"],
    ],
)
def test_usage_errors_exit_2(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 2
    assert "error" in err


def test_verify_failure_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(cli, "_cross_model_trial", lambda *a: False)
    code, out, _ = run(["verify", "--n", "5", "--p", "1", "--trials", "2"], capsys)
    assert code == 1 and "FAIL" in out


def test_schedule_psn_text(capsys):
    code, out, _ = run(["schedule", "--kind", "psn", "--lambda", "3", "--p", "1"], capsys)
    assert code == 0
    lines = out.splitlines()
    cells = [[c.strip() for c in line.split(" | ")] for line in lines[2:5]]
    assert cells[0] == ["Input 0", "s7^1 s6^1", "s5^1 s4^1", "s3^2 s2^2", "s1^2 s0^2"]
    assert cells[1] == ["Input 1", "- -", "s7^3 s6^3", "s7^3 s6^3", "s5^3 s4^3"]
    assert cells[2] == ["Output", "s7^3 s6^3", "s5^3 s4^3", "s3^3 s2^3", "s1^3 s0^3"]
    assert lines[-1] == "cycles: 4"


def test_schedule_recovery_csv(capsys):
    code, out, _ = run(["schedule", "--kind", "recovery", "--lambda", "3", "--p", "1", "--csv"], capsys)
    assert code == 0
    assert out.splitlines()[1] == "Input 0,s0^3 s1^3,s2^3 s3^3,s0^2 s1^2,s4^2 s5^2"


def test_schedule_empty_recovery(capsys):
    code, out, _ = run(["schedule", "--kind", "recovery", "--lambda", "1", "--p", "1"], capsys)
    assert code == 0 and out.splitlines()[-1] == "cycles: 0"


@pytest.mark.parametrize(
    "name,args",
    [
        ("verify", ["verify", "--n", "5", "--p", "1", "--trials", "3", "--json"]),
        ("schedule", ["schedule", "--kind", "recovery", "--lambda", "4", "--p", "1", "--json"]),
        ("report", ["report", "--n", "10", "--p", "6", "--list", "16", "--json"]),
        ("fer", ["fer", "--n", "6", "--p", "2", "--K", "40", "--ebn0", "1", "2", "--frames", "10", "--json"]),
    ],
)
def test_json_outputs_validate(name, args, capsys):
    code, out, _ = run(args, capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema(name))
    assert doc["manifest"]["subcommand"] == name


def test_report_reproduces_table_rows(capsys):
    code, out, _ = run(["report", "--n", "10", "--p", "6", "--list", "16", "--json"], capsys)
    rows = {r["name"]: r for r in json.loads(out)["memory"]["architectures"]}
    assert (rows["folded_psn"]["sram_port_width"], rows["folded_psn"]["sram_size"]) == (128, 512)
    assert (rows["folded_path_memory"]["sram_port_width"], rows["folded_path_memory"]["sram_size"]) == (64, 1024)
    assert (rows["merged_memory"]["sram_port_width"], rows["merged_memory"]["sram_size"]) == (128, 1024)


def test_report_large_code_has_no_stalls(capsys):
    code, out, _ = run(["report", "--n", "20", "--p", "6", "--list", "8", "--json"], capsys)
    assert code == 0 and json.loads(out)["stall_cycles"] == 0


def test_report_text(capsys):
    code, out, _ = run(["report", "--n", "5", "--p", "1", "--list", "2"], capsys)
    assert code == 0 and out.splitlines()[-1] == "stall cycles: 4"


def test_fer_csv_is_byte_identical(capsys):
    args = ["fer", "--n", "6", "--p", "2", "--list", "2", "--K", "40", "--ebn0", "0", "2", "--frames", "20", "--seed", "5"]
    first = run(args, capsys)[1]
    second = run(args + ["--threads", "2"], capsys)[1]
    assert first == second
    lines = first.splitlines()
    assert lines[0].startswith("# ") and json.loads(lines[0][2:])["seed"] == 5
    assert lines[1] == "ebn0_db,frames,errors,fer,ci_halfwidth"
    assert len(lines) == 4 and lines[2].startswith("0,20,")


def test_threads_environment_variable(capsys, monkeypatch):
    monkeypatch.setenv("POLARMEM_THREADS", "0")
    code, _, err = run(["fer", "--n", "6", "--p", "2", "--K", "40", "--ebn0", "1", "--frames", "2"], capsys)
    assert code == 2 and "threads" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polarmem.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("polarmem ")
