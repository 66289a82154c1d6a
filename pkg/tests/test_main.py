import csv

import pytest

from main import CONFIG_FILE, parse_args, write_report, write_tables


def test_parse_args_defaults():
    args = parse_args(["--config", "runs/integrals.yaml"])
    assert args.config == "runs/integrals.yaml"
    assert args.seed is None
    assert args.out is None
    assert args.tol_override == []
    assert args.app_config == CONFIG_FILE


def test_parse_args_repeatable_overrides():
    args = parse_args(["--config", "r.yaml", "--seed", "7", "--tol-override", "gram=1e-6", "--tol-override", "verify=1e-5"])
    assert args.seed == 7
    assert args.tol_override == ["gram=1e-6", "verify=1e-5"]


def test_config_is_required():
    with pytest.raises(SystemExit):
        parse_args([])


def test_write_report_is_atomic(tmp_path):
    target = tmp_path / "out" / "report.json"
    write_report(target, "{}\n")
    write_report(target, '{"a": 1}\n')
    assert target.read_text(encoding="utf-8") == '{"a": 1}\n'
    assert [p.name for p in target.parent.iterdir()] == ["report.json"]


def test_write_tables(tmp_path):
    write_tables(tmp_path / "csv", {"decay.csv": (["t", "outgoing_norm"], [[0.0, 1.0], [2.0, 0.25]])})
    with (tmp_path / "csv" / "decay.csv").open(encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert rows == [["t", "outgoing_norm"], ["0.0", "1.0"], ["2.0", "0.25"]]
