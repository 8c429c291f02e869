import json

import pytest

from fplab.cli import DEFAULTS, main, parse_config_file, resolve_config
from fplab.errors import ConfigError
from fplab.report import ReportRow, count_failures, summarize, write_csv


class _Args:
    def __init__(self, **kw):
        self.config = None
        for k, v in kw.items():
            setattr(self, k, v)

    def __getattr__(self, name):
        return None


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_config_parse_and_override(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("primes = 5,7\nseed = 9\n# comment\nepsilon = 0.5\n")
    parsed = parse_config_file(cfg_file)
    assert parsed == {"primes": "5,7", "seed": "9", "epsilon": "0.5"}
    cfg = resolve_config(_Args(config=str(cfg_file), seed=4))
    assert cfg["primes"] == [5, 7]
    assert cfg["seed"] == 4  # flag wins
    assert cfg["epsilon"] == 0.5


def test_config_rejects_bad_values(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("primes = 5,4,7\n")
    with pytest.raises(ConfigError, match="4 is not prime"):
        resolve_config(_Args(config=str(cfg_file)))
    cfg_file.write_text("nonsense = 1\n")
    with pytest.raises(ConfigError, match="nonsense"):
        resolve_config(_Args(config=str(cfg_file)))
    cfg_file.write_text("workers 2\n")
    with pytest.raises(ConfigError):
        resolve_config(_Args(config=str(cfg_file)))


def test_max_p_filters_primes():
    cfg = resolve_config(_Args(max_p=7))
    assert cfg["primes"] == [p for p in DEFAULTS["primes"] if p <= 7]
    assert cfg["sweep_primes"] == []


def test_report_row_helpers(tmp_path):
    rows = [
        ReportRow("a", 5, "x=1", 3, 3, None, "pass"),
        ReportRow("a", 5, "x=2", 3, 4, 0.75, "fail"),
        ReportRow("b", 7, "", None, None, None, "skip"),
    ]
    assert count_failures(rows) == 1
    summary = summarize(rows)
    assert summary["suites"]["a"] == {"pass": 1, "fail": 1, "skip": 0, "report": 0}
    path = tmp_path / "rows.csv"
    write_csv(rows, path)
    text = path.read_text().splitlines()
    assert text[0] == "suite,p,params,measured,skeleton,ratio,status,ms"
    assert text[2] == "a,5,x=2,3,4,0.75,fail,0"
    with pytest.raises(ValueError):
        ReportRow("a", 5, "", status="bogus")


def _write_cfg(tmp_path, body):
    cfg_file = tmp_path / "t.cfg"
    cfg_file.write_text(body)
    return str(cfg_file)


def test_identities_command_green(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "primes = 5,7\nidentity_trials = 3\namp_trials = 2\n")
    out = tmp_path / "out"
    rc = main(["identities", "--config", cfg, "--out", str(out)])
    assert rc == 0
    lines = (out / "identities.csv").read_text().splitlines()
    assert lines[0] == "suite,p,params,measured,skeleton,ratio,status,ms"
    assert all(",fail," not in line for line in lines[1:])
    summary = json.loads((out / "summary.json").read_text())
    assert summary["suites"]["gram_structure"]["pass"] == 3
    resolved = (out / "resolved.cfg").read_text()
    assert "primes = 5,7" in resolved and "seed = 1" in resolved


def test_identities_empty_primes_exit_zero(tmp_path):
    cfg = _write_cfg(tmp_path, "primes =\nidentity_trials = 3\namp_trials = 0\n")
    out = tmp_path / "out"
    rc = main(["identities", "--config", cfg, "--out", str(out)])
    assert rc == 0
    lines = (out / "identities.csv").read_text().splitlines()
    # only the fixed gram rows remain
    assert all(line.startswith("gram_structure") for line in lines[1:])


def test_config_error_exit_code(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "primes = 6\n")
    rc = main(["identities", "--config", cfg, "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "6 is not prime" in capsys.readouterr().err


def test_oracles_reproducible_and_skips(tmp_path):
    cfg = _write_cfg(
        tmp_path, "primes = 7,37\noracle_trials = 4\n"
    )
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["oracles", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["oracles", "--config", cfg, "--out", str(out2)]) == 0
    assert _read(out1 / "oracles.csv") == _read(out2 / "oracles.csv")
    text = (out1 / "oracles.csv").read_text()
    assert ",skip," in text  # p = 37 exceeds the oracle prime cap
    cfg_big = _write_cfg(tmp_path, "primes = 7\noracle_trials = 2\noracle_max_size = 12\n")
    out3 = tmp_path / "o3"
    assert main(["oracles", "--config", cfg_big, "--out", str(out3)]) == 0
    assert ",skip," in (out3 / "oracles.csv").read_text()


def test_sweep_workers_agree(tmp_path):
    cfg = _write_cfg(tmp_path, "sweep_primes = 61,127\n")
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    assert main(["sweep", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["sweep", "--config", cfg, "--out", str(out2), "--workers", "2"]) == 0
    assert _read(out1 / "sweep.csv") == _read(out2 / "sweep.csv")
    summary = json.loads((out1 / "summary.json").read_text())
    assert set(summary["suites"]) >= {"sweep_tabc", "sweep_subgroup"}


def test_regions_command(tmp_path):
    cfg = _write_cfg(tmp_path, "region_check_grid = 40\nregion_table_grid = 8\n")
    out = tmp_path / "r"
    rc = main(["regions", "--config", cfg, "--out", str(out)])
    assert rc == 0
    text = (out / "regions.csv").read_text()
    assert "region_boundary" in text and "region_table" in text
    assert ",fail," not in text


def test_charsum_command(tmp_path):
    out = tmp_path / "c"
    rc = main(
        ["charsum", "--out", str(out), "--p", "101", "--m", "50",
         "--set-size", "8", "--x-len", "9"]
    )
    assert rc == 0
    text = (out / "charsum.csv").read_text()
    assert "stat=W" in text and "stat=modulus" in text


def test_charsum_subgroup_source(tmp_path):
    out = tmp_path / "cs"
    rc = main(
        ["charsum", "--out", str(out), "--p", "61", "--m", "30",
         "--subgroup-order", "12", "--x-len", "7"]
    )
    assert rc == 0
    assert "nS=12" in (out / "charsum.csv").read_text()


def test_timings_flag_stamps_rows(tmp_path):
    cfg = _write_cfg(tmp_path, "primes = 5\nidentity_trials = 2\namp_trials = 1\n")
    out = tmp_path / "t"
    assert main(["identities", "--config", cfg, "--out", str(out), "--timings"]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert "elapsed_ms" in summary
