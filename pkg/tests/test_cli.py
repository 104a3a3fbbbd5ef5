"""End-to-end command-line tests: flags, outputs, exit codes."""

import os
import re

import pytest

from owcsim.cli import main, parse_users_spec
from owcsim.errors import ConfigError
from owcsim.report import DROPS_HEADER, SUMMARY_HEADER


def run_cli(tmp_path, *extra, name="out"):
    out = tmp_path / name
    code = main(["--users", "2:4:2", "--drops", "2", "--seed", "42",
                 "--system", "both", "--out", str(out), *extra])
    return code, out


def test_users_spec_forms():
    assert parse_users_spec("2:12:2") == [2, 4, 6, 8, 10, 12]
    assert parse_users_spec("5") == [5]
    assert parse_users_spec("3:5") == [3, 4, 5]


def test_users_spec_rejects_descending():
    with pytest.raises(ConfigError, match="empty user range"):
        parse_users_spec("12:2:2")
    with pytest.raises(ConfigError, match="invalid user range"):
        parse_users_spec("a:b")


def test_basic_run_writes_outputs(tmp_path, capsys):
    code, out = run_cli(tmp_path)
    assert code == 0
    drops = (out / "drops.csv").read_text().splitlines()
    summary = (out / "summary.csv").read_text().splitlines()
    assert drops[0] == DROPS_HEADER
    assert summary[0] == SUMMARY_HEADER
    assert len(drops) == 1 + 2 * 2 * 2  # systems x counts x drops
    assert len(summary) == 1 + 2 * 2
    assert (out / "config_resolved.txt").exists()


def test_diagnostic_line_reports_positive_spot(tmp_path, capsys):
    code, _ = run_cli(tmp_path)
    assert code == 0
    text = capsys.readouterr().out
    m = re.search(r"vcsel array spot area ([0-9.eE+-]+) m\^2", text)
    assert m, text
    assert float(m.group(1)) > 0


def test_descending_user_range_exits_1(tmp_path, capsys):
    code = main(["--users", "12:2:2", "--out", str(tmp_path / "x")])
    assert code == 1
    assert "empty user range" in capsys.readouterr().err


def test_bad_config_file_exits_1(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[vcsel]\nbeam_waste = 5e-6\n")
    code = main(["--config", str(cfg), "--out", str(tmp_path / "x")])
    assert code == 1
    assert "beam_waste" in capsys.readouterr().err


def test_missing_config_file_exits_1(tmp_path, capsys):
    code = main(["--config", str(tmp_path / "nope.cfg")])
    assert code == 1


def test_flag_overrides_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[run]\ndrops = 9\nseed = 1\n[room]\nwidth = 4.0\n")
    out = tmp_path / "out"
    code = main(["--config", str(cfg), "--users", "2", "--drops", "1",
                 "--system", "led", "--out", str(out)])
    assert code == 0
    drops = (out / "drops.csv").read_text().splitlines()
    assert len(drops) == 2  # --drops 1 beat the config's 9
    resolved = (out / "config_resolved.txt").read_text()
    assert "width = 4.0" in resolved  # config survived where no flag applied
    assert "drops = 1" in resolved


def test_env_var_sets_default_out(tmp_path, monkeypatch):
    monkeypatch.setenv("OWCSIM_OUT", str(tmp_path / "envout"))
    code = main(["--users", "2", "--drops", "1", "--system", "led"])
    assert code == 0
    assert (tmp_path / "envout" / "drops.csv").exists()


def test_reruns_are_byte_identical(tmp_path):
    _, out_a = run_cli(tmp_path, name="a")
    _, out_b = run_cli(tmp_path, name="b")
    assert (out_a / "drops.csv").read_bytes() == (out_b / "drops.csv").read_bytes()
    assert (out_a / "summary.csv").read_bytes() == (out_b / "summary.csv").read_bytes()


def test_plots_rendered_when_requested(tmp_path):
    code, out = run_cli(tmp_path, "--plots")
    assert code == 0
    for name in ("rate_vs_users.svg", "cf_vs_users.svg"):
        body = (out / name).read_text()
        assert body.lstrip().startswith("<?xml")
        assert "<svg" in body


def test_dump_channel_files(tmp_path):
    code, out = run_cli(tmp_path, "--dump-channel")
    assert code == 0
    files = sorted(os.listdir(out / "channels"))
    assert "led_u2_d0.csv" in files and "vcsel_u4_d1.csv" in files
    rows = (out / "channels" / "vcsel_u4_d1.csv").read_text().splitlines()
    assert len(rows) == 4  # one per user
    assert len(rows[0].split(",")) == 8  # one per AP


def test_resolved_config_round_trips(tmp_path):
    from owcsim.config import parse_config

    _, out = run_cli(tmp_path)
    text = (out / "config_resolved.txt").read_text()
    assert parse_config(text) == parse_config(text)
    assert "beam_waist_w0 = 5e-06" in text


def test_ook_flag_switches_rate_model(tmp_path):
    out = tmp_path / "ook"
    code = main(["--users", "2", "--drops", "2", "--system", "led",
                 "--rate-model", "ook", "--out", str(out)])
    assert code == 0
    resolved = (out / "config_resolved.txt").read_text()
    assert "rate_model = ook" in resolved
