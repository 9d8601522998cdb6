"""
Tests for the zc-help command line
Exit codes, report output and the data directory override
"""

import json
import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from zc_help.cli import main
from zc_help.reporting import SCHEMA_VERSION, Report

from conftest import read_group_document


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("ZC_HELP_DATA_DIR", "ZC_HELP_WORKERS", "ZC_HELP_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


class TestValidate:
    def test_bundled_file(self, data_dir, capsys):
        assert main(["validate", str(data_dir / "s5.json")]) == 0
        out = capsys.readouterr().out
        assert out.startswith("ok: S5 (order 120, 7 classes")

    def test_by_stem(self, capsys):
        assert main(["validate", "2s5"]) == 0
        assert "2.S5" in capsys.readouterr().out

    def test_invalid_table(self, tmp_path, capsys):
        document = read_group_document("s5")
        document["characters"][6]["values"][1] = 2
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        assert main(["validate", str(path)]) == 3
        err = capsys.readouterr().err
        assert "error [validation-error] first-orthogonality" in err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "absent.json")]) == 3
        assert "error [io-error]" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        assert main(["validate", str(path)]) == 3
        assert "error [parse-error]" in capsys.readouterr().err


class TestConfigurationErrors:
    def test_unknown_toggle(self, capsys):
        assert main(["verify", "--group", "s5", "--toggles", "ordinary,telepathy"]) == 4
        assert "unknown toggle 'telepathy'" in capsys.readouterr().err

    def test_unknown_group(self, capsys):
        assert main(["verify", "--group", "A5"]) == 4
        assert "configuration-error" in capsys.readouterr().err

    def test_usage_error(self, capsys):
        assert main(["solve", "--group", "s5"]) == 4

    def test_bad_workers(self, capsys):
        assert main(["--workers", "0", "verify", "--group", "s5"]) == 4

    def test_invalid_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("ZC_HELP_WORKERS", "many")
        assert main(["list"]) == 4
        assert "invalid settings" in capsys.readouterr().err

    def test_missing_data_dir(self, tmp_path, capsys):
        assert main(["--data-dir", str(tmp_path / "nowhere"), "list"]) == 4


class TestSolve:
    def test_json_report(self, capsys):
        assert main(["solve", "--group", "s5", "--order", "6", "--format", "json"]) == 0
        report = Report.from_json(capsys.readouterr().out)
        assert report.schema_version == SCHEMA_VERSION
        assert report.command == "solve"
        assert [o.order for o in report.orders] == [6]
        (solution,) = report.orders[0].solutions
        assert solution.pa == {"6a": 1}
        assert solution.class_id == "6a"
        assert solution.powers == {"u^2": {"3a": 1}, "u^3": {"2b": 1}}
        assert report.verdict == "verified"

    def test_text_report(self, capsys):
        assert main(["solve", "--group", "s5", "--order", "10"]) == 0
        out = capsys.readouterr().out
        assert "no torsion units of this order" in out
        assert "ZC1: verified" in out

    def test_toggles_are_reported(self, capsys):
        argv = ["solve", "--group", "s5", "--order", "4", "--format", "json"]
        assert main(argv + ["--toggles", "no-cross-check", "--modular", "5"]) == 0
        report = Report.from_json(capsys.readouterr().out)
        assert "cross-check" not in report.toggles
        assert "modular" in report.toggles
        assert report.modular_primes == [5]


class TestVerify:
    def test_report_file(self, tmp_path, capsys):
        out = tmp_path / "s5.json"
        assert main(["verify", "--group", "s5", "--format", "json", "--out", str(out)]) == 0
        assert capsys.readouterr().out == ""
        report = Report.from_json(out.read_text(encoding="utf-8"))
        assert report.group == "S5"
        assert [o.order for o in report.orders] == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]
        assert report.exit_code == 0

    def test_unwritable_output(self, tmp_path, capsys):
        out = tmp_path / "missing" / "report.json"
        assert main(["verify", "--group", "s5", "--out", str(out)]) == 3
        assert "error [io-error]" in capsys.readouterr().err

    def test_deterministic_json(self, capsys):
        argv = ["verify", "--group", "s5", "--format", "json"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first

    @pytest.mark.slow
    @pytest.mark.parametrize("group", ["2s5", "gl25"])
    def test_deterministic_json_with_quotient(self, group, capsys):
        argv = ["verify", "--group", group, "--format", "json"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first
        report = Report.from_json(first)
        assert [q.name for q in report.quotients] == ["S5"]

    @pytest.mark.slow
    def test_spin_group_open_without_modular_character(self, capsys):
        argv = ["verify", "--group", "2s5", "--toggles", "no-modular", "--format", "json"]
        assert main(argv) == 2
        report = Report.from_json(capsys.readouterr().out)
        assert report.verdict == "open"
        assert report.exit_code == 2
        (eight,) = [o for o in report.orders if o.order == 8]
        assert eight.status == "open"
        # ε(8a) + ε(8b) = 1 with ε(8a) in {-1, 0, 1, 2}
        assert len(eight.solutions) == 4
        assert "modular" not in report.toggles


class TestList:
    def test_bundled_groups(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for stem in ("s5", "2s5", "gl25"):
            assert stem in out

    def test_data_dir_from_environment(self, tmp_path, monkeypatch, data_dir, capsys):
        document = read_group_document("s5")
        document["name"] = "S5copy"
        (tmp_path / "mine.json").write_text(json.dumps(document), encoding="utf-8")
        monkeypatch.setenv("ZC_HELP_DATA_DIR", str(tmp_path))
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert "mine" in out
        assert "S5copy" in out
        assert "data-dir" in out

    def test_data_dir_shadows_bundled_stem(self, tmp_path, data_dir, capsys):
        shutil.copy(data_dir / "s5.json", tmp_path / "s5.json")
        assert main(["--data-dir", str(tmp_path), "validate", "s5"]) == 0
        assert "ok: S5" in capsys.readouterr().out
