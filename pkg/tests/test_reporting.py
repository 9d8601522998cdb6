"""
Tests for report assembly and rendering
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from pydantic import ValidationError

from zc_help.constraints import ConstraintOptions
from zc_help.reporting import Report, build_report, render_text
from zc_help.solver import OrderVerdict, ZC1Status
from zc_help.units import PAVector, SolvedUnit


@pytest.fixture
def s5_report(s5, s5_result):
    return build_report("verify", s5, ConstraintOptions(), list(s5_result.values()), [])


class TestBuildReport:
    def test_verified(self, s5_report):
        assert s5_report.verdict == "verified"
        assert s5_report.exit_code == 0
        assert s5_report.classes == ["1a", "2a", "3a", "5a", "2b", "4a", "6a"]
        assert s5_report.modular_primes is None

    def test_json_round_trip(self, s5_report):
        text = s5_report.to_json()
        assert text.endswith("}\n")
        assert '"seconds"' not in text
        assert Report.from_json(text) == s5_report

    def test_unknown_fields_rejected(self, s5_report):
        text = s5_report.to_json().replace('"verdict"', '"extra": 1, "verdict"', 1)
        with pytest.raises(ValidationError):
            Report.from_json(text)

    def test_open_order_sets_exit_code(self, s5):
        pa = PAVector.from_mapping(s5.class_ids, 2, {"2a": 2, "2b": -1})
        identity = SolvedUnit(1, PAVector.trivial(s5.class_ids, 1, "1a"))
        unit = SolvedUnit(2, pa, ((2, identity),))
        verdict = OrderVerdict(2, (unit,), ZC1Status.OPEN)
        report = build_report("solve", s5, ConstraintOptions(), [verdict], [])
        assert report.verdict == "open"
        assert report.exit_code == 2
        assert not report.orders[0].solutions[0].trivial
        assert "OPEN" in render_text(report)

    def test_excluded_orders_listed_separately(self, s5):
        excluded = OrderVerdict(7, (), ZC1Status.VERIFIED_TRIVIAL, excluded=True)
        report = build_report("verify", s5, ConstraintOptions(), [excluded], [])
        assert report.orders == []
        assert report.excluded_orders == [7]
        assert "excluded by order spectrum: 7" in render_text(report)


class TestRenderText:
    def test_lists_every_order(self, s5_report):
        text = render_text(s5_report)
        assert text.startswith("S5 (order 120), verify\n")
        assert "order 6: verified" in text
        assert "{e(6a)=1}  [class 6a]" in text
        assert text.endswith("ZC1: verified\n")
