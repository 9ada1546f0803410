import csv
import decimal
import json
from fractions import Fraction

import pytest

from partbounds import __version__
from partbounds.enclosure import Enclosure
from partbounds.reports import (
    ReportDocument,
    SuiteReport,
    decimal_digits,
    decimal_directed,
    fraction_str,
    interval_payload,
    parse_fraction,
    write_csv,
)


class TestDecimalDigits:
    @pytest.mark.parametrize(
        "prec,digits", [(1, 1), (8, 3), (53, 16), (64, 20), (128, 39), (160, 49), (256, 78)]
    )
    def test_known_values(self, prec, digits):
        assert decimal_digits(prec) == digits

    def test_never_undercounts(self):
        # 10^digits must exceed 2^prec so distinct mpf values stay distinct
        for prec in range(1, 600):
            assert 10 ** decimal_digits(prec) >= 2**prec

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            decimal_digits(0)


class TestFractionStrings:
    @pytest.mark.parametrize(
        "value,text",
        [(Fraction(3, 4), "3/4"), (Fraction(-3, 4), "-3/4"), (Fraction(5), "5"), (0, "0")],
    )
    def test_render(self, value, text):
        assert fraction_str(value) == text

    def test_round_trip(self):
        for value in (Fraction(190569292), Fraction(-7, 360), Fraction(24 * 100 - 1, 24)):
            assert parse_fraction(fraction_str(value)) == value

    def test_parse_decimal_strings(self):
        # exact_decimal output is also parseable
        assert parse_fraction("0.125") == Fraction(1, 8)


class TestDecimalDirected:
    def test_floor_and_ceiling_bracket(self):
        lo = decimal_directed(Fraction(1, 3), 10, decimal.ROUND_FLOOR)
        hi = decimal_directed(Fraction(1, 3), 10, decimal.ROUND_CEILING)
        assert lo == "0.3333333333"
        assert hi == "0.3333333334"
        assert Fraction(lo) < Fraction(1, 3) < Fraction(hi)

    def test_negative_floor_moves_down(self):
        lo = decimal_directed(Fraction(-1, 3), 10, decimal.ROUND_FLOOR)
        hi = decimal_directed(Fraction(-1, 3), 10, decimal.ROUND_CEILING)
        assert Fraction(lo) < Fraction(-1, 3) < Fraction(hi)

    def test_exact_value_unchanged(self):
        assert Fraction(decimal_directed(Fraction(5, 4), 10, decimal.ROUND_FLOOR)) == Fraction(5, 4)


class TestIntervalPayload:
    def test_exact_fields_lossless(self):
        enc = Enclosure.from_exact(Fraction(1, 3), 64)
        payload = interval_payload(enc)
        assert Fraction(payload["lo_exact"]) == enc.lo_fraction
        assert Fraction(payload["hi_exact"]) == enc.hi_fraction
        assert payload["precision"] == 64

    def test_directed_decimals_bracket_endpoints(self):
        enc = Enclosure.pi(128)
        payload = interval_payload(enc)
        assert Fraction(payload["lo"]) <= enc.lo_fraction
        assert enc.hi_fraction <= Fraction(payload["hi"])

    def test_negative_interval(self):
        enc = -Enclosure.from_exact(Fraction(1, 3), 96)
        payload = interval_payload(enc)
        assert Fraction(payload["lo"]) <= Fraction(payload["lo_exact"])
        assert Fraction(payload["hi_exact"]) <= Fraction(payload["hi"])


class TestReportDocument:
    def test_json_round_trip(self):
        doc = ReportDocument(
            command="exact",
            parameters={"n": 14},
            results={"p": "135"},
            passed=True,
            exit_code=0,
            seconds=0.25,
        )
        data = json.loads(doc.to_json())
        assert data["command"] == "exact"
        assert data["results"]["p"] == "135"
        assert data["version"] == __version__
        assert data["exit_code"] == 0


class TestSuiteReport:
    def test_passed_tracks_failures(self):
        report = SuiteReport("demo", 3, [], {}, [], 0.1)
        assert report.passed
        report = SuiteReport("demo", 3, ["bad"], {}, [], 0.1)
        assert not report.passed

    def test_summary_fields(self):
        report = SuiteReport("demo", 3, [], {"worst": 0.4}, [{"n": 1}], 0.125)
        summary = report.summary()
        assert summary["suite"] == "demo"
        assert summary["cases"] == 3
        assert summary["passed"] is True
        assert summary["info"] == {"worst": 0.4}
        assert "rows" not in summary


class TestWriteCsv:
    def test_union_of_keys_first_seen_order(self, tmp_path):
        rows = [{"a": 1, "b": 2}, {"b": 3, "c": 4}]
        path = tmp_path / "out.csv"
        write_csv(str(path), rows)
        with open(path, newline="") as handle:
            parsed = list(csv.DictReader(handle))
        assert parsed[0] == {"a": "1", "b": "2", "c": ""}
        assert parsed[1] == {"a": "", "b": "3", "c": "4"}
