import json
from fractions import Fraction
from pathlib import Path

import pytest

from partbounds.cli import main
from partbounds.exact import default_table, f_jn, p_exact

GOLDEN = Path(__file__).resolve().parents[1] / "docs" / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured


def run_json(capsys, *argv):
    code, captured = run(capsys, *argv)
    return code, json.loads(captured.out)


def recheck_interval(block, exact: Fraction) -> None:
    """The containment flag must be reproducible from the serialized strings."""
    lo = Fraction(block["lo_exact"])
    hi = Fraction(block["hi_exact"])
    assert (lo <= exact <= hi) == block["contained"]
    # outward decimals bracket the exact endpoints
    assert Fraction(block["lo"]) <= lo
    assert hi <= Fraction(block["hi"])


class TestExact:
    def test_known_value(self, capsys):
        code, doc = run_json(capsys, "exact", "14")
        assert code == 0
        assert doc["results"]["p"] == "135"
        assert doc["results"]["digits"] == 3

    def test_zero(self, capsys):
        code, doc = run_json(capsys, "exact", "0")
        assert code == 0
        assert doc["results"]["p"] == "1"

    def test_oracle_agreement(self, capsys):
        code, doc = run_json(capsys, "exact", "60", "--oracle")
        assert code == 0
        assert doc["results"]["agreement"] is True
        assert doc["results"]["enumeration"] == doc["results"]["p"]

    def test_negative_rejected(self, capsys):
        code, captured = run(capsys, "exact", "-3")
        assert code == 2
        assert "n >= 0" in captured.err

    def test_oracle_out_of_range(self, capsys):
        code, captured = run(capsys, "exact", "120", "--oracle")
        assert code == 2
        assert "90" in captured.err


class TestRatio:
    def test_contained(self, capsys):
        code, doc = run_json(capsys, "ratio", "100", "2")
        assert code == 0
        results = doc["results"]
        table = default_table()
        assert Fraction(results["exact"]) == Fraction(p_exact(98, table), p_exact(100, table))
        recheck_interval(results["interval"], Fraction(results["exact"]))
        assert results["relative_width"] > 0
        assert doc["passed"] is True

    def test_j_zero_is_one(self, capsys):
        code, doc = run_json(capsys, "ratio", "100", "0")
        assert code == 0
        assert doc["results"]["exact"] == "1"
        assert doc["results"]["interval"]["contained"] is True

    def test_small_n_rejected(self, capsys):
        code, captured = run(capsys, "ratio", "13", "1")
        assert code == 2
        assert "n >= 14" in captured.err

    def test_unlicensed_j_rejected(self, capsys):
        code, captured = run(capsys, "ratio", "100", "5")
        assert code == 2
        assert captured.err.startswith("error:")


class TestFjn:
    def test_contained(self, capsys):
        code, doc = run_json(capsys, "fjn", "2000", "10")
        assert code == 0
        results = doc["results"]
        assert int(results["difference"]) == f_jn(2000, 10, default_table())
        recheck_interval(results["interval"], Fraction(results["exact"]))

    def test_preconditions_surface(self, capsys):
        code, captured = run(capsys, "fjn", "2000", "12")
        assert code == 2
        assert captured.err.startswith("error:")


class TestKrank:
    def test_contained_both(self, capsys):
        code, doc = run_json(capsys, "krank", "--k", "2", "--m", "40", "--n", "70")
        assert code == 0
        results = doc["results"]
        assert results["ell_prime"] == 28
        recheck_interval(results["ratio"]["interval"], Fraction(results["ratio"]["exact"]))
        recheck_interval(
            results["difference"]["interval"], Fraction(results["difference"]["exact"])
        )
        assert results["difference"]["lower_positive"] is False

    def test_domain_error(self, capsys):
        code, captured = run(capsys, "krank", "--k", "1", "--m", "10", "--n", "30")
        assert code == 2
        assert "m > n/2" in captured.err


class TestNonkary:
    def test_enumerated_example(self, capsys):
        code, doc = run_json(capsys, "nonkary", "5", "1")
        assert code == 0
        assert doc["results"]["nu"] == "2"
        assert doc["results"]["difference"] == "0"
        assert doc["results"]["difference_positive"] is False

    def test_licensed_adds_enclosure(self, capsys):
        code, doc = run_json(capsys, "nonkary", "100", "2")
        assert code == 0
        results = doc["results"]
        assert results["difference_positive"] is True
        recheck_interval(results["ratio_interval"], Fraction(results["ratio_exact"]))

    def test_bad_k(self, capsys):
        code, captured = run(capsys, "nonkary", "5", "0")
        assert code == 2


class TestVerifyCommand:
    def test_single_suite(self, capsys):
        code, doc = run_json(capsys, "verify", "oracles", "--n-max", "5")
        assert code == 0
        suite = doc["results"]["suites"][0]
        assert suite["suite"] == "oracles"
        assert suite["passed"] is True
        assert doc["parameters"]["suite"] == "oracles"

    def test_csv_and_json_outputs(self, capsys, tmp_path):
        csv_path = tmp_path / "rows.csv"
        json_path = tmp_path / "doc.json"
        code, doc = run_json(
            capsys,
            "verify",
            "containment-ratio",
            "--n-max",
            "30",
            "--csv",
            str(csv_path),
            "--json",
            str(json_path),
        )
        assert code == 0
        header = csv_path.read_text().splitlines()[0]
        assert header.startswith("suite,")
        assert json.loads(json_path.read_text()) == doc

    def test_csv_created_empty_for_rowless_suite(self, capsys, tmp_path):
        csv_path = tmp_path / "rows.csv"
        code, _ = run_json(
            capsys, "verify", "nonkary", "--n-max", "40", "--csv", str(csv_path)
        )
        assert code == 0
        assert csv_path.exists()
        assert csv_path.read_text() == ""

    def test_inequality_case_filter(self, capsys):
        code, doc = run_json(
            capsys, "verify", "inequalities", "--case", "sqrt-expansion-01"
        )
        assert code == 0
        assert doc["results"]["suites"][0]["cases"] == 1

    def test_case_with_other_suite_rejected(self, capsys):
        code, captured = run(capsys, "verify", "krank", "--case", "reciprocal-125")
        assert code == 2

    def test_unknown_suite_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "bogus"])
        assert exc.value.code == 2

    def test_all_runs_every_suite(self, capsys):
        code, doc = run_json(
            capsys,
            "verify",
            "all",
            "--n-max",
            "16",
            "--case",
            "geometric-series-100",
        )
        assert code == 0
        names = [suite["suite"] for suite in doc["results"]["suites"]]
        assert len(names) == 8


class TestPrecisionResolution:
    def test_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("PARTBOUNDS_PRECISION", "160")
        code, doc = run_json(capsys, "ratio", "100", "1")
        assert code == 0
        assert doc["parameters"]["precision"] == 160
        assert doc["results"]["interval"]["precision"] == 160

    def test_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("PARTBOUNDS_PRECISION", "160")
        code, doc = run_json(capsys, "ratio", "100", "1", "--precision", "96")
        assert doc["parameters"]["precision"] == 96

    def test_env_must_be_integer(self, capsys, monkeypatch):
        monkeypatch.setenv("PARTBOUNDS_PRECISION", "lots")
        code, captured = run(capsys, "ratio", "100", "1")
        assert code == 2
        assert "PARTBOUNDS_PRECISION" in captured.err

    def test_floor(self, capsys):
        code, captured = run(capsys, "ratio", "100", "1", "--precision", "8")
        assert code == 2


class TestGoldenDocuments:
    def test_ratio_document_frozen(self, capsys):
        code, doc = run_json(capsys, "ratio", "100", "2")
        assert code == 0
        doc["seconds"] = 0.0
        golden = json.loads((GOLDEN / "ratio-100-2.json").read_text())
        assert doc == golden

    def test_verify_document_frozen(self, capsys):
        code, doc = run_json(
            capsys, "verify", "inequalities", "--case", "reciprocal-125"
        )
        assert code == 0
        doc["seconds"] = 0.0
        for suite in doc["results"]["suites"]:
            suite["seconds"] = 0.0
        golden = json.loads((GOLDEN / "verify-reciprocal-125.json").read_text())
        assert doc == golden
