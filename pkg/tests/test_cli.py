import json

import pytest

import programs
from widenkit.cli import (
    EXIT_DEFECT,
    EXIT_OK,
    EXIT_UNSOUND,
    EXIT_USAGE,
    main,
    report_from_json,
    report_to_json,
)
from widenkit.lang import NaiveWidening, ThresholdWidening, analyze, parse


@pytest.fixture
def count_file(tmp_path):
    path = tmp_path / "count.while"
    path.write_text(programs.COUNT_TO_100)
    return str(path)


@pytest.fixture
def thresholds_file(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("255\n32767\n")
    return str(path)


class TestTextOutput:
    def test_naive_report(self, count_file, capsys):
        assert main([count_file, "--widening", "naive"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "loop@L3: x ∈ [0, +inf]" in out
        assert "final: x ∈ [100, +inf]" in out

    def test_ramp_report(self, count_file, thresholds_file, capsys):
        code = main([count_file, "--widening", "ramp", "--thresholds", thresholds_file])
        assert code == EXIT_OK
        assert "loop@L3: x ∈ [0, 255]" in capsys.readouterr().out

    def test_oracle_line(self, count_file, capsys):
        code = main([count_file, "--widening", "naive", "--oracle", "--max-steps", "100000"])
        assert code == EXIT_OK
        assert "oracle: pass (101 states checked)" in capsys.readouterr().out


class TestJsonOutput:
    def test_schema_and_agreement_with_text(self, count_file, capsys):
        assert main([count_file, "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["strategy"] == "naive"
        assert payload["loops"][0]["id"] == 0
        assert payload["loops"][0]["line"] == 3
        assert payload["loops"][0]["env"]["x"] == {"lo": "0", "hi": "inf"}
        assert payload["final"]["x"] == {"lo": "100", "hi": "inf"}

        assert main([count_file]) == EXIT_OK
        text = capsys.readouterr().out
        # same bounds in both renderings
        assert "x ∈ [0, +inf]" in text and "x ∈ [100, +inf]" in text

    def test_round_trip(self):
        report = analyze(parse(programs.BRANCHY), ThresholdWidening((60, 70)))
        encoded = report_to_json(report)
        decoded = report_from_json(encoded)
        assert report_to_json(decoded) == encoded

    def test_round_trip_with_bottom(self):
        report = analyze(parse(programs.ASSUME_FALSE), NaiveWidening())
        encoded = report_to_json(report)
        assert encoded["loops"][0]["env"] == "bottom"
        assert report_to_json(report_from_json(encoded)) == encoded

    def test_string_encoded_integers_survive_huge_values(self, tmp_path, capsys):
        path = tmp_path / "big.while"
        big = 10**40
        path.write_text(f"init x in [0,{big}];")
        assert main([str(path), "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["final"]["x"]["hi"] == str(big)


class TestExitCodes:
    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.while"
        path.write_text("x = 1;")
        assert main([str(path)]) == EXIT_USAGE
        assert "undeclared" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["/nonexistent/missing.while"]) == EXIT_USAGE

    def test_ramp_without_thresholds(self, count_file, capsys):
        assert main([count_file, "--widening", "ramp"]) == EXIT_USAGE

    def test_delay_without_count(self, count_file, capsys):
        assert main([count_file, "--widening", "delay"]) == EXIT_USAGE

    def test_broken_widening_fixture(self, count_file, capsys):
        assert main([count_file, "--seed-fault", "broken-widening"]) == EXIT_DEFECT
        assert "claimed convergence" in capsys.readouterr().err

    def test_nonterminating_fixture(self, count_file, capsys):
        code = main([count_file, "--seed-fault", "non-terminating", "--fuel", "100"])
        assert code == EXIT_DEFECT
        assert "no convergence" in capsys.readouterr().err

    def test_fuel_exhaustion_via_flag(self, count_file, capsys):
        assert main([count_file, "--fuel", "1"]) == EXIT_DEFECT

    def test_corrupt_invariant_fixture(self, count_file, capsys):
        code = main([count_file, "--seed-fault", "corrupt-invariant", "--oracle"])
        assert code == EXIT_UNSOUND
        captured = capsys.readouterr()
        assert "oracle: FAIL" in captured.out
        assert "counterexample" in captured.err

    def test_corrupt_invariant_requires_oracle(self, count_file, capsys):
        assert main([count_file, "--seed-fault", "corrupt-invariant"]) == EXIT_USAGE


class TestConfig:
    def test_env_var_fuel(self, count_file, monkeypatch, capsys):
        monkeypatch.setenv("WIDENKIT_FUEL", "1")
        assert main([count_file]) == EXIT_DEFECT

    def test_flag_overrides_env_var(self, count_file, monkeypatch, capsys):
        monkeypatch.setenv("WIDENKIT_FUEL", "1")
        assert main([count_file, "--fuel", "100"]) == EXIT_OK

    def test_invalid_env_var(self, count_file, monkeypatch, capsys):
        monkeypatch.setenv("WIDENKIT_FUEL", "lots")
        assert main([count_file]) == EXIT_USAGE

    def test_bad_thresholds_rejected(self, count_file, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("100\n50\n")
        code = main([count_file, "--widening", "ramp", "--thresholds", str(path)])
        assert code == EXIT_USAGE
        assert "ascending" in capsys.readouterr().err

    def test_delay_with_thresholds_uses_ramp_inner(self, count_file, thresholds_file, capsys):
        code = main(
            [count_file, "--widening", "delay", "--delay", "2",
             "--thresholds", thresholds_file, "--format", "json"]
        )
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["strategy"] == "delay(2, ramp(255,32767))"

    def test_unknown_flag_is_usage_error(self, count_file, capsys):
        assert main([count_file, "--frobnicate"]) == EXIT_USAGE
