"""Acceptance criteria at their stated tolerances; one PASS/FAIL line each in the session summary."""
import pytest

from casimir import acceptance

from .conftest import ACCEPTANCE_LINES


def _report(result):
    ACCEPTANCE_LINES.append(result.line())
    print(result.line())
    for name, value in result.metrics:
        print(f"    {name} = {value}")
    assert result.passed, result.metrics
    assert result.runtime_ok, f"runtime {result.runtime:.2f} s exceeds {result.runtime_limit} s"


def test_criterion_01_ideal_limit():
    _report(acceptance.ideal_limit())


def test_criterion_02_one_dimensional_oracle():
    _report(acceptance.one_dimensional_oracle())


def test_criterion_03_thermal_factor_two():
    _report(acceptance.thermal_factor_two())


def test_criterion_04_eta_behaviour():
    _report(acceptance.eta_behaviour())


def test_criterion_05_ordering_grid():
    _report(acceptance.ordering_grid())


def test_criterion_06_zero_frequency_effect():
    _report(acceptance.zero_frequency_effect())


def test_criterion_07_beyond_pfa():
    _report(acceptance.beyond_pfa())


def test_criterion_08_beta_direction():
    _report(acceptance.beta_direction())


def test_criterion_09_determinism():
    _report(acceptance.determinism())


def test_criterion_10_truncation_soundness():
    _report(acceptance.truncation_soundness())


def test_check_command_quick_is_byte_identical(tmp_path):
    from casimir.cli import main
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["check", "--quick", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
