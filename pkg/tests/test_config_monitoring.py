"""
Tests for settings, logging setup and suite monitoring.
"""

import pytest

from app.app_logging import get_logger, setup_logging
from app.config import Settings, settings
from app.models import CaseResult, CheckResult, CheckStatus, ConfigurationError
from app.monitoring import SuiteMonitor, summarize


def case(*statuses, instance_id="zn-0006"):
    return CaseResult(instance_id=instance_id, checks=[
        CheckResult(name=f"check {i}", expected="1", actual="1" if s != CheckStatus.FAIL else "2", status=s)
        for i, s in enumerate(statuses)
    ])


@pytest.fixture
def restore_settings(monkeypatch):
    yield monkeypatch
    monkeypatch.undo()
    Settings.reload()


@pytest.mark.unit
class TestSettings:

    def test_defaults_validate(self):
        assert Settings.validate()
        assert settings.WORKERS >= 1

    def test_reload_reads_environment(self, restore_settings):
        restore_settings.setenv("ZDG_WORKERS", "3")
        restore_settings.setenv("ZDG_EXHAUSTIVE_LIMIT", "1000")
        reloaded = Settings.reload()
        assert reloaded.WORKERS == 3
        assert settings.EXHAUSTIVE_LIMIT == 1000

    def test_non_integer_budget(self, restore_settings):
        restore_settings.setenv("ZDG_MAX_AUT_VERTICES", "lots")
        with pytest.raises(ConfigurationError):
            Settings.reload()

    def test_non_positive_budget(self, monkeypatch):
        monkeypatch.setattr(Settings, "WORKERS", 0)
        with pytest.raises(ConfigurationError):
            Settings.validate()


@pytest.mark.unit
class TestMonitor:

    def test_counts(self):
        monitor = SuiteMonitor()
        monitor.record_case("zn", case(CheckStatus.PASS, CheckStatus.SKIPPED), 12.0)
        monitor.record_case("boolean", case(CheckStatus.EXPECTED_DEVIATION, CheckStatus.FAIL,
                                            instance_id="boolean-05"), 8.0)
        metrics = monitor.get_metrics_summary()
        assert metrics["cases"] == 2
        assert (metrics["passed"], metrics["failed"]) == (1, 1)
        assert (metrics["expected_deviations"], metrics["skipped"]) == (1, 1)
        assert metrics["average_case_time_ms"] == 10.0

    def test_failures(self):
        monitor = SuiteMonitor()
        monitor.record_case("boolean", case(CheckStatus.FAIL, instance_id="boolean-05"))
        assert monitor.get_failures() == [{
            "suite": "boolean", "instance_id": "boolean-05", "check": "check 0",
            "expected": "1", "actual": "2",
        }]

    def test_reset(self):
        monitor = SuiteMonitor()
        monitor.record_case("zn", case(CheckStatus.PASS))
        monitor.record_suite_time("zn", 0.5)
        monitor.reset_metrics()
        metrics = monitor.get_metrics_summary()
        assert metrics["cases"] == 0
        assert metrics["suite_times_s"] == {}

    def test_summarize(self):
        summary = summarize([case(CheckStatus.PASS, CheckStatus.FAIL),
                             case(CheckStatus.EXPECTED_DEVIATION, instance_id="zn-0008")])
        assert summary.cases == 2
        assert summary.checks == 3
        assert (summary.passed, summary.failed, summary.expected_deviations, summary.skipped) == (1, 1, 1, 0)


@pytest.mark.unit
class TestLogging:

    def test_setup_is_idempotent(self):
        root = setup_logging()
        handlers = list(root.handlers)
        assert setup_logging() is root
        assert root.handlers == handlers

    def test_get_logger(self):
        assert get_logger("app.suites").name == "app.suites"
