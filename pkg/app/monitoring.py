"""
Suite monitoring for ZDGVerify.

Tracks executed checks and cases with their runtimes. Counts feed the report
summary; timings are only logged, so reports stay byte-identical across runs.
"""

import logging
import threading
import time
from collections import defaultdict, deque
from typing import Any, Dict, List

from app.models import CaseResult, CheckStatus, SuiteSummary

logger = logging.getLogger(__name__)


class SuiteMonitor:
    """In-memory, thread-safe counters for suite runs."""

    def __init__(self):
        self._lock = threading.Lock()
        self._reset_metrics()

    def _reset_metrics(self):
        self.cases = 0
        self.status_counts = defaultdict(int)
        self.case_times = deque(maxlen=1000)  # Keep last 1000 case runtimes
        self.suite_times: Dict[str, float] = {}
        self.failures: List[Dict[str, Any]] = []

    def record_case(self, suite: str, case: CaseResult, runtime_ms: float = 0.0):
        """Record a finished case and every check in it."""
        with self._lock:
            self.cases += 1
            for check in case.checks:
                self.status_counts[check.status] += 1
                if check.status == CheckStatus.FAIL:
                    self.failures.append({
                        'suite': suite,
                        'instance_id': case.instance_id,
                        'check': check.name,
                        'expected': check.expected,
                        'actual': check.actual,
                    })
            if runtime_ms > 0:
                self.case_times.append(runtime_ms)
        logger.info(f"[{suite}] {case.instance_id}: {len(case.checks)} checks in {runtime_ms:.1f} ms")
        for check in case.checks:
            if check.status == CheckStatus.FAIL:
                logger.warning(f"[{suite}] {case.instance_id} {check.name}: "
                               f"expected {check.expected}, got {check.actual}")

    def record_suite_time(self, suite: str, seconds: float):
        with self._lock:
            self.suite_times[suite] = seconds
        logger.info(f"Suite {suite} finished in {seconds:.2f} s")

    def get_metrics_summary(self) -> Dict[str, Any]:
        with self._lock:
            average = sum(self.case_times) / len(self.case_times) if self.case_times else 0.0
            return {
                'cases': self.cases,
                'passed': self.status_counts[CheckStatus.PASS],
                'failed': self.status_counts[CheckStatus.FAIL],
                'expected_deviations': self.status_counts[CheckStatus.EXPECTED_DEVIATION],
                'skipped': self.status_counts[CheckStatus.SKIPPED],
                'average_case_time_ms': round(average, 2),
                'suite_times_s': dict(self.suite_times),
            }

    def get_failures(self) -> List[Dict[str, Any]]:
        with self._lock:
            return list(self.failures)

    def reset_metrics(self):
        """Reset all metrics (useful for testing)."""
        with self._lock:
            self._reset_metrics()
            logger.info("Suite metrics reset")


def summarize(cases: List[CaseResult]) -> SuiteSummary:
    """Summary counts tallied from the cases themselves."""
    summary = SuiteSummary(cases=len(cases))
    for case in cases:
        for check in case.checks:
            summary.checks += 1
            if check.status == CheckStatus.PASS:
                summary.passed += 1
            elif check.status == CheckStatus.FAIL:
                summary.failed += 1
            elif check.status == CheckStatus.EXPECTED_DEVIATION:
                summary.expected_deviations += 1
            else:
                summary.skipped += 1
    return summary


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()

    @property
    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.start) * 1000.0


# Global monitor instance
monitor = SuiteMonitor()
