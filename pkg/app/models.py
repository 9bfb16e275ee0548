from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class ZdgError(Exception):
    """Base class for every error raised by the toolkit."""


class RingSpecError(ZdgError, ValueError):
    """Malformed ring spec, non prime-power field order, or order bound exceeded."""


class DomainError(ZdgError, ValueError):
    """An operation was called outside its mathematical domain."""


class GraphError(ZdgError, ValueError):
    """Invalid graph, join spec or vertex map."""


class SearchLimitError(ZdgError):
    """A search bound was exceeded."""


class ConfigurationError(ZdgError):
    """Invalid settings."""


class UsageError(ZdgError):
    """Command-line misuse or an invalid export combination."""


class ExportError(ZdgError):
    """An export could not be written."""


class ConsistencyError(ZdgError):
    """Two independent computations of the same quantity disagree."""


class RingKind(str, Enum):
    ZN = "zn"
    FIELD = "field"
    PRODUCT = "product"


class GraphKind(str, Enum):
    COMPLETE = "complete"
    EMPTY = "empty"
    PATH = "path"
    CYCLE = "cycle"


class OmegaNature(str, Enum):
    CLIQUE = "clique"
    INDEPENDENT = "independent"


class InvariantKind(str, Enum):
    DET = "Det"
    METRIC_DIM = "MetricDim"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    EXPECTED_DEVIATION = "expected-deviation"
    SKIPPED = "skipped"


class GraphRecord(BaseModel):
    """Graph JSON: vertices, labels and the sorted u<v edge list."""
    vertices: int
    labels: List[str] = []
    edges: List[List[int]] = []


class InvariantRecord(BaseModel):
    kind: InvariantKind
    lower: int
    upper: int
    exact: bool
    method: str
    certificate: List[str] = []


class AutGroupRecord(BaseModel):
    generators: List[List[int]] = []
    order: str = Field(..., description="Group order as a decimal string")
    orbits: List[List[int]] = []


class CheckResult(BaseModel):
    name: str
    expected: str
    actual: str
    status: CheckStatus
    theorem: Optional[str] = None
    note: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status != CheckStatus.FAIL


class CaseResult(BaseModel):
    instance_id: str
    checks: List[CheckResult] = []
    row: dict = Field(default_factory=dict, description="CSV columns for this case")


class SuiteSummary(BaseModel):
    cases: int = 0
    checks: int = 0
    passed: int = 0
    failed: int = 0
    expected_deviations: int = 0
    skipped: int = 0


class SuiteReport(BaseModel):
    suite: str
    params: dict = Field(default_factory=dict)
    cases: List[CaseResult] = []
    summary: SuiteSummary = Field(default_factory=SuiteSummary)

    @property
    def ok(self) -> bool:
        return self.summary.failed == 0
