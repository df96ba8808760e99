from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    WARNING = "warning"
    SKIP = "skip"


class CheckResult(BaseModel):
    """Outcome of a single named check."""
    check_name: str
    status: CheckStatus
    message: str
    witness: Optional[List[Any]] = Field(None, description="Counterexample elements in JSON form")


class VerificationReport(BaseModel):
    """A list of checks for one verification target."""
    target: str
    checks: List[CheckResult] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != CheckStatus.FAIL for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.status == CheckStatus.FAIL]

    def check(self, name: str) -> Optional[CheckResult]:
        return next((c for c in self.checks if c.check_name == name), None)

    def add(
        self, name: str, ok: bool, message: str, witness: Optional[List[Any]] = None, warn_only: bool = False
    ) -> CheckResult:
        """Record a check; with warn_only a false outcome is a WARNING, not a FAIL."""
        failed = CheckStatus.WARNING if warn_only else CheckStatus.FAIL
        result = CheckResult(
            check_name=name,
            status=CheckStatus.PASS if ok else failed,
            message=message,
            witness=None if ok else witness,
        )
        self.checks.append(result)
        return result

    def to_text(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lines = [f"{self.target}: {verdict}"]
        for c in self.checks:
            line = f"  [{c.status.value.upper()}] {c.check_name}: {c.message}"
            if c.witness:
                line += f" (witness: {c.witness})"
            lines.append(line)
        return "\n".join(lines)
