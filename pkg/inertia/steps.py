from dataclasses import dataclass, field
from typing import Any, Dict, List

OK = "OK"
WARN = "WARN"
ERROR = "ERROR"


@dataclass
class StepResult:
    step_name: str
    status: str          # OK/WARN/ERROR (matches RunStep.StepStatus)
    message: str
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status == ERROR


def check(step_name: str, ok: bool, message: str, **details) -> StepResult:
    return StepResult(step_name, OK if ok else ERROR, message, details)


def error_count(steps: List[StepResult]) -> int:
    return sum(1 for s in steps if s.failed)
