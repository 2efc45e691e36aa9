"""Shared printing for the inertia management commands."""
import json
from typing import Any, Sequence

from django.core.management.base import CommandError

from inertia.steps import ERROR, WARN, StepResult, error_count


def dump(record: Any) -> str:
    """Single-line, key-sorted JSON used by every ``--json`` flag."""
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"), default=str)


def write_steps(command, steps: Sequence[StepResult]) -> None:
    for s in steps:
        if s.status == ERROR:
            style = command.style.ERROR
        elif s.status == WARN:
            style = command.style.WARNING
        else:
            style = command.style.SUCCESS
        command.stdout.write(style(f"[{s.status:5}] {s.step_name}: {s.message}"))


def fail_on_errors(steps: Sequence[StepResult], what: str) -> None:
    n = error_count(steps)
    if n:
        raise CommandError(f"{what}: {n} check(s) failed")
