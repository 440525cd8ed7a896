"""Verdict helpers for pipeline reports.

Provides exact and toleranced comparisons and aggregate pass/fail metrics.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

from .data import Report, Verdict


def _close(expected: Any, actual: Any, tol: float) -> bool:
  """Equal within tol, elementwise for sequences."""
  if isinstance(expected, (list, tuple)) and isinstance(actual, (list, tuple)):
    return len(expected) == len(actual) and all(
      _close(e, a, tol) for e, a in zip(expected, actual)
    )
  if isinstance(expected, (int, float)) and isinstance(actual, (int, float)):
    return math.isclose(float(expected), float(actual), rel_tol=0, abs_tol=tol)
  return expected == actual


def _normalize(v: Any) -> Any:
  """Tuples compare as lists, like their JSON form."""
  if isinstance(v, tuple):
    return [_normalize(x) for x in v]
  if isinstance(v, list):
    return [_normalize(x) for x in v]
  return v


def check(
  name: str,
  expected: Any,
  actual: Any,
  tol: float | None = None,
  detail: str = '',
) -> Verdict:
  """Verdict comparing expected vs actual, exactly unless `tol` is given."""
  expected, actual = _normalize(expected), _normalize(actual)
  if tol is None:
    passed = expected == actual
  else:
    passed = _close(expected, actual, tol)
  return Verdict(
    name=name, passed=passed, expected=expected, actual=actual, detail=detail
  )


def check_true(name: str, condition: bool, detail: str = '') -> Verdict:
  """A verdict that passes when condition holds."""
  return Verdict(
    name=name, passed=bool(condition), expected=True, actual=bool(condition),
    detail=detail,
  )


@dataclass
class Metrics:
  """Aggregated verdict counts over a set of reports."""

  reports: int
  verdicts: int
  passed: int
  failed: int
  by_command: dict[str, dict[str, int]]

  @property
  def all_passed(self) -> bool:
    return self.failed == 0


def aggregate(reports: Iterable[Report]) -> Metrics:
  """Count passing and failing verdicts overall and per command."""
  by_command: dict[str, dict[str, int]] = {}
  n_reports = n = ok = 0
  for r in reports:
    n_reports += 1
    slot = by_command.setdefault(r.command, {'passed': 0, 'failed': 0})
    for v in r.verdicts:
      n += 1
      ok += v.passed
      slot['passed' if v.passed else 'failed'] += 1
  return Metrics(
    reports=n_reports,
    verdicts=n,
    passed=ok,
    failed=n - ok,
    by_command=by_command,
  )


def failed_verdicts(reports: Sequence[Report]) -> list[tuple[str, Verdict]]:
  """Every failing verdict with the command that produced it."""
  return [(r.command, v) for r in reports for v in r.verdicts if not v.passed]
