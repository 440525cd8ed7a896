"""Core data structures for contact-loops.

Defines the error hierarchy and the report/verdict schema shared by the
pipelines, the grader and the CLI.
"""

from dataclasses import dataclass, field
from typing import Any


class ContactLoopsError(Exception):
  """Base class for every error raised by this package."""


class DimensionError(ContactLoopsError, ValueError):
  """Operands live over rings of different rank or have mismatched shapes."""


class UnsupportedError(ContactLoopsError, ValueError):
  """Input is valid but outside what the algorithm handles."""


class UnsupportedRingError(UnsupportedError):
  """Operation needs a ring the input is not over (e.g. SNF with r != 1)."""


class StructuralError(ContactLoopsError, ValueError):
  """A graded complex has inconsistent ranks or matrix shapes."""


class InvalidComplexError(ContactLoopsError, ValueError):
  """d o d is not zero."""


class DomainError(ContactLoopsError, ValueError):
  """Argument outside the domain of the operation."""


class InvalidMonodromyError(ContactLoopsError, ValueError):
  """Monodromy matrix with determinant other than 1."""


class ProfileError(ContactLoopsError, ValueError):
  """Angular profile is not monotone or not compatible with the monodromy."""

  def __init__(self, message: str, residuals: dict[str, float] | None = None):
    super().__init__(message)
    self.residuals = residuals or {}


class InvalidAutomorphismError(ContactLoopsError, ValueError):
  """Permutation data is not a bijection or a multiplier is not a unit."""


class NotAChainMapError(ContactLoopsError, ValueError):
  """Automorphism does not preserve the relation submodule."""

  def __init__(self, message: str, relation: int):
    super().__init__(message)
    self.relation = relation


class ConvergenceError(ContactLoopsError, RuntimeError):
  """Iterative solver gave up."""

  def __init__(self, message: str, residual: float):
    super().__init__(message)
    self.residual = residual


class ConfigError(ContactLoopsError, ValueError):
  """Bad configuration key or value."""


@dataclass
class Verdict:
  """Named pass/fail check with the values it compared."""

  name: str
  passed: bool
  expected: Any
  actual: Any
  detail: str = ''


@dataclass
class Report:
  """Outcome of one pipeline run."""

  command: str
  inputs: dict[str, Any]
  outputs: dict[str, Any] = field(default_factory=dict)
  verdicts: list[Verdict] = field(default_factory=list)

  @property
  def passed(self) -> bool:
    return all(v.passed for v in self.verdicts)
