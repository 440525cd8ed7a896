"""Configuration loader for contact-loops.

Reads CLOOPS_* environment variables (optionally from .env), an optional flat
KEY=VALUE config file and command-line overrides, and exposes a typed config.
Precedence: overrides > config file > environment > defaults.
"""

import os
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace
from typing import Any

from dotenv import dotenv_values, load_dotenv

from .data import ConfigError

load_dotenv()

ENV_PREFIX = 'CLOOPS_'


@dataclass(frozen=True)
class Config:
  """Solver tolerances, census parameters and the reference beta."""

  tol: float = 1e-9
  epsilon: float = 0.25
  grid: int = 64
  dedup_radius: float = 1e-4
  seed_band: float = 0.2
  newton_max_iter: int = 50
  flow_step: float = 1e-3
  shoot_max_iter: int = 50
  shoot_seeds: int = 64
  beta_c1: float = 0.0
  beta_c2: float = 0.0
  beta_c3: float = 1.0
  beta_v1: float = 0.0
  beta_v2: float = 0.0
  beta_v3: float = 1.0
  order_spot_check: int = 100
  log_format: str = 'auto'

  @property
  def beta_constant(self) -> tuple[float, float, float]:
    return (self.beta_c1, self.beta_c2, self.beta_c3)

  @property
  def beta_density(self) -> tuple[float, float, float]:
    return (self.beta_v1, self.beta_v2, self.beta_v3)


_TYPES = {f.name: f.type for f in fields(Config)}


def _coerce(key: str, raw: Any) -> Any:
  kind = _TYPES[key]
  if kind in (int, 'int'):
    caster = int
  elif kind in (float, 'float'):
    caster = float
  else:
    caster = str
  try:
    value = caster(raw)
  except (TypeError, ValueError) as e:
    raise ConfigError(f'bad value for {key.upper()}: {raw!r}') from e
  if key == 'log_format' and value not in ('auto', 'json', 'pretty'):
    raise ConfigError(f'LOG_FORMAT must be auto, json or pretty, got {value!r}')
  return value


def _from_env() -> dict[str, Any]:
  out = {}
  for key in _TYPES:
    raw = os.getenv(ENV_PREFIX + key.upper())
    if raw is not None:
      out[key] = _coerce(key, raw)
  return out


def _from_file(path: str) -> dict[str, Any]:
  if not os.path.exists(path):
    raise ConfigError(f'config file not found: {path}')
  out = {}
  for raw_key, raw in dotenv_values(path).items():
    key = raw_key.strip().lower()
    if key.startswith(ENV_PREFIX.lower()):
      key = key[len(ENV_PREFIX):]
    if key not in _TYPES:
      raise ConfigError(f'unknown config key {raw_key!r} in {path}')
    out[key] = _coerce(key, raw)
  return out


def load_config(
  path: str | None = None, overrides: Mapping[str, Any] | None = None
) -> Config:
  """Load configuration; `overrides` with value None are ignored."""
  values: dict[str, Any] = {}
  values.update(_from_env())
  if path:
    values.update(_from_file(path))
  for key, raw in (overrides or {}).items():
    if raw is None:
      continue
    if key not in _TYPES:
      raise ConfigError(f'unknown config key {key!r}')
    values[key] = _coerce(key, raw)
  return replace(Config(), **values)
