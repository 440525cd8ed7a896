"""Reeb flows on T^3 and closed-orbit shooting.

The Reeb field of alpha = cos f(theta) dx + sin f(theta) dy is
(cos f, sin f, 0). It is integrated with fixed-step classical RK4 on the
universal cover; theta is carried exactly since its component vanishes. A
closed orbit of class (p, q) is an initial theta whose time-2 pi |(p, q)| flow
returns to the start shifted by 2 pi (p, q); shooting refines theta alone by a
secant iteration, vectorized over seeds.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .data import ConvergenceError, DomainError
from .orbits import AngularProfile, FiberClass
from .runlog import RunLogger, emit

TWO_PI = 2 * math.pi
SEAM_SNAP = 1e-7
Field = Callable[[np.ndarray], np.ndarray]


def wrap(a: float) -> float:
  """Representative in [0, 2 pi); values within 1e-12 below 2 pi map to 0."""
  r = a % TWO_PI
  return 0.0 if TWO_PI - r < 1e-12 else r


@dataclass(frozen=True)
class FlowState:
  """Point of T^3 with the time it was reached; angles in [0, 2 pi)."""

  x: float
  y: float
  theta: float
  time: float = 0.0

  def reduced(self) -> 'FlowState':
    """Coordinates wrapped back into the torus."""
    return FlowState(wrap(self.x), wrap(self.y), wrap(self.theta), self.time)

  def as_array(self) -> np.ndarray:
    """Position (x, y, theta) as an array."""
    return np.array([self.x, self.y, self.theta], dtype=float)


@dataclass(frozen=True)
class ShootingResult:
  theta_star: float
  period: float
  class_winding: tuple[int, int]
  residual: float
  iterations: int = 0
  theta_seed: float = 0.0


def reeb_field(profile: AngularProfile) -> Field:
  """Vector field z -> (cos f(theta), sin f(theta), 0) over arrays (..., 3)."""

  def field(z: np.ndarray) -> np.ndarray:
    f = np.vectorize(profile, otypes=[float])(z[..., 2])
    return np.stack([np.cos(f), np.sin(f), np.zeros_like(f)], -1)

  return field


def t3_field(n: int) -> Field:
  """Reeb field of alpha_n = cos(n theta) dx + sin(n theta) dy."""
  if n < 1:
    raise DomainError(f'n must be >= 1, got {n}')

  def field(z: np.ndarray) -> np.ndarray:
    a = n * z[..., 2]
    return np.stack([np.cos(a), np.sin(a), np.zeros_like(a)], -1)

  return field


def rk4(field: Field, z0: np.ndarray, time: float, step: float) -> np.ndarray:
  """Fixed-step RK4 on the cover; the last step is shortened to land on `time`.

  Works on a batch (..., 3) of states. The theta column is copied from the
  start exactly.
  """
  if step <= 0:
    raise DomainError(f'step must be positive, got {step}')
  z = np.array(z0, dtype=float)
  n_full, rest = divmod(time, step)
  steps = [step] * int(n_full)
  if rest > 1e-15 * max(1.0, time):
    steps.append(rest)
  for h in steps:
    k1 = field(z)
    k2 = field(z + 0.5 * h * k1)
    k3 = field(z + 0.5 * h * k2)
    k4 = field(z + h * k3)
    z = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
  z[..., 2] = np.asarray(z0, dtype=float)[..., 2]
  return z


def integrate(
  n: int, start: FlowState, time: float, step: float = 1e-3
) -> FlowState:
  """Flow of alpha_n from `start` for `time`, reduced to [0, 2 pi)^3."""
  z = rk4(t3_field(n), start.as_array(), time, step)
  return FlowState(z[0], z[1], z[2], start.time + time).reduced()


def _closing_error(
  field: Field, v: np.ndarray, thetas: np.ndarray, step: float
) -> tuple[np.ndarray, np.ndarray]:
  """(signed sine error, displacement) of the time-2 pi |v| flow per theta."""
  period = TWO_PI * float(np.linalg.norm(v))
  z0 = np.stack([np.zeros_like(thetas)] * 2 + [thetas], -1)
  disp = rk4(field, z0, period, step)[..., :2]
  vhat = v / np.linalg.norm(v)
  g = (disp[..., 0] * vhat[1] - disp[..., 1] * vhat[0]) / period
  return g, disp


def _secant(
  field: Field,
  v: np.ndarray,
  seeds: np.ndarray,
  step: float,
  max_iter: int,
  h0: float = 1e-3,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
  """Lockstep secant on theta for all seeds: (theta, |g|, iterations)."""
  a = seeds.astype(float)
  b = a + h0
  ga, _ = _closing_error(field, v, a, step)
  gb, _ = _closing_error(field, v, b, step)
  iters = np.zeros(a.shape, dtype=int)
  live = np.ones(a.shape, dtype=bool)
  for _ in range(max_iter):
    live &= (np.abs(gb) > 1e-15) & (np.abs(b - a) > 1e-14)
    if not live.any():
      break
    denom = gb - ga
    ok = live & (np.abs(denom) > 1e-300)
    nxt = np.where(ok, b - gb * (b - a) / np.where(ok, denom, 1.0), b)
    idx = np.flatnonzero(ok)
    gn = gb.copy()
    if idx.size:
      gn[idx], _ = _closing_error(field, v, nxt[idx], step)
    a = np.where(ok, b, a)
    ga = np.where(ok, gb, ga)
    b, gb = nxt, gn
    iters += ok
    live &= ok
  return b, np.abs(gb), iters


def _finish(
  field: Field,
  v: np.ndarray,
  theta: float,
  step: float,
  iters: int,
  seed: float,
) -> ShootingResult:
  theta = wrap(theta)
  if TWO_PI - theta < SEAM_SNAP:
    theta = 0.0
  _, disp = _closing_error(field, v, np.array([theta]), step)
  d = disp[0]
  winding = (int(round(d[0] / TWO_PI)), int(round(d[1] / TWO_PI)))
  scale = TWO_PI * float(np.linalg.norm(v))
  residual = float(np.linalg.norm(d - TWO_PI * v)) / scale
  return ShootingResult(
    theta_star=float(theta),
    period=1.0,
    class_winding=winding,
    residual=residual,
    iterations=int(iters),
    theta_seed=float(seed),
  )


def _accept(res: ShootingResult, cls: FiberClass, tol: float) -> str | None:
  """Reason the solution is rejected, or None."""
  if not math.isfinite(res.residual):
    return 'non-finite iterate'
  if res.class_winding != cls.as_tuple():
    return f'closed in class {res.class_winding}, not {cls.as_tuple()}'
  if res.residual > 10 * tol + 1e-10:
    return f'residual {res.residual:.3g} above tolerance'
  return None


def shoot_closed_orbit(
  n: int,
  cls: FiberClass,
  theta_seed: float,
  tol: float = 1e-9,
  *,
  step: float = 1e-3,
  max_iter: int = 50,
  profile: AngularProfile | None = None,
) -> ShootingResult:
  """Refine theta_seed to a closed orbit of class cls.

  `period` is reported in units of 2 pi |(p, q)|. Raises ConvergenceError
  when the secant does not settle, or settles on the opposite direction.
  """
  if tol > 1e-6:
    raise DomainError(f'tol must be <= 1e-6, got {tol}')
  field = reeb_field(profile) if profile is not None else t3_field(n)
  v = np.array(cls.as_tuple(), dtype=float)
  th, g, it = _secant(field, v, np.array([theta_seed]), step, max_iter)
  if not (math.isfinite(th[0]) and g[0] < tol):
    raise ConvergenceError(
      f'no closed orbit from seed {theta_seed} within {max_iter} iterations',
      residual=float(g[0]),
    )
  res = _finish(field, v, float(th[0]), step, int(it[0]), theta_seed)
  reason = _accept(res, cls, tol)
  if reason:
    raise ConvergenceError(reason, residual=res.residual)
  return res


def shoot_seeds(
  n: int,
  cls: FiberClass,
  seeds: int = 64,
  tol: float = 1e-9,
  *,
  step: float = 1e-3,
  max_iter: int = 50,
  dedup: float = 1e-6,
  logger: RunLogger | None = None,
) -> list[ShootingResult]:
  """Shoot from uniform seeds in [0, 2 pi); distinct solutions sorted by theta."""
  if tol > 1e-6:
    raise DomainError(f'tol must be <= 1e-6, got {tol}')
  field = t3_field(n)
  v = np.array(cls.as_tuple(), dtype=float)
  grid = (np.arange(seeds) + 0.5) * (TWO_PI / seeds)
  th, g, it = _secant(field, v, grid, step, max_iter)
  found: list[ShootingResult] = []
  for seed, t, gi, k in zip(grid, th, g, it):
    if not (math.isfinite(t) and gi < tol):
      emit(logger, 'shoot_failed', theta_seed=float(seed), residual=float(gi),
           reason='secant did not converge')
      continue
    res = _finish(field, v, float(t), step, int(k), float(seed))
    reason = _accept(res, cls, tol)
    if reason:
      emit(logger, 'shoot_failed', theta_seed=float(seed),
           residual=res.residual, reason=reason)
      continue
    near = [
      f for f in found
      if min(abs(f.theta_star - res.theta_star),
             TWO_PI - abs(f.theta_star - res.theta_star)) < dedup
    ]
    if not near:
      found.append(res)
  return sorted(found, key=lambda r: r.theta_star)

