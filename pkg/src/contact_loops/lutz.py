"""Critical points of phi_1^2 on the pages of the Lutz open book on T^3.

phi = eps (sin t1 cos t3 - sin t2 sin t3, sin t1 sin t3 + sin t2 cos t3) has
binding phi^-1(0) and pages psi^-1(angle) for psi = phi / |phi|. Closed Reeb
orbits of the T^5 form in a fixed class sit over critical points of phi_1^2 on
the page {phi_2 = 0, phi_1 > 0}; on that page phi_1^2 = eps^2 (sin^2 t1 +
sin^2 t2), so there are four maxima and eight saddles.

All solves run in the ambient torus with phi_2 = 0 as a constraint: Newton on
the Lagrange system grad(phi_1^2) = lam grad(phi_2), phi_2 = 0, seeded from a
uniform grid and vectorized over seeds with numpy.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .data import DomainError
from .runlog import RunLogger, emit

TWO_PI = 2 * math.pi
EIG_FLOOR = 1e-6
BINDING_FLOOR = 1e-12


class CriticalKind(str, Enum):
  MAXIMUM = 'maximum'
  SADDLE = 'saddle'
  MINIMUM = 'minimum'
  DEGENERATE = 'degenerate'


@dataclass(frozen=True)
class LutzMap:
  """The knotted fibration phi : T^3 -> R^2 at scale epsilon."""

  epsilon: float

  def __post_init__(self) -> None:
    if not self.epsilon > 0:
      raise DomainError(f'epsilon must be positive, got {self.epsilon}')

  def phi(self, th: np.ndarray) -> np.ndarray:
    """phi over the last axis of `th` (shape (..., 3)) -> shape (..., 2)."""
    s1, s2 = np.sin(th[..., 0]), np.sin(th[..., 1])
    s3, c3 = np.sin(th[..., 2]), np.cos(th[..., 2])
    e = self.epsilon
    return np.stack([e * (s1 * c3 - s2 * s3), e * (s1 * s3 + s2 * c3)], -1)

  def gradients(self, th: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(grad phi_1, grad phi_2), each of shape (..., 3)."""
    s1, c1 = np.sin(th[..., 0]), np.cos(th[..., 0])
    s2, c2 = np.sin(th[..., 1]), np.cos(th[..., 1])
    s3, c3 = np.sin(th[..., 2]), np.cos(th[..., 2])
    e = self.epsilon
    g1 = e * np.stack([c1 * c3, -c2 * s3, -s1 * s3 - s2 * c3], -1)
    g2 = e * np.stack([c1 * s3, c2 * c3, s1 * c3 - s2 * s3], -1)
    return g1, g2

  def hessians(self, th: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(Hess phi_1, Hess phi_2), each of shape (..., 3, 3)."""
    s1, c1 = np.sin(th[..., 0]), np.cos(th[..., 0])
    s2, c2 = np.sin(th[..., 1]), np.cos(th[..., 1])
    s3, c3 = np.sin(th[..., 2]), np.cos(th[..., 2])
    z = np.zeros_like(s1)
    e = self.epsilon
    h1 = np.stack(
      [
        np.stack([-s1 * c3, z, -c1 * s3], -1),
        np.stack([z, s2 * s3, -c2 * c3], -1),
        np.stack([-c1 * s3, -c2 * c3, -s1 * c3 + s2 * s3], -1),
      ],
      -2,
    )
    h2 = np.stack(
      [
        np.stack([-s1 * s3, z, c1 * c3], -1),
        np.stack([z, -s2 * c3, -c2 * s3], -1),
        np.stack([c1 * c3, -c2 * s3, -s1 * s3 - s2 * c3], -1),
      ],
      -2,
    )
    return e * h1, e * h2


def phi(theta: Sequence[float], epsilon: float) -> tuple[float, float]:
  """(phi_1, phi_2) at one point of T^3."""
  v = LutzMap(epsilon).phi(np.asarray(theta, dtype=float))
  return float(v[0]), float(v[1])


@dataclass(frozen=True)
class CriticalPoint:
  theta: tuple[float, float, float]
  value: float
  kind: CriticalKind
  gradient_norm: float
  hessian_eigs: tuple[float, float]
  multiplier: float = 0.0


@dataclass
class CriticalCensus:
  """Deduplicated critical points of phi_1^2 on one page, sorted by theta."""

  epsilon: float
  page: int
  points: list[CriticalPoint] = field(default_factory=list)
  seeds: int = 0
  skipped: int = 0

  def _tally(self, kind: CriticalKind) -> int:
    return sum(1 for p in self.points if p.kind == kind)

  @property
  def maxima(self) -> int:
    return self._tally(CriticalKind.MAXIMUM)

  @property
  def saddles(self) -> int:
    return self._tally(CriticalKind.SADDLE)

  @property
  def minima(self) -> int:
    return self._tally(CriticalKind.MINIMUM)

  @property
  def degenerate(self) -> int:
    return self._tally(CriticalKind.DEGENERATE)

  @property
  def counts(self) -> tuple[int, int, int]:
    return self.maxima, self.saddles, self.minima


# -----------------------
# Newton on the Lagrange system
# -----------------------


def _residual(lm: LutzMap, x: np.ndarray) -> np.ndarray:
  """F(theta, lam) = (grad f - lam grad phi_2, phi_2) with f = phi_1^2."""
  th, lam = x[:, :3], x[:, 3]
  p = lm.phi(th)
  g1, g2 = lm.gradients(th)
  grad_f = 2 * p[:, :1] * g1
  return np.concatenate([grad_f - lam[:, None] * g2, p[:, 1:2]], axis=1)


def _jacobian(lm: LutzMap, x: np.ndarray) -> np.ndarray:
  th, lam = x[:, :3], x[:, 3]
  p = lm.phi(th)
  g1, g2 = lm.gradients(th)
  h1, h2 = lm.hessians(th)
  hess_f = 2 * np.einsum('ni,nj->nij', g1, g1) + 2 * p[:, 0, None, None] * h1
  lag = hess_f - lam[:, None, None] * h2
  n = x.shape[0]
  jac = np.zeros((n, 4, 4))
  jac[:, :3, :3] = lag
  jac[:, :3, 3] = -g2
  jac[:, 3, :3] = g2
  return jac


def _seed_grid(lm: LutzMap, grid: int, band: float, page: int) -> np.ndarray:
  ax = (np.arange(grid) + 0.5) * (TWO_PI / grid)
  th = np.stack(np.meshgrid(ax, ax, ax, indexing='ij'), -1).reshape(-1, 3)
  p = lm.phi(th)
  keep = (np.abs(p[:, 1]) < band * lm.epsilon) & (page * p[:, 0] > 0)
  th = th[keep]
  g1, g2 = lm.gradients(th)
  grad_f = 2 * lm.phi(th)[:, :1] * g1
  lam = np.einsum('ni,ni->n', grad_f, g2) / np.einsum('ni,ni->n', g2, g2)
  return np.concatenate([th, lam[:, None]], axis=1)


def _newton(
  lm: LutzMap, x: np.ndarray, tol: float, max_iter: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
  """Batched Newton; returns (x, residual norms, converged mask).

  Seeds whose Jacobian turns singular or whose iterate stops being finite are
  frozen and reported as not converged. Steps are clipped to length 0.5.
  """
  x = x.copy()
  alive = np.ones(x.shape[0], dtype=bool)
  res = np.full(x.shape[0], np.inf)
  for _ in range(max_iter):
    idx = np.flatnonzero(alive)
    if idx.size == 0:
      break
    xa = x[idx]
    f = _residual(lm, xa)
    res[idx] = np.linalg.norm(f, axis=1)
    done = res[idx] < tol
    alive[idx[done]] = False
    idx, xa, f = idx[~done], xa[~done], f[~done]
    if idx.size == 0:
      break
    jac = _jacobian(lm, xa)
    ok = np.abs(np.linalg.det(jac)) > 1e-14
    alive[idx[~ok]] = False
    idx, xa, f, jac = idx[ok], xa[ok], f[ok], jac[ok]
    if idx.size == 0:
      break
    step = np.linalg.solve(jac, -f[..., None])[..., 0]
    norm = np.linalg.norm(step, axis=1)
    scale = np.minimum(1.0, 0.5 / np.maximum(norm, 1e-300))
    xa = xa + step * scale[:, None]
    finite = np.all(np.isfinite(xa), axis=1)
    alive[idx[~finite]] = False
    x[idx[finite]] = xa[finite]
  final = _residual(lm, x)
  res = np.linalg.norm(final, axis=1)
  res[~np.all(np.isfinite(x), axis=1)] = np.inf
  return x, res, res < tol


def _tangent_basis(normal: np.ndarray) -> np.ndarray:
  """Orthonormal basis (2 x 3) of the plane orthogonal to `normal`."""
  n = normal / np.linalg.norm(normal)
  _, _, vt = np.linalg.svd(n[None, :])
  return vt[1:]


def _classify(lm: LutzMap, x: np.ndarray) -> CriticalPoint:
  th, lam = x[:3] % TWO_PI, x[3]
  th = np.where(th > TWO_PI - 1e-12, 0.0, th)
  batch = np.concatenate([th, [lam]])[None, :]
  p = lm.phi(th)
  g1, g2 = lm.gradients(th)
  h1, h2 = lm.hessians(th)
  lag = 2 * np.outer(g1, g1) + 2 * p[0] * h1 - lam * h2
  basis = _tangent_basis(g2)
  eigs = np.sort(np.linalg.eigvalsh(basis @ lag @ basis.T))
  if np.any(np.abs(eigs) <= EIG_FLOOR):
    kind = CriticalKind.DEGENERATE
  elif np.all(eigs < 0):
    kind = CriticalKind.MAXIMUM
  elif np.all(eigs > 0):
    kind = CriticalKind.MINIMUM
  else:
    kind = CriticalKind.SADDLE
  grad_norm = float(np.linalg.norm(_residual(lm, batch)[0, :3]))
  return CriticalPoint(
    theta=(float(th[0]), float(th[1]), float(th[2])),
    value=float(p[0] ** 2),
    kind=kind,
    gradient_norm=grad_norm,
    hessian_eigs=(float(eigs[0]), float(eigs[1])),
    multiplier=float(lam),
  )


def torus_distance(a: Sequence[float], b: Sequence[float]) -> float:
  d = np.abs(np.asarray(a) - np.asarray(b)) % TWO_PI
  return float(np.linalg.norm(np.minimum(d, TWO_PI - d)))


def _dedup(x: np.ndarray, radius: float) -> list[np.ndarray]:
  """Greedy clustering in the torus metric, first seed of each cluster kept."""
  x = x.copy()
  x[:, :3] %= TWO_PI
  kept = []
  while x.shape[0]:
    d = np.abs(x[:, :3] - x[0, :3])
    d = np.linalg.norm(np.minimum(d, TWO_PI - d), axis=1)
    kept.append(x[0])
    x = x[d > radius]
  return kept


def critical_census(
  epsilon: float,
  grid: int = 64,
  tol: float = 1e-9,
  *,
  page: int = 1,
  band: float = 0.2,
  dedup_radius: float = 1e-4,
  max_iter: int = 50,
  logger: RunLogger | None = None,
) -> CriticalCensus:
  """All critical points of phi_1^2 on {phi_2 = 0, page * phi_1 > 0}."""
  if grid < 32:
    raise DomainError(f'grid must be >= 32, got {grid}')
  if tol > 1e-8:
    raise DomainError(f'tol must be <= 1e-8, got {tol}')
  if page not in (1, -1):
    raise DomainError(f'page must be +1 or -1, got {page}')
  lm = LutzMap(epsilon)
  seeds = _seed_grid(lm, grid, band, page)
  x, res, conv = _newton(lm, seeds, tol, max_iter)
  phi1 = lm.phi(x[:, :3])[:, 0]
  on_page = page * phi1 > 1e-3 * epsilon
  accepted = conv & on_page

  skipped = int(np.count_nonzero(~accepted))
  if skipped:
    emit(
      logger,
      'seed_skipped',
      count=skipped,
      diverged=int(np.count_nonzero(~conv)),
      off_page=int(np.count_nonzero(conv & ~on_page)),
      reason='no convergence or left the page',
    )

  kept = _dedup(x[accepted], dedup_radius)
  for i in range(len(kept)):
    for j in range(i + 1, len(kept)):
      d = torus_distance(kept[i][:3], kept[j][:3])
      if d < 100 * dedup_radius:
        emit(logger, 'dedup_warning', distance=d, radius=dedup_radius)

  points = sorted((_classify(lm, k) for k in kept), key=lambda p: p.theta)
  return CriticalCensus(
    epsilon=epsilon,
    page=page,
    points=points,
    seeds=int(seeds.shape[0]),
    skipped=skipped,
  )


def opposite_page_census(
  epsilon: float, grid: int = 64, tol: float = 1e-9, **kwargs
) -> CriticalCensus:
  """Census on psi^-1(-1, 0)."""
  return critical_census(epsilon, grid, tol, page=-1, **kwargs)


def page_symmetry(theta: Sequence[float]) -> tuple[float, float, float]:
  """(t1, t2, t3) -> (t1 + pi, t2 + pi, t3); negates phi."""
  return (
    (theta[0] + math.pi) % TWO_PI,
    (theta[1] + math.pi) % TWO_PI,
    theta[2] % TWO_PI,
  )


def census_gradings(
  census: CriticalCensus, offset: int = 0
) -> list[tuple[CriticalPoint, int]]:
  """Maxima in degree offset + 1, saddles in degree offset."""
  degree = {CriticalKind.MAXIMUM: offset + 1, CriticalKind.SADDLE: offset}
  return [(p, degree[p.kind]) for p in census.points if p.kind in degree]


# -----------------------
# Reeb direction on T^5
# -----------------------


@dataclass(frozen=True)
class BetaChoice:
  """Reference 1-form beta on T^3.

  `constant` is the closed part c_1 dt1 + c_2 dt2 + c_3 dt3; `density` is the
  vector V of the constant 2-form d beta(u, w) = V . (u x w), taken on the
  universal cover.
  """

  constant: tuple[float, float, float] = (0.0, 0.0, 1.0)
  density: tuple[float, float, float] = (0.0, 0.0, 1.0)


def _page_normal(lm: LutzMap, th: np.ndarray) -> np.ndarray:
  """grad psi of the page angle psi = atan2(phi_2, phi_1)."""
  p = lm.phi(th)
  g1, g2 = lm.gradients(th)
  r2 = p[0] ** 2 + p[1] ** 2
  return (p[0] * g2 - p[1] * g1) / r2


def validate_beta(
  beta: BetaChoice, epsilon: float, samples: int = 2048, seed: int = 0
) -> dict[str, float]:
  """Check beta is nonzero along the binding and d beta > 0 on sampled pages."""
  binding = abs(beta.constant[2])
  if binding == 0:
    raise DomainError('beta vanishes along the binding circles (c3 = 0)')
  lm = LutzMap(epsilon)
  rng = np.random.default_rng(seed)
  v = np.asarray(beta.density, dtype=float)
  worst = math.inf
  for th in rng.uniform(0, TWO_PI, size=(samples, 3)):
    if np.hypot(*lm.phi(th)) < 1e-6 * epsilon:
      continue
    n = _page_normal(lm, th)
    worst = min(worst, float(v @ (n / np.linalg.norm(n))))
  if not worst > 0:
    raise DomainError(f'd beta is not positive on every page (min {worst:.3g})')
  return {'binding': binding, 'min_page_density': worst}


def reeb_t5_direction(
  theta: Sequence[float], epsilon: float, beta: BetaChoice | None = None
) -> np.ndarray:
  """Unit vector along phi_1 d/dt4 + phi_2 d/dt5 + X at a point of T^5.

  X is the Hamiltonian field of H = |phi|^2 / 2 on the page through the point
  for the area form d beta: iota_X d beta = dH on the page.
  """
  if len(theta) != 5:
    raise DomainError(f'a point of T^5 has five angles, got {len(theta)}')
  beta = beta or BetaChoice()
  lm = LutzMap(epsilon)
  th = np.asarray(theta[:3], dtype=float)
  p = lm.phi(th)
  if math.hypot(p[0], p[1]) < BINDING_FLOOR:
    raise DomainError('the Reeb direction is not defined on the binding')
  g1, g2 = lm.gradients(th)
  grad_h = p[0] * g1 + p[1] * g2
  n = _page_normal(lm, th)
  n = n / np.linalg.norm(n)
  e1, e2 = _tangent_basis(n)
  if np.cross(e1, e2) @ n < 0:
    e2 = -e2
  omega = float(np.asarray(beta.density) @ n)
  if omega <= BINDING_FLOOR:
    raise DomainError('d beta degenerates on the page through this point')
  h1, h2 = float(grad_h @ e1), float(grad_h @ e2)
  x = (h2 / omega) * e1 - (h1 / omega) * e2
  out = np.concatenate([x, p])
  return out / np.linalg.norm(out)
