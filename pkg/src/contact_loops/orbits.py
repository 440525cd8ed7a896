"""Closed Reeb orbits of T^2-invariant contact forms on T^3 and T^3_A.

For alpha = cos f(theta) dx + sin f(theta) dy the Reeb field is
(cos f, sin f, 0): iota_R d alpha = f'(sin f cos f - cos f sin f) d theta = 0 and
alpha(R) = 1. Orbits therefore stay in a T^2 fiber and close up in class
(p, q) exactly where (cos f, sin f) is a positive multiple of (p, q).
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .data import DomainError, InvalidMonodromyError, ProfileError

TWO_PI = 2 * math.pi
Vector = tuple[int, int]


# -----------------------
# Monodromy
# -----------------------


class MonodromyKind(str, Enum):
  IDENTITY = 'identity'
  MINUS_IDENTITY = 'minus_identity'
  ELLIPTIC = 'elliptic'
  PARABOLIC = 'parabolic'
  HYPERBOLIC = 'hyperbolic'


@dataclass(frozen=True)
class Monodromy:
  """Gluing matrix [[a, b], [c, d]] in SL(2, Z)."""

  a: int
  b: int
  c: int
  d: int

  def __post_init__(self) -> None:
    det = self.a * self.d - self.b * self.c
    if det != 1:
      raise InvalidMonodromyError(
        f'monodromy {self.as_list()} has determinant {det}, expected 1'
      )

  @classmethod
  def identity(cls) -> 'Monodromy':
    return cls(1, 0, 0, 1)

  @classmethod
  def from_list(cls, values: list[int]) -> 'Monodromy':
    if len(values) != 4:
      raise InvalidMonodromyError('monodromy needs four entries [a, b, c, d]')
    return cls(*(int(v) for v in values))

  def as_list(self) -> list[int]:
    return [self.a, self.b, self.c, self.d]

  @property
  def trace(self) -> int:
    return self.a + self.d

  def apply(self, v: Vector) -> Vector:
    return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

  def __matmul__(self, other: 'Monodromy') -> 'Monodromy':
    return Monodromy(
      self.a * other.a + self.b * other.c,
      self.a * other.b + self.b * other.d,
      self.c * other.a + self.d * other.c,
      self.c * other.b + self.d * other.d,
    )

  def inverse(self) -> 'Monodromy':
    return Monodromy(self.d, -self.b, -self.c, self.a)

  def transpose(self) -> 'Monodromy':
    return Monodromy(self.a, self.c, self.b, self.d)

  def power(self, k: int) -> 'Monodromy':
    base = self if k >= 0 else self.inverse()
    out = Monodromy.identity()
    for _ in range(abs(k)):
      out = out @ base
    return out


@dataclass(frozen=True)
class MonodromyClass:
  """Conjugacy type; order is set exactly when A has finite order."""

  kind: MonodromyKind
  order: int | None = None

  @property
  def finite_order(self) -> bool:
    return self.order is not None


_ELLIPTIC_ORDER = {-1: 3, 0: 4, 1: 6}


def classify_monodromy(A: Monodromy) -> MonodromyClass:
  """Identity / minus identity / elliptic(order) / parabolic / hyperbolic by trace."""
  if A == Monodromy.identity():
    return MonodromyClass(MonodromyKind.IDENTITY, 1)
  if A == Monodromy(-1, 0, 0, -1):
    return MonodromyClass(MonodromyKind.MINUS_IDENTITY, 2)
  tr = A.trace
  if abs(tr) < 2:
    order = _ELLIPTIC_ORDER[tr]
    assert A.power(order) == Monodromy.identity()
    return MonodromyClass(MonodromyKind.ELLIPTIC, order)
  if abs(tr) == 2:
    return MonodromyClass(MonodromyKind.PARABOLIC)
  return MonodromyClass(MonodromyKind.HYPERBOLIC)


# -----------------------
# Fiber classes and their <A>-orbits
# -----------------------


@dataclass(frozen=True)
class FiberClass:
  """Primitive homotopy class (p, q) of a loop in a T^2 fiber."""

  p: int
  q: int

  def __post_init__(self) -> None:
    if (self.p, self.q) == (0, 0):
      raise DomainError('fiber class (0, 0) is trivial')
    if math.gcd(self.p, self.q) != 1:
      raise DomainError(
        f'fiber class ({self.p}, {self.q}) is not primitive; multiple covers '
        'are not handled'
      )

  @classmethod
  def parse(cls, text: str) -> 'FiberClass':
    p, q = (int(x) for x in text.split(','))
    return cls(p, q)

  def as_tuple(self) -> Vector:
    return (self.p, self.q)


@dataclass(frozen=True)
class ClassOrbit:
  """{A^k v : k in Z}: listed in full when finite."""

  finite: bool
  vectors: tuple[Vector, ...]
  reason: str


def class_orbit(A: Monodromy, v: FiberClass) -> ClassOrbit:
  """Decide finiteness of the <A>-orbit of v from the trace alone.

  |tr| > 2 gives an infinite orbit for every v (no rational eigenvector);
  |tr| = 2 gives a finite orbit iff A v is parallel to v; |tr| < 2 or A = +-I
  has finite order, so the orbit is listed by iterating up to that order.
  """
  kind = classify_monodromy(A)
  vec = v.as_tuple()
  if kind.kind is MonodromyKind.HYPERBOLIC:
    return ClassOrbit(False, (vec,), 'hyperbolic: |tr A| > 2')
  if kind.kind is MonodromyKind.PARABOLIC:
    w = A.apply(vec)
    if w[0] * vec[1] - w[1] * vec[0] != 0:
      return ClassOrbit(
        False, (vec,), 'parabolic: v is not an eigenvector direction'
      )
    reason = 'parabolic: v spans the fixed line'
  else:
    reason = f'{kind.kind.value}: A has order {kind.order}'
  seen = [vec]
  w = A.apply(vec)
  while w != vec:
    seen.append(w)
    w = A.apply(w)
  return ClassOrbit(True, tuple(seen), reason)


def _exact_turns(v: Vector) -> Fraction | None:
  """Direction angle of a primitive vector in turns, when rational."""
  p, q = v
  table = {
    (1, 0): Fraction(0),
    (1, 1): Fraction(1, 8),
    (0, 1): Fraction(1, 4),
    (-1, 1): Fraction(3, 8),
    (-1, 0): Fraction(1, 2),
    (-1, -1): Fraction(5, 8),
    (0, -1): Fraction(3, 4),
    (1, -1): Fraction(7, 8),
  }
  return table.get((p, q))


def _turns(v: Vector) -> float:
  return (math.atan2(v[1], v[0]) / TWO_PI) % 1.0


# -----------------------
# Angular profiles
# -----------------------


@dataclass(frozen=True)
class LinearProfile:
  """f(theta) = slope * theta + 2 pi phase, phase in turns."""

  slope: Fraction
  phase: Fraction = Fraction(0)

  def __post_init__(self) -> None:
    if self.slope <= 0:
      raise ProfileError(f'profile slope {self.slope} is not increasing')

  @property
  def delta(self) -> float:
    return TWO_PI * float(self.slope)

  def __call__(self, theta: float) -> float:
    return float(self.slope) * theta + TWO_PI * float(self.phase)


@dataclass(frozen=True)
class PiecewiseProfile:
  """Strictly increasing piecewise-linear f on [0, 2 pi], f(2 pi) = f(0) + delta."""

  breakpoints: tuple[tuple[float, float], ...]
  delta: float

  def __post_init__(self) -> None:
    pts = self.breakpoints
    if len(pts) < 2:
      raise ProfileError('a profile needs at least two breakpoints')
    thetas = [p[0] for p in pts]
    values = [p[1] for p in pts]
    if abs(thetas[0]) > 1e-12 or abs(thetas[-1] - TWO_PI) > 1e-12:
      raise ProfileError('breakpoints must start at 0 and end at 2 pi')
    if any(b <= a for a, b in zip(thetas, thetas[1:])):
      raise ProfileError('breakpoint angles must be strictly increasing')
    if any(b <= a for a, b in zip(values, values[1:])):
      raise ProfileError(
        'profile is not strictly increasing; non-monotone f is rejected'
      )
    gap = values[-1] - values[0] - self.delta
    if abs(gap) > 1e-9:
      raise ProfileError(
        'f(2 pi) - f(0) does not match delta', {'delta_gap': gap}
      )

  def __call__(self, theta: float) -> float:
    k, rest = divmod(theta, TWO_PI)
    xs, ys = zip(*self.breakpoints)
    return float(np.interp(rest, xs, ys)) + k * self.delta

  def slope_at(self, theta: float) -> float:
    xs = [p[0] for p in self.breakpoints]
    i = min(max(int(np.searchsorted(xs, theta, side='right')) - 1, 0),
            len(xs) - 2)
    (x0, y0), (x1, y1) = self.breakpoints[i], self.breakpoints[i + 1]
    return (y1 - y0) / (x1 - x0)


AngularProfile = LinearProfile | PiecewiseProfile


def zeta_index(profile: AngularProfile) -> int:
  """The n of zeta_n: 2(n-1) pi < delta <= 2 n pi."""
  return max(1, math.ceil(profile.delta / TWO_PI - 1e-12))


def _unit(angle: float) -> np.ndarray:
  return np.array([math.cos(angle), math.sin(angle)])


def compatibility_residuals(
  A: Monodromy, profile: AngularProfile, samples: int = 16
) -> dict[str, float]:
  """How far the plane field of f is from being invariant under the gluing.

  The pulled-back covector A^T u(f(theta + 2 pi)) has to be a positive
  multiple of u(f(theta)). A piecewise profile is the form on one fundamental
  domain, so only the seam theta = 0 ~ 2 pi is checked; a linear profile has
  constant quasi-period and is checked at evenly spaced samples.
  """
  At = np.array([[A.a, A.c], [A.b, A.d]], dtype=float)
  if isinstance(profile, LinearProfile):
    thetas = np.linspace(0.0, TWO_PI, samples, endpoint=False)
  else:
    thetas = np.array([0.0])
  worst_cross, worst_dot = 0.0, 1.0
  for th in thetas:
    f0 = profile(float(th))
    w = At @ _unit(f0 + profile.delta)
    w = w / np.linalg.norm(w)
    u = _unit(f0)
    worst_cross = max(worst_cross, abs(w[0] * u[1] - w[1] * u[0]))
    worst_dot = min(worst_dot, float(w @ u))
  return {'cross': worst_cross, 'dot': worst_dot}


def check_compatibility(
  A: Monodromy, profile: AngularProfile, tol: float = 1e-9
) -> dict[str, float]:
  res = compatibility_residuals(A, profile)
  if res['cross'] > tol or res['dot'] <= 0:
    raise ProfileError(
      f'profile is not compatible with monodromy {A.as_list()}', res
    )
  return res


def default_profile(A: Monodromy, n: int = 1) -> AngularProfile:
  """A compatible zeta_n profile: f(0) = 0 and f(2 pi) the lift of A^-T e_1."""
  if n < 1:
    raise DomainError(f'n must be >= 1, got {n}')
  if A == Monodromy.identity():
    return LinearProfile(Fraction(n))
  inv_t = A.inverse().transpose()
  w = inv_t.apply((1, 0))
  end = math.atan2(w[1], w[0]) % TWO_PI
  if end < 1e-15:
    end = TWO_PI
  end += TWO_PI * (n - 1)
  return PiecewiseProfile(((0.0, 0.0), (TWO_PI, end)), end)


# -----------------------
# Enumeration
# -----------------------


@dataclass(frozen=True)
class OrbitFamily:
  """A circle of closed orbits in the fiber over theta.

  `turns` is theta / 2 pi when it is an exact rational, else None and
  `error` bounds |theta - true root|.
  """

  theta: float
  fiber_class: FiberClass
  index_label: int
  turns: Fraction | None = None
  error: float = 0.0
  lift: int = 0

  def direction_residual(self, profile: AngularProfile) -> tuple[float, float]:
    """(cross, dot) of (cos f, sin f) against the normalized class vector."""
    u = _unit(profile(self.theta))
    v = np.array(self.fiber_class.as_tuple(), dtype=float)
    v = v / np.linalg.norm(v)
    return abs(u[0] * v[1] - u[1] * v[0]), float(u @ v)


def _solve_linear(
  profile: LinearProfile, v: Vector
) -> list[tuple[float, Fraction | None, float]]:
  exact = _exact_turns(v)
  slope, phase = profile.slope, profile.phase
  if exact is not None and isinstance(slope, (int, Fraction)):
    out = []
    m = math.ceil(phase - exact)
    while exact - phase + m < slope:
      x = (exact - phase + m) / slope
      out.append((TWO_PI * float(x), x, 0.0))
      m += 1
    return out
  a = _turns(v)
  s, ph = float(slope), float(phase)
  out = []
  m = math.ceil(ph - a)
  while a - ph + m < s:
    x = (a - ph + m) / s
    out.append((TWO_PI * x, None, 1e-14 * (1 + TWO_PI * x)))
    m += 1
  return out


def _solve_piecewise(
  profile: PiecewiseProfile, v: Vector
) -> list[tuple[float, Fraction | None, float]]:
  """Bisection on the monotone profile to 1e-12, then one Newton step."""
  target = math.atan2(v[1], v[0])
  f0 = profile.breakpoints[0][1]
  f1 = f0 + profile.delta
  m = math.ceil((f0 - target) / TWO_PI)
  out = []
  while target + TWO_PI * m < f1:
    level = target + TWO_PI * m
    m += 1
    if level < f0:
      continue

    def g(th: float, level: float = level) -> float:
      return profile(th) - level

    if g(0.0) == 0.0:
      root = 0.0
    else:
      root = brentq(g, 0.0, TWO_PI, xtol=1e-12)
      root -= g(root) / profile.slope_at(root)
    if root >= TWO_PI:
      continue
    err = abs(g(root)) / profile.slope_at(root) + 1e-15
    out.append((root % TWO_PI, None, err))
  return out


def solve_directions(
  profile: AngularProfile, v: Vector
) -> list[tuple[float, Fraction | None, float]]:
  """All theta in [0, 2 pi) with (cos f, sin f) a positive multiple of v."""
  if isinstance(profile, LinearProfile):
    return _solve_linear(profile, v)
  return _solve_piecewise(profile, v)


@dataclass(frozen=True)
class ShiftRule:
  """Orbit families of an infinite class, one lift per k in Z.

  Lift k collects the circles in [0, 2 pi) whose class is A^k v; the gluing
  identifies them with orbits of class v further up the cover.
  """

  monodromy: Monodromy
  profile: AngularProfile
  base: FiberClass

  def class_at(self, k: int) -> FiberClass:
    return FiberClass(*self.monodromy.power(k).apply(self.base.as_tuple()))

  def families(self, k: int) -> list[OrbitFamily]:
    cls = self.class_at(k)
    return [
      OrbitFamily(theta=th, fiber_class=cls, index_label=k, turns=t,
                  error=err, lift=k)
      for th, t, err in solve_directions(self.profile, cls.as_tuple())
    ]

  def window(self, k0: int, k1: int) -> Iterator[OrbitFamily]:
    for k in range(k0, k1 + 1):
      yield from self.families(k)


@dataclass(frozen=True)
class OrbitEnumeration:
  kind: str  # 'finite' | 'shift'
  families: tuple[OrbitFamily, ...] = ()
  rule: ShiftRule | None = None

  @property
  def count(self) -> int | None:
    return len(self.families) if self.kind == 'finite' else None


def _finite(
  profile: AngularProfile, classes: tuple[Vector, ...]
) -> OrbitEnumeration:
  found = []
  for w in classes:
    cls = FiberClass(*w)
    for th, t, err in solve_directions(profile, w):
      found.append((th, cls, t, err))
  found.sort(key=lambda r: r[0])
  return OrbitEnumeration(
    kind='finite',
    families=tuple(
      OrbitFamily(theta=th, fiber_class=cls, index_label=i, turns=t, error=err)
      for i, (th, cls, t, err) in enumerate(found)
    ),
  )


def enumerate_t3(n: int, cls: FiberClass) -> OrbitEnumeration:
  """The n circles of orbits of alpha_n in class cls, theta = (angle + 2 pi k) / n."""
  if n < 1:
    raise DomainError(f'n must be >= 1, got {n}')
  return _finite(LinearProfile(Fraction(n)), (cls.as_tuple(),))


def enumerate_bundle(
  A: Monodromy, profile: AngularProfile, cls: FiberClass, tol: float = 1e-9
) -> OrbitEnumeration:
  """Orbit circles of a zeta_n form on T^3_A in the free class of cls."""
  check_compatibility(A, profile, tol)
  orbit = class_orbit(A, cls)
  if orbit.finite:
    return _finite(profile, orbit.vectors)
  return OrbitEnumeration(kind='shift', rule=ShiftRule(A, profile, cls))
