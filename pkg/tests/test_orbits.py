import math
import random
from fractions import Fraction

import pytest

from contact_loops.data import DomainError, InvalidMonodromyError, ProfileError
from contact_loops.orbits import (
  FiberClass,
  LinearProfile,
  Monodromy,
  MonodromyKind,
  PiecewiseProfile,
  check_compatibility,
  class_orbit,
  classify_monodromy,
  compatibility_residuals,
  default_profile,
  enumerate_bundle,
  enumerate_t3,
  zeta_index,
)

TWO_PI = 2 * math.pi
ROT = Monodromy(0, -1, 1, 0)
PARA = Monodromy(1, 1, 0, 1)
HYP = Monodromy(2, 1, 1, 1)


def test_classify_examples():
  assert classify_monodromy(ROT).kind is MonodromyKind.ELLIPTIC
  assert classify_monodromy(ROT).order == 4
  assert ROT.power(4) == Monodromy.identity()
  assert classify_monodromy(PARA).kind is MonodromyKind.PARABOLIC
  assert classify_monodromy(HYP).kind is MonodromyKind.HYPERBOLIC
  assert classify_monodromy(ROT).finite_order
  assert not classify_monodromy(PARA).finite_order
  assert classify_monodromy(Monodromy(-1, 0, 0, -1)).order == 2
  assert classify_monodromy(Monodromy(0, -1, 1, 1)).order == 6
  assert classify_monodromy(Monodromy(-1, -1, 1, 0)).order == 3


def test_bad_determinant():
  with pytest.raises(InvalidMonodromyError):
    Monodromy(1, 1, 1, 1)


def test_class_orbit_decisions():
  fixed = class_orbit(PARA, FiberClass(1, 0))
  assert fixed.finite and fixed.vectors == ((1, 0),)
  assert not class_orbit(PARA, FiberClass(0, 1)).finite
  assert not class_orbit(HYP, FiberClass(1, 0)).finite
  assert len(class_orbit(ROT, FiberClass(1, 0)).vectors) == 4


def _random_sl2(rng: random.Random) -> Monodromy:
  gens = [ROT, PARA, PARA.inverse()]
  a = Monodromy.identity()
  for _ in range(rng.randint(0, 6)):
    a = a @ rng.choice(gens)
  return a


def test_class_orbit_agrees_with_classification():
  rng = random.Random(3)
  for _ in range(300):
    A = _random_sl2(rng)
    v = FiberClass(*rng.choice([(1, 0), (0, 1), (1, 1), (2, -1), (-3, 2)]))
    kind = classify_monodromy(A)
    orbit = class_orbit(A, v)
    if kind.kind is MonodromyKind.HYPERBOLIC:
      assert not orbit.finite
    elif kind.kind is MonodromyKind.PARABOLIC:
      w = A.apply(v.as_tuple())
      parallel = w[0] * v.q - w[1] * v.p == 0
      assert orbit.finite == parallel
    else:
      assert kind.finite_order
      assert orbit.finite
      assert kind.order % len(orbit.vectors) == 0
    if orbit.finite:
      assert A.apply(orbit.vectors[-1]) == v.as_tuple()


def test_parabolic_orbit_grows():
  v = (0, 1)
  norms = []
  for _ in range(20):
    v = PARA.apply(v)
    norms.append(math.hypot(*v))
  assert all(b > a for a, b in zip(norms, norms[1:]))


def test_fiber_class_validation():
  with pytest.raises(DomainError):
    FiberClass(0, 0)
  with pytest.raises(DomainError):
    FiberClass(2, 4)
  assert FiberClass.parse('-1,0') == FiberClass(-1, 0)


@pytest.mark.parametrize(
  'n, cls, expected',
  [
    (2, (1, 0), [0.0, math.pi]),
    (1, (0, 1), [math.pi / 2]),
    (3, (-1, 0), [math.pi / 3, math.pi, 5 * math.pi / 3]),
  ],
)
def test_enumerate_t3(n, cls, expected):
  e = enumerate_t3(n, FiberClass(*cls))
  assert e.kind == 'finite'
  assert e.count == n
  assert [f.theta for f in e.families] == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize('n', range(1, 13))
def test_enumerate_t3_up_to_twelve(n):
  for cls in ((1, 0), (0, 1), (-1, 0), (2, 3)):
    e = enumerate_t3(n, FiberClass(*cls))
    thetas = [f.theta for f in e.families]
    assert e.count == n
    assert thetas == sorted(thetas)
    assert all(0 <= th < TWO_PI for th in thetas)
    base = math.atan2(cls[1], cls[0])
    for th in thetas:
      assert math.cos(n * th - base) == pytest.approx(1.0, abs=1e-12)
    gaps = [b - a for a, b in zip(thetas, thetas[1:])]
    assert gaps == pytest.approx([TWO_PI / n] * (n - 1), abs=1e-12)


def test_enumerate_t3_exact_turns():
  e = enumerate_t3(4, FiberClass(0, 1))
  assert [f.turns for f in e.families] == [
    Fraction(1, 16), Fraction(5, 16), Fraction(9, 16), Fraction(13, 16)
  ]


def test_enumerate_t3_dense_scan():
  n, v = 3, (-1, 0)
  thetas = [f.theta for f in enumerate_t3(n, FiberClass(*v)).families]
  for th in thetas:
    assert math.cos(n * th) == pytest.approx(-1.0, abs=1e-12)
  grid = [TWO_PI * k / 20000 for k in range(20000)]
  hits = [th for th in grid if math.cos(n * th) < -1 + 1e-6]
  clusters = 1 + sum(b - a > 0.1 for a, b in zip(hits, hits[1:]))
  assert clusters == n


def test_identity_bundle_matches_t3():
  profile = LinearProfile(Fraction(2))
  a = enumerate_bundle(Monodromy.identity(), profile, FiberClass(1, 0))
  b = enumerate_t3(2, FiberClass(1, 0))
  assert [f.theta for f in a.families] == [f.theta for f in b.families]


def test_parabolic_fixed_class_is_finite():
  start = math.pi / 2
  profile = PiecewiseProfile(((0.0, start), (TWO_PI, start + TWO_PI)), TWO_PI)
  e = enumerate_bundle(PARA, profile, FiberClass(1, 0))
  assert e.kind == 'finite'
  assert e.count == 1
  assert e.families[0].theta == pytest.approx(1.5 * math.pi, abs=1e-9)


def test_hyperbolic_is_shift_indexed():
  profile = default_profile(HYP)
  e = enumerate_bundle(HYP, profile, FiberClass(1, 0))
  assert e.kind == 'shift'
  assert e.count is None
  assert e.rule.class_at(1) == FiberClass(2, 1)
  for f in e.rule.window(-2, 2):
    cross, dot = f.direction_residual(profile)
    assert cross < 1e-9 and dot > 0


def test_default_profiles_are_compatible():
  for A in (ROT, PARA, HYP, Monodromy(0, -1, 1, 1)):
    for n in (1, 2):
      res = check_compatibility(A, default_profile(A, n))
      assert res['cross'] < 1e-9
      assert zeta_index(default_profile(A, n)) == n


def test_incompatible_profile_reports_residuals():
  profile = LinearProfile(Fraction(1, 3))
  res = compatibility_residuals(Monodromy.identity(), profile)
  assert res['cross'] > 0.1
  with pytest.raises(ProfileError) as err:
    check_compatibility(Monodromy.identity(), profile)
  assert err.value.residuals['cross'] == pytest.approx(res['cross'])


def test_non_monotone_profile_rejected():
  with pytest.raises(ProfileError):
    PiecewiseProfile(
      ((0.0, 0.0), (math.pi, 1.0), (TWO_PI, 0.5)), 0.5
    )
  with pytest.raises(ProfileError):
    LinearProfile(Fraction(-1))
