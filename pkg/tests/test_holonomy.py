import math
import random
from fractions import Fraction

import pytest

from contact_loops.complexes import (
  HomologyPresentation,
  OrbitGeneratorPair,
  build_morse_bott,
  homology,
)
from contact_loops.data import (
  DimensionError,
  DomainError,
  InvalidAutomorphismError,
  NotAChainMapError,
  UnsupportedError,
)
from contact_loops.holonomy import (
  FiniteAutomorphism,
  ShiftAutomorphism,
  Unit,
  act_on_homology,
  automorphism_from_loop,
  compose,
  cycles,
  eta_k,
  fiber_rotation_loop,
  identity_automorphism,
  inverse,
  is_identity,
  lattice_rank,
  order,
  power,
  reverse_loop,
  subgroup_rank,
  t3_lattice,
  t3_loop,
  t5_lattice,
  t5_loop,
  translation_loop,
)
from contact_loops.ring import GroupRingElem, RingMatrix, T


def test_t3_loop_matrix():
  lat = t3_lattice()
  a = automorphism_from_loop(t3_loop(3, lat))
  assert a.perm == (1, 2, 0)
  twist = lat.vector('x', 'theta')
  assert [m.exps for m in a.multipliers] == [(0, 0), (0, 0), twist]
  m = a.to_matrix()
  assert m[0, 2] == Unit.of(twist).as_elem()
  assert m[1, 0] == Unit.one(2).as_elem()


def test_t3_squared_is_diagonal_twist():
  lat = t3_lattice()
  a = automorphism_from_loop(t3_loop(2, lat))
  sq = compose(a, a)
  twist = lat.vector('x', 'theta')
  assert sq.perm == (0, 1)
  assert [m.exps for m in sq.multipliers] == [twist, twist]


def test_compose_with_inverse_is_identity():
  a = automorphism_from_loop(t3_loop(4))
  assert is_identity(compose(a, inverse(a)))
  assert is_identity(compose(inverse(a), a))


def test_reverse_loop_inverts():
  loop = t3_loop(5)
  a = automorphism_from_loop(loop)
  b = automorphism_from_loop(reverse_loop(loop))
  assert is_identity(compose(a, b))


def test_shift_composition():
  one = Unit.one(1)
  s = compose(ShiftAutomorphism(1, 1, one), ShiftAutomorphism(1, 2, one))
  assert s.shift == 3
  assert is_identity(power(ShiftAutomorphism(1, 2, one), 0))
  assert power(ShiftAutomorphism(1, 1, one), -3).shift == -3


def test_shift_exceptions_compose():
  u = Unit.of((1,))
  a = ShiftAutomorphism(1, 1, Unit.one(1), ((0, u),))
  b = inverse(a)
  assert is_identity(compose(a, b))
  assert is_identity(compose(b, a))


def test_unit_from_element():
  u = Unit.from_elem(T * Fraction(-2))
  assert (u.coeff, u.exps) == (Fraction(-2), (1,))
  with pytest.raises(InvalidAutomorphismError):
    Unit.from_elem(GroupRingElem.one(1) - T)


def test_invalid_permutation():
  with pytest.raises(InvalidAutomorphismError):
    FiniteAutomorphism(1, (0, 0), (Unit.one(1), Unit.one(1)))
  with pytest.raises(InvalidAutomorphismError):
    Unit(Fraction(0), (0,))


def test_compose_mismatch():
  with pytest.raises(DimensionError):
    compose(identity_automorphism(1, 2), identity_automorphism(1, 3))
  with pytest.raises(DimensionError):
    compose(identity_automorphism(1, 2), ShiftAutomorphism(1, 1, Unit.one(1)))


# -----------------------
# Order certificates
# -----------------------


@pytest.mark.parametrize('n', [1, 2, 3, 6])
def test_t3_loop_has_infinite_order(n):
  lat = t3_lattice()
  cert = order(automorphism_from_loop(t3_loop(n, lat)))
  assert not cert.finite
  assert lat.label(cert.witness['twist']) == 'A_{x,theta}'


def test_two_cycle_has_order_two():
  a = FiniteAutomorphism(1, (1, 0), (Unit.one(1), Unit.one(1)))
  assert order(a).order == 2


def test_sign_twist_doubles_order():
  a = FiniteAutomorphism(1, (1, 0), (Unit.of((0,), -1), Unit.one(1)))
  assert order(a).order == 4


def test_shift_is_infinite():
  cert = order(ShiftAutomorphism(1, 1, Unit.one(1)))
  assert not cert.finite
  assert cert.witness == {'shift': 1}


def _brute_force_order(a, bound):
  p = a
  for j in range(1, bound + 1):
    if is_identity(p):
      return j
    p = compose(a, p)
  return None


def _random_automorphism(rng: random.Random) -> FiniteAutomorphism:
  size = rng.randint(1, 6)
  rank = rng.randint(1, 3)
  perm = list(range(size))
  rng.shuffle(perm)
  mults = []
  for _ in range(size):
    exps = tuple(rng.randint(-3, 3) for _ in range(rank))
    mults.append(Unit.of(exps, rng.choice([1, -1, 2])))
  a = FiniteAutomorphism(rank, tuple(perm), tuple(mults))
  if rng.random() < 0.6:
    a = _untwisted(a, rng)
  return a


def _untwisted(a: FiniteAutomorphism, rng: random.Random) -> FiniteAutomorphism:
  """Same permutation, multipliers chosen so every cycle twist vanishes."""
  mults = list(a.multipliers)
  for cyc in cycles(a.perm):
    total = [0] * a.rank
    for i in cyc[:-1]:
      mults[i] = Unit.of(a.multipliers[i].exps, rng.choice([1, -1]))
      total = [t + e for t, e in zip(total, mults[i].exps)]
    mults[cyc[-1]] = Unit.of(tuple(-t for t in total), rng.choice([1, -1]))
  return FiniteAutomorphism(a.rank, a.perm, tuple(mults))


def test_order_matches_brute_force():
  rng = random.Random(7)
  finite = 0
  for _ in range(200):
    a = _random_automorphism(rng)
    cert = order(a)
    bound = math.lcm(*range(1, a.size + 1)) * 2
    brute = _brute_force_order(a, bound)
    if cert.finite:
      finite += 1
      assert brute == cert.order
    else:
      assert brute is None
  assert finite > 50


# -----------------------
# Subgroups and homology actions
# -----------------------


def test_t5_subgroup_rank():
  lat = t5_lattice()
  assert lat.rank == 9
  for size in (1, 4, 8):
    gens = [automorphism_from_loop(t5_loop(i, size, lat)) for i in (1, 2, 3)]
    assert subgroup_rank(gens) == 3


def test_subgroup_rank_small_cases():
  rot = automorphism_from_loop(fiber_rotation_loop(1))
  assert subgroup_rank([rot]) == 1
  assert subgroup_rank([rot, rot]) == 1
  assert lattice_rank([[1, 2], [2, 4], [0, 0]]) == 1


def test_subgroup_rank_rejects_permutations():
  with pytest.raises(UnsupportedError):
    subgroup_rank([automorphism_from_loop(t3_loop(2))])


def test_fiber_rotation():
  free = order(automorphism_from_loop(fiber_rotation_loop(1)))
  assert not free.finite
  trivial = order(automorphism_from_loop(fiber_rotation_loop(0)))
  assert trivial.finite and trivial.order == 1


def _full_t3_homology(n):
  lat = t3_lattice(quotient=False)
  pairs = [OrbitGeneratorPair(k) for k in range(n)]
  c = build_morse_bott(pairs, 'full', lat.rank, lat.vector('x', 'y'))
  return lat, homology(c, -1)


def test_translation_acts_trivially_on_full_homology():
  lat, h = _full_t3_homology(3)
  shift = automorphism_from_loop(translation_loop(3, lat))
  assert not is_identity(shift)
  assert is_identity(act_on_homology(shift, h))


def test_identity_action():
  lat, h = _full_t3_homology(2)
  assert is_identity(act_on_homology(identity_automorphism(lat.rank, 2), h))


def test_loop_action_on_quotient_is_unchanged():
  lat = t3_lattice()
  c = build_morse_bott(
    [OrbitGeneratorPair(0), OrbitGeneratorPair(1)], 'quotient', lat.rank,
    lat.vector('x', 'y'),
  )
  h = homology(c, -1)
  a = automorphism_from_loop(t3_loop(2, lat))
  assert act_on_homology(a, h) == a


def test_non_chain_map_rejected():
  one = GroupRingElem.one(1)
  rel = RingMatrix.from_rows(1, [[one - T], [0]])
  pres = HomologyPresentation(degree=-1, generators=2, relations=rel)
  swap = FiniteAutomorphism(1, (1, 0), (Unit.one(1), Unit.one(1)))
  with pytest.raises(NotAChainMapError) as err:
    act_on_homology(swap, pres)
  assert err.value.relation == 0


# -----------------------
# Higher morphisms
# -----------------------


def test_eta_examples():
  eta = eta_k(1, 2)
  assert eta.multiplier == T
  assert eta.degree_shift == 2
  assert eta.precompose_degree(3).multiplier == T * 3
  assert (eta_k(2, 3) + eta_k(5, 3)).multiplier == T * 7
  assert eta_k(4, 3).degree_shift == 4


def test_eta_needs_marked_point_dimension():
  with pytest.raises(DomainError):
    eta_k(1, 1)
  with pytest.raises(DimensionError):
    eta_k(1, 2) + eta_k(1, 3)
