import random
import time
from fractions import Fraction

import pytest

from contact_loops.data import DimensionError, UnsupportedRingError
from contact_loops.ring import (
  GroupRingElem,
  H2Lattice,
  RingMatrix,
  T,
  divide_exact,
  divides,
  invariant_factors,
  is_unit,
  laurent,
  laurent_divmod,
  ring_add,
  ring_mul,
  snf_univariate,
  specialize,
)

ONE = GroupRingElem.one(1)


def mono(*exps, c=1):
  return GroupRingElem.monomial(exps, c)


def test_additive_inverse_is_zero():
  a = GroupRingElem.constant(2, 3)
  assert ring_add(a, GroupRingElem.constant(2, -3)).is_zero
  assert ring_add(a, -a).terms == ()


def test_disjoint_supports_and_like_terms():
  s = ring_add(mono(1, 0), mono(0, 1))
  assert len(s.terms) == 2
  half = mono(1, c=Fraction(1, 2))
  assert ring_add(half, half) == T


def test_mul_adds_exponents():
  assert ring_mul(mono(1, 0), mono(0, 1)) == mono(1, 1)
  assert str(ring_mul(ONE - T, ONE + T)) == '1 - t^2'


def test_relation_ideal_kills_multiple():
  rel = GroupRingElem.one(3) - mono(1, 0, 0)
  prod = rel * (mono(0, 1, 0) + 2)
  q = divide_exact(prod, rel)
  assert q == mono(0, 1, 0) + 2
  assert (prod - q * rel).is_zero


def test_rank_mismatch_raises():
  with pytest.raises(DimensionError):
    ring_add(GroupRingElem.one(1), GroupRingElem.one(2))
  with pytest.raises(DimensionError):
    ring_mul(mono(1), mono(1, 1))


def _random_elem(rng: random.Random, rank: int) -> GroupRingElem:
  terms = [
    (
      tuple(rng.randint(-2, 2) for _ in range(rank)),
      Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
    )
    for _ in range(rng.randint(0, 4))
  ]
  return GroupRingElem.from_terms(rank, terms)


def test_ring_axioms_on_random_triples():
  rng = random.Random(11)
  for _ in range(200):
    rank = rng.randint(1, 3)
    a, b, c = (_random_elem(rng, rank) for _ in range(3))
    assert ring_add(a, b) == ring_add(b, a)
    assert ring_mul(a, b) == ring_mul(b, a)
    assert ring_add(ring_add(a, b), c) == ring_add(a, ring_add(b, c))
    assert ring_mul(ring_mul(a, b), c) == ring_mul(a, ring_mul(b, c))
    assert ring_mul(a, ring_add(b, c)) == ring_add(
      ring_mul(a, b), ring_mul(a, c)
    )
    assert ring_mul(a, GroupRingElem.one(rank)) == a


def test_unit_times_inverse_is_one():
  rng = random.Random(13)
  for _ in range(100):
    rank = rng.randint(1, 3)
    exps = tuple(rng.randint(-5, 5) for _ in range(rank))
    coeff = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
    ok, inv = is_unit(mono(*exps, c=coeff))
    assert ok
    assert ring_mul(mono(*exps, c=coeff), inv) == GroupRingElem.one(rank)


def test_is_unit():
  ok, inv = is_unit(mono(2, -1, c=5))
  assert ok
  assert inv == mono(-2, 1, c=Fraction(1, 5))
  assert is_unit(ONE + T) == (False, None)
  assert is_unit(GroupRingElem.zero(1)) == (False, None)


def test_str_forms():
  assert str(ONE - T) == '1 - t'
  assert str(T * 3) == '3*t'
  assert str(mono(1, 0)) == 'e^(1,0)'
  assert str(GroupRingElem.zero(2)) == '0'


def test_laurent_divmod_exact_and_remainder():
  q, r = laurent_divmod(laurent({3: 1, 0: -1}), ONE - T)
  assert r.is_zero
  assert q == laurent({0: -1, 1: -1, 2: -1})
  q, r = laurent_divmod(laurent({2: 1, 0: 1}), ONE - T)
  assert r.is_zero or r.span < (ONE - T).span
  assert q * (ONE - T) + r == laurent({2: 1, 0: 1})


def test_divides_multivariate():
  b = GroupRingElem.one(2) - mono(1, 0)
  assert divides(b, GroupRingElem.one(2) - mono(2, 0))
  assert not divides(b, GroupRingElem.one(2) + mono(0, 1))
  assert divide_exact(mono(0, 1) + 1, b) is None


def test_specialize():
  x = GroupRingElem.one(3) - mono(1, 0, 0)
  assert specialize(x, 0) == ONE - T
  assert specialize(x, 1).is_zero
  assert specialize(mono(1, 2), 1) == laurent({2: 1})


# -----------------------
# Smith normal form
# -----------------------


def test_snf_single_entry():
  m = RingMatrix.from_rows(1, [[ONE - T]])
  u, d, v = snf_univariate(m)
  assert d == m
  assert u == RingMatrix.identity(1, 1)
  assert v == RingMatrix.identity(1, 1)


def test_snf_unit_normalized():
  m = RingMatrix.from_rows(1, [[T, 0], [0, 1]])
  _, d, _ = snf_univariate(m)
  assert d == RingMatrix.identity(1, 2)


def test_snf_upper_triangular():
  a = ONE - T
  m = RingMatrix.from_rows(1, [[a, a], [0, a]])
  u, d, v = snf_univariate(m)
  assert [str(x) for x in d.diagonal()] == ['1 - t', '1 - t']
  assert u @ m @ v == d


def test_snf_needs_univariate():
  m = RingMatrix.from_rows(2, [[GroupRingElem.one(2)]])
  with pytest.raises(UnsupportedRingError):
    snf_univariate(m)


def test_invariant_factors_padded():
  m = RingMatrix.from_rows(1, [[ONE - T], [0]])
  factors = invariant_factors(m)
  assert [str(x) for x in factors] == ['1 - t', '0']


def _random_entry(rng: random.Random) -> GroupRingElem:
  if rng.random() < 0.25:
    return GroupRingElem.zero(1)
  low = rng.randint(-2, 2)
  span = rng.randint(0, 3)
  coeffs = {e: rng.randint(-3, 3) for e in range(low, low + span + 1)}
  return laurent(coeffs)


def _normalized(x: GroupRingElem) -> bool:
  exps, c = x.terms[0]
  return exps == (0,) and c == 1


def test_snf_random_matrices():
  rng = random.Random(20240611)
  start = time.perf_counter()
  for _ in range(100):
    m = RingMatrix.from_rows(
      1, [[_random_entry(rng) for _ in range(4)] for _ in range(4)]
    )
    u, d, v = snf_univariate(m)
    assert u @ m @ v == d
    assert is_unit(u.det())[0]
    assert is_unit(v.det())[0]
    off = [d[i, j] for i in range(4) for j in range(4) if i != j]
    assert all(x.is_zero for x in off)
    diag = d.diagonal()
    assert all(divides(a, b) for a, b in zip(diag, diag[1:]))
    assert all(_normalized(x) for x in diag if not x.is_zero)
  assert time.perf_counter() - start < 60


def test_snf_of_smith_form_is_itself():
  rng = random.Random(5)
  for _ in range(20):
    m = RingMatrix.from_rows(
      1, [[_random_entry(rng) for _ in range(3)] for _ in range(3)]
    )
    _, d, _ = snf_univariate(m)
    u2, d2, v2 = snf_univariate(d)
    assert d2 == d
    assert u2 @ d @ v2 == d


def test_snf_coefficients_stay_small():
  # Seeded matrices whose naive Euclidean elimination blows up.
  rng = random.Random(20240611)
  for _ in range(8):
    m = RingMatrix.from_rows(
      1, [[_random_entry(rng) for _ in range(4)] for _ in range(4)]
    )
    _, d, _ = snf_univariate(m)
    for x in d.diagonal():
      assert all(abs(c.numerator) < 10**12 for _, c in x.terms)


# -----------------------
# Coordinate lattices
# -----------------------


def test_h2_lattice_ranks():
  assert H2Lattice(('x', 'y', 'theta')).rank == 3
  q = H2Lattice(('x', 'y', 'theta'), (('x', 'y'),))
  assert q.rank == 2
  assert q.basis == [('x', 'theta'), ('y', 'theta')]
  t5 = H2Lattice(('1', '2', '3', '4', '5'), (('4', '5'),))
  assert t5.rank == 9


def test_h2_lattice_orientation_and_labels():
  lat = H2Lattice(('x', 'y', 'theta'), (('x', 'y'),))
  assert lat.vector('theta', 'x') == tuple(-e for e in lat.vector('x', 'theta'))
  assert lat.vector('x', 'y') == (0, 0)
  assert lat.label(lat.vector('x', 'theta')) == 'A_{x,theta}'
  assert lat.label((2, -1)) == '2A_{x,theta} - A_{y,theta}'
