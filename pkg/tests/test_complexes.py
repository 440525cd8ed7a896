import pytest

from contact_loops.complexes import (
  GradedComplex,
  OrbitGeneratorPair,
  build_morse_bott,
  homology,
  torus_betti,
  verify_complex,
)
from contact_loops.data import (
  DimensionError,
  DomainError,
  InvalidComplexError,
  StructuralError,
)
from contact_loops.ring import GroupRingElem, RingMatrix, T, specialize

ONE = GroupRingElem.one(1)
XY = (1, 0, 0)


def pairs(n):
  return [OrbitGeneratorPair(k) for k in range(n)]


def test_zero_differentials_verify():
  c = GradedComplex(rank=1, ranks={0: 2, -1: 2})
  assert verify_complex(c)


def test_nonzero_square_fails():
  d = RingMatrix.from_rows(1, [[ONE - T]])
  c = GradedComplex(rank=1, ranks={0: 1, 1: 1, 2: 1}, differentials={1: d, 2: d})
  assert not verify_complex(c)
  with pytest.raises(InvalidComplexError):
    homology(c, 1)


def test_shape_mismatch_is_structural():
  d = RingMatrix.from_rows(1, [[ONE, ONE]])
  c = GradedComplex(rank=1, ranks={0: 1, -1: 1}, differentials={0: d})
  with pytest.raises(StructuralError):
    verify_complex(c)


def test_morse_bott_quotient_mode():
  c = build_morse_bott(pairs(2), 'quotient', 2, (0, 0))
  assert c.ranks == {0: 2, -1: 2}
  assert c.differential(0).is_zero
  assert verify_complex(c)
  for degree in (0, -1):
    h = homology(c, degree)
    assert h.generators == 2
    assert h.relations.is_zero


def test_morse_bott_full_mode_differential():
  c = build_morse_bott(pairs(3), 'full', 3, XY)
  rel = GroupRingElem.one(3) - GroupRingElem.monomial(XY)
  assert c.differential(0) == RingMatrix.identity(3, 3).scale(rel)
  assert verify_complex(c)


def test_full_mode_homology_relations():
  n = 3
  c = build_morse_bott(pairs(n), 'full', 3, XY)
  h = homology(c, -1)
  assert h.generators == n
  assert h.normal_form is None
  diag = [specialize(x, 0) for x in h.relations.diagonal()]
  assert [str(x) for x in diag] == ['1 - t'] * n
  assert homology(c, 0).generators == 0


def test_rank_one_full_mode_has_torsion():
  c = build_morse_bott(pairs(1), 'full', 1, (1,))
  h = homology(c, -1)
  assert h.generators == 1
  assert [str(x) for x in h.normal_form] == ['1 - t']
  assert h.free_rank == 0
  assert [str(x) for x in h.torsion] == ['1 - t']
  assert not h.is_zero
  top = homology(c, 0)
  assert top.generators == 0
  assert top.is_zero


def test_empty_complex_is_acyclic():
  c = GradedComplex(rank=1, ranks={})
  h = homology(c, 0)
  assert h.generators == 0
  assert h.is_zero


def test_morse_bott_errors():
  with pytest.raises(DomainError):
    build_morse_bott([], 'quotient', 2, (0, 0))
  with pytest.raises(DimensionError):
    build_morse_bott(pairs(1), 'full', 3, (1, 0))
  with pytest.raises(StructuralError):
    OrbitGeneratorPair(0, degree_top=1, degree_bottom=-1)


def test_offset_shifts_degrees():
  c = build_morse_bott(pairs(2), 'full', 1, (1,), offset=3)
  assert c.ranks == {3: 2, 2: 2}
  assert not c.differential(3).is_zero


@pytest.mark.parametrize(
  'm, row',
  [(1, [1, 1]), (3, [1, 3, 3, 1]), (5, [1, 5, 10, 10, 5, 1])],
)
def test_torus_betti(m, row):
  assert torus_betti(m) == row


def test_torus_betti_rejects_zero():
  with pytest.raises(DomainError):
    torus_betti(0)


@pytest.mark.parametrize('m', range(1, 11))
def test_torus_betti_sums_and_symmetry(m):
  row = torus_betti(m)
  assert len(row) == m + 1
  assert sum(row) == 2**m
  assert row == row[::-1]
