"""Graded chain complexes over the group ring and their homology.

Homology over Q[t, 1/t] comes with invariant factors; over rings of rank > 1
it is returned as a presentation (generators + relation matrix) only.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

from .data import (
  DimensionError,
  DomainError,
  InvalidComplexError,
  StructuralError,
  UnsupportedRingError,
)
from .ring import GroupRingElem, Monomial, RingMatrix, _smith, invariant_factors

RingMode = Literal['quotient', 'full']


@dataclass(frozen=True)
class GradedComplex:
  """Free modules C_k of rank ranks[k] with d_k : C_k -> C_(k-1)."""

  rank: int
  ranks: dict[int, int]
  differentials: dict[int, RingMatrix] = field(default_factory=dict)

  @property
  def degrees(self) -> list[int]:
    return sorted(self.ranks)

  def rank_at(self, degree: int) -> int:
    return self.ranks.get(degree, 0)

  def differential(self, degree: int) -> RingMatrix:
    """d_degree, or the zero map when none is stored."""
    d = self.differentials.get(degree)
    if d is not None:
      return d
    return RingMatrix.zeros(
      self.rank, self.rank_at(degree - 1), self.rank_at(degree)
    )


@dataclass(frozen=True)
class HomologyPresentation:
  """H_degree = Q[Z^r]^generators / column span of relations."""

  degree: int
  generators: int
  relations: RingMatrix
  normal_form: list[GroupRingElem] | None = None

  @property
  def free_rank(self) -> int | None:
    if self.normal_form is None:
      return None
    return sum(1 for d in self.normal_form if d.is_zero)

  @property
  def torsion(self) -> list[GroupRingElem] | None:
    """Nonunit nonzero invariant factors."""
    if self.normal_form is None:
      return None
    return [d for d in self.normal_form if not d.is_zero and len(d.terms) > 1]

  @property
  def is_zero(self) -> bool:
    if self.generators == 0:
      return True
    if self.normal_form is None:
      return False
    return all(not d.is_zero and len(d.terms) == 1 for d in self.normal_form)


@dataclass(frozen=True)
class OrbitGeneratorPair:
  """The two generators a Morse-Bott circle of orbits contributes."""

  family_id: int
  degree_top: int = 0
  degree_bottom: int = -1

  def __post_init__(self) -> None:
    if self.degree_top != self.degree_bottom + 1:
      raise StructuralError(
        f'family {self.family_id}: top degree must be bottom degree + 1'
      )


def _check_shapes(c: GradedComplex) -> None:
  for k, d in c.differentials.items():
    if d.rank != c.rank:
      raise StructuralError(
        f'd_{k} is over rank {d.rank}, complex over {c.rank}'
      )
    want = (c.rank_at(k - 1), c.rank_at(k))
    if (d.rows, d.cols) != want:
      raise StructuralError(
        f'd_{k} has shape {d.rows}x{d.cols}, ranks require {want[0]}x{want[1]}'
      )


def verify_complex(c: GradedComplex) -> bool:
  """True iff every d_(k-1) o d_k is exactly zero; bad shapes raise."""
  _check_shapes(c)
  for k in c.differentials:
    if k - 1 in c.differentials:
      if not (c.differentials[k - 1] @ c.differentials[k]).is_zero:
        return False
  return True


def _monomial_pattern(d: RingMatrix) -> bool:
  """At most one nonzero entry in every row and every column."""
  rows_ok = all(sum(not x.is_zero for x in r) <= 1 for r in d.entries)
  cols_ok = all(
    sum(not x.is_zero for x in d.column(j)) <= 1 for j in range(d.cols)
  )
  return rows_ok and cols_ok


def _take_rows(m: RingMatrix, rows: Sequence[int]) -> RingMatrix:
  entries = tuple(m.entries[i] for i in rows)
  return RingMatrix(m.rank, len(rows), m.cols, entries)


def homology(c: GradedComplex, degree: int) -> HomologyPresentation:
  """Presentation of ker d_degree / im d_(degree+1).

  Over Q[t, 1/t] the kernel is read off the Smith form U d V = D: it is spanned
  by the columns of V past rank(D), and V^-1 d_(degree+1) expresses the
  boundaries in that basis. Over larger rings only differentials with at most
  one nonzero entry per row and column are supported; that covers every
  complex `build_morse_bott` produces.
  """
  if not verify_complex(c):
    raise InvalidComplexError(f'd o d != 0 in complex around degree {degree}')
  n = c.rank_at(degree)
  d_out = c.differential(degree)
  d_in = c.differential(degree + 1)

  if c.rank == 1:
    _, diag, _, v_inv = _smith(d_out)
    rank_out = sum(1 for x in diag.diagonal() if not x.is_zero)
    relations = _take_rows(v_inv @ d_in, range(rank_out, n))
    return HomologyPresentation(
      degree=degree,
      generators=n - rank_out,
      relations=relations,
      normal_form=invariant_factors(relations),
    )

  if not (_monomial_pattern(d_out) and _monomial_pattern(d_in)):
    raise UnsupportedRingError(
      'homology over rank > 1 needs differentials with at most one nonzero '
      'entry per row and column'
    )
  kernel = [j for j in range(n) if all(x.is_zero for x in d_out.column(j))]
  return HomologyPresentation(
    degree=degree,
    generators=len(kernel),
    relations=_take_rows(d_in, kernel),
  )


def build_morse_bott(
  families: Sequence[OrbitGeneratorPair],
  mode: RingMode,
  rank: int,
  relation_class: Monomial,
  offset: int = 0,
) -> GradedComplex:
  """Complex of Morse-Bott circles: two generators per circle.

  In full mode d(top_i) = (1 - e^relation_class) bottom_i; in quotient mode the
  relation class is trivial in the coefficient ring and d = 0.
  """
  if not families:
    raise DomainError('at least one circle of orbits is required')
  if mode not in ('quotient', 'full'):
    raise DomainError(f'unknown ring mode {mode!r}')
  if mode == 'full' and len(relation_class) != rank:
    raise DimensionError(
      f'relation class has length {len(relation_class)}, ring rank is {rank}'
    )

  ranks: dict[int, int] = {}
  slot: dict[tuple[int, int], int] = {}
  for fam in families:
    for deg in (fam.degree_top + offset, fam.degree_bottom + offset):
      slot[(fam.family_id, deg)] = ranks.get(deg, 0)
      ranks[deg] = ranks.get(deg, 0) + 1

  differentials: dict[int, RingMatrix] = {}
  if mode == 'full':
    coeff = GroupRingElem.one(rank) - GroupRingElem.monomial(relation_class)
    grids: dict[int, list[list[GroupRingElem]]] = {}
    zero = GroupRingElem.zero(rank)
    for fam in families:
      top = fam.degree_top + offset
      bottom = fam.degree_bottom + offset
      grid = grids.setdefault(
        top, [[zero] * ranks[top] for _ in range(ranks[bottom])]
      )
      grid[slot[(fam.family_id, bottom)]][slot[(fam.family_id, top)]] = coeff
    for top, grid in grids.items():
      differentials[top] = RingMatrix(
        rank, ranks[top - 1], ranks[top], tuple(tuple(r) for r in grid)
      )
  return GradedComplex(rank=rank, ranks=ranks, differentials=differentials)


def torus_betti(m: int) -> list[int]:
  """Ranks of H_k(T^m; Q), k = 0..m."""
  if m < 1:
    raise DomainError(f'torus dimension must be >= 1, got {m}')
  return [math.comb(m, k) for k in range(m + 1)]
