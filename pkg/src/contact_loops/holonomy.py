"""Monomial automorphisms induced by loops of contact structures.

A loop of diffeomorphisms sends each orbit generator g_i to e^(A_i) g_sigma(i),
where A_i is the class of the torus the orbit sweeps out. This module builds
those automorphisms, composes them, certifies their order, measures the rank
of the subgroups they generate and pushes them to homology presentations.
It also carries the higher morphisms eta_k (multiplication by d t).
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .complexes import HomologyPresentation, _monomial_pattern
from .data import (
  DimensionError,
  DomainError,
  InvalidAutomorphismError,
  NotAChainMapError,
  UnsupportedError,
  UnsupportedRingError,
)
from .orbits import OrbitEnumeration
from .ring import (
  GroupRingElem,
  H2Lattice,
  Monomial,
  RingMatrix,
  T,
  divides,
  is_unit,
  snf_univariate,
)


@dataclass(frozen=True)
class Unit:
  """The unit coeff * e^exps of Q[Z^r]."""

  coeff: Fraction
  exps: Monomial

  def __post_init__(self) -> None:
    if self.coeff == 0:
      raise InvalidAutomorphismError('a multiplier must be a unit, got 0')

  @classmethod
  def one(cls, rank: int) -> 'Unit':
    return cls(Fraction(1), (0,) * rank)

  @classmethod
  def of(cls, exps: Sequence[int], coeff: int | Fraction = 1) -> 'Unit':
    return cls(Fraction(coeff), tuple(exps))

  @classmethod
  def from_elem(cls, a: GroupRingElem) -> 'Unit':
    ok, _ = is_unit(a)
    if not ok:
      raise InvalidAutomorphismError(f'{a} is not a unit of the group ring')
    exps, c = a.terms[0]
    return cls(c, exps)

  @property
  def rank(self) -> int:
    return len(self.exps)

  @property
  def is_one(self) -> bool:
    return self.coeff == 1 and not any(self.exps)

  def __mul__(self, other: 'Unit') -> 'Unit':
    if other.rank != self.rank:
      raise DimensionError(f'unit rank mismatch: {self.rank} vs {other.rank}')
    return Unit(
      self.coeff * other.coeff,
      tuple(x + y for x, y in zip(self.exps, other.exps)),
    )

  def inverse(self) -> 'Unit':
    return Unit(1 / self.coeff, tuple(-e for e in self.exps))

  def as_elem(self) -> GroupRingElem:
    return GroupRingElem.monomial(self.exps, self.coeff)


@dataclass(frozen=True)
class FiniteAutomorphism:
  """g_i -> multipliers[i] * g_perm[i] on n generators."""

  rank: int
  perm: tuple[int, ...]
  multipliers: tuple[Unit, ...]

  def __post_init__(self) -> None:
    n = len(self.perm)
    if sorted(self.perm) != list(range(n)):
      raise InvalidAutomorphismError(f'{list(self.perm)} is not a permutation')
    if len(self.multipliers) != n:
      raise InvalidAutomorphismError('one multiplier per generator is required')
    for m in self.multipliers:
      if m.rank != self.rank:
        raise DimensionError(
          f'multiplier over rank {m.rank} in a rank {self.rank} automorphism'
        )

  @property
  def size(self) -> int:
    return len(self.perm)

  def to_matrix(self) -> RingMatrix:
    """Column i holds multipliers[i] in row perm[i]."""
    z = GroupRingElem.zero(self.rank)
    grid = [[z] * self.size for _ in range(self.size)]
    for i, (j, m) in enumerate(zip(self.perm, self.multipliers)):
      grid[j][i] = m.as_elem()
    return RingMatrix(
      self.rank, self.size, self.size, tuple(tuple(r) for r in grid)
    )


@dataclass(frozen=True)
class ShiftAutomorphism:
  """g_k -> multiplier(k) * g_(k + shift) on generators indexed by Z.

  Multipliers equal `tail` except at finitely many listed indices.
  """

  rank: int
  shift: int
  tail: Unit
  exceptions: tuple[tuple[int, Unit], ...] = ()

  def __post_init__(self) -> None:
    if self.tail.rank != self.rank or any(
      u.rank != self.rank for _, u in self.exceptions
    ):
      raise DimensionError('multiplier rank does not match the automorphism')
    keys = [k for k, _ in self.exceptions]
    if keys != sorted(set(keys)):
      raise InvalidAutomorphismError(
        'exception indices must be sorted and distinct'
      )

  def multiplier(self, k: int) -> Unit:
    return dict(self.exceptions).get(k, self.tail)


MonomialAutomorphism = FiniteAutomorphism | ShiftAutomorphism


def _shift_of(rank: int, shift: int, tail: Unit, mults: dict[int, Unit]):
  return ShiftAutomorphism(
    rank,
    shift,
    tail,
    tuple(sorted((k, u) for k, u in mults.items() if u != tail)),
  )


def identity_automorphism(rank: int, n: int) -> FiniteAutomorphism:
  return FiniteAutomorphism(rank, tuple(range(n)), (Unit.one(rank),) * n)


# -----------------------
# Loops
# -----------------------


@dataclass(frozen=True)
class LoopData:
  """Orbit permutation of the loop and the torus class each orbit sweeps."""

  permutation: tuple[int, ...]
  torus_classes: dict[int, Monomial] = field(default_factory=dict)

  @property
  def rank(self) -> int:
    if not self.torus_classes:
      return 0
    return len(next(iter(self.torus_classes.values())))


def automorphism_from_loop(data: LoopData) -> FiniteAutomorphism:
  """g_i -> e^(A_i) g_sigma(i)."""
  n = len(data.permutation)
  missing = [i for i in range(n) if i not in data.torus_classes]
  if missing:
    raise InvalidAutomorphismError(f'no torus class for orbits {missing}')
  return FiniteAutomorphism(
    data.rank,
    tuple(data.permutation),
    tuple(Unit.of(data.torus_classes[i]) for i in range(n)),
  )


def reverse_loop(data: LoopData) -> LoopData:
  """The loop run backwards: sigma^-1, and the orbit at sigma(i) sweeps -A_i."""
  inv = [0] * len(data.permutation)
  classes: dict[int, Monomial] = {}
  for i, j in enumerate(data.permutation):
    inv[j] = i
    classes[j] = tuple(-e for e in data.torus_classes[i])
  return LoopData(tuple(inv), classes)


def t3_lattice(quotient: bool = True) -> H2Lattice:
  """H_2(T^3) in coordinates (x, y, theta), optionally modulo A_{x,y}."""
  rel = (('x', 'y'),) if quotient else ()
  return H2Lattice(('x', 'y', 'theta'), rel)


def t5_lattice() -> H2Lattice:
  """H_2(T^5) modulo A_{4,5}: rank 9."""
  return H2Lattice(('1', '2', '3', '4', '5'), (('4', '5'),))


def t3_loop(n: int, lattice: H2Lattice | None = None) -> LoopData:
  """The loop xi_(n,s): g_k -> g_(k+1), and g_(n-1) -> e^(A_{x,theta}) g_0."""
  if n < 1:
    raise DomainError(f'n must be >= 1, got {n}')
  lattice = lattice or t3_lattice()
  zero = (0,) * lattice.rank
  classes = {k: zero for k in range(n)}
  classes[n - 1] = lattice.vector('x', 'theta')
  return LoopData(tuple((k + 1) % n for k in range(n)), classes)


def translation_loop(n: int, lattice: H2Lattice, coords=('x', 'y')) -> LoopData:
  """phi_s translating along a fiber coordinate: pure multiplication."""
  cls = lattice.vector(*coords)
  return LoopData(tuple(range(n)), {k: cls for k in range(n)})


def t5_loop(i: int, size: int, lattice: H2Lattice | None = None) -> LoopData:
  """xi^(i)_s on T^5 (i = 1, 2, 3): every generator picks up e^(A_{i,4})."""
  if i not in (1, 2, 3):
    raise DomainError(f'T^5 loops are indexed by i = 1, 2, 3, got {i}')
  lattice = lattice or t5_lattice()
  cls = lattice.vector(str(i), '4')
  return LoopData(tuple(range(size)), {k: cls for k in range(size)})


def fiber_rotation_loop(intersection_number: int) -> LoopData:
  """Fiber rotation on ST*Sigma_g around the unique orbit of a class.

  The swept torus T over the closed geodesic is free in H_2 when some loop
  meets it with nonzero intersection number; then [T] is a free variable,
  otherwise its class is treated as 0.
  """
  return LoopData((0,), {0: (1,) if intersection_number != 0 else (0,)})


def bundle_automorphism(enum: OrbitEnumeration) -> MonomialAutomorphism:
  """eta(zeta_(n,s)) on a T^3_A class, over Q[e^[T]] with [T] the swept torus.

  Finite enumerations give a cyclic permutation of the circles (sorted by
  theta) with one generator multiplied by e^[T]; infinite ones the shift
  g_k -> g_(k+1).
  """
  if enum.kind == 'shift':
    return ShiftAutomorphism(1, 1, Unit.one(1))
  n = len(enum.families)
  if n == 0:
    raise DomainError('no orbit circles in this class')
  classes = {k: (0,) for k in range(n)}
  classes[n - 1] = (1,)
  return automorphism_from_loop(
    LoopData(tuple((k + 1) % n for k in range(n)), classes)
  )


# -----------------------
# Group operations
# -----------------------


def _check_same(a: MonomialAutomorphism, b: MonomialAutomorphism) -> None:
  if type(a) is not type(b):
    raise DimensionError('cannot compose finite and Z-indexed automorphisms')
  if a.rank != b.rank:
    raise DimensionError(f'ring rank mismatch: {a.rank} vs {b.rank}')
  if isinstance(a, FiniteAutomorphism) and a.size != b.size:
    raise DimensionError(f'index sets differ: {a.size} vs {b.size}')


def compose(
  a: MonomialAutomorphism, b: MonomialAutomorphism
) -> MonomialAutomorphism:
  """a o b: apply b, then a."""
  _check_same(a, b)
  if isinstance(a, FiniteAutomorphism):
    return FiniteAutomorphism(
      a.rank,
      tuple(a.perm[b.perm[i]] for i in range(a.size)),
      tuple(
        b.multipliers[i] * a.multipliers[b.perm[i]] for i in range(a.size)
      ),
    )
  keys = {k for k, _ in b.exceptions} | {k - b.shift for k, _ in a.exceptions}
  mults = {k: b.multiplier(k) * a.multiplier(k + b.shift) for k in keys}
  return _shift_of(a.rank, a.shift + b.shift, b.tail * a.tail, mults)


def inverse(a: MonomialAutomorphism) -> MonomialAutomorphism:
  if isinstance(a, FiniteAutomorphism):
    perm = [0] * a.size
    mults = [Unit.one(a.rank)] * a.size
    for i, (j, m) in enumerate(zip(a.perm, a.multipliers)):
      perm[j] = i
      mults[j] = m.inverse()
    return FiniteAutomorphism(a.rank, tuple(perm), tuple(mults))
  mults = {k + a.shift: u.inverse() for k, u in a.exceptions}
  return _shift_of(a.rank, -a.shift, a.tail.inverse(), mults)


def power(a: MonomialAutomorphism, k: int) -> MonomialAutomorphism:
  """a^k by repeated squaring; negative k inverts first."""
  base = a if k >= 0 else inverse(a)
  if isinstance(a, FiniteAutomorphism):
    out: MonomialAutomorphism = identity_automorphism(a.rank, a.size)
  else:
    out = ShiftAutomorphism(a.rank, 0, Unit.one(a.rank))
  k = abs(k)
  while k:
    if k & 1:
      out = compose(base, out)
    base = compose(base, base)
    k >>= 1
  return out


def is_identity(a: MonomialAutomorphism) -> bool:
  if isinstance(a, FiniteAutomorphism):
    return all(j == i for i, j in enumerate(a.perm)) and all(
      m.is_one for m in a.multipliers
    )
  return a.shift == 0 and a.tail.is_one and all(
    u.is_one for _, u in a.exceptions
  )


# -----------------------
# Order certificates
# -----------------------


@dataclass(frozen=True)
class OrderCertificate:
  """Finite(order) or Infinite(witness)."""

  finite: bool
  order: int | None = None
  witness: dict[str, Any] | None = None


def cycles(perm: Sequence[int]) -> list[list[int]]:
  seen = [False] * len(perm)
  out = []
  for start in range(len(perm)):
    if seen[start]:
      continue
    cyc = []
    i = start
    while not seen[i]:
      seen[i] = True
      cyc.append(i)
      i = perm[i]
    out.append(cyc)
  return out


def _unit_order(u: Unit) -> int | None:
  """Order of a unit in Q^* x Z^r, None when infinite."""
  if any(u.exps):
    return None
  return {Fraction(1): 1, Fraction(-1): 2}.get(u.coeff)


def order(a: MonomialAutomorphism) -> OrderCertificate:
  """Exact order from cycle twists, without powering.

  Going once around a cycle of length L multiplies each of its generators by
  the product of the cycle's multipliers; a nonzero exponent sum (twist) or a
  coefficient other than +-1 makes every power nontrivial. Otherwise the order
  is the lcm of L * ord(coefficient product) over the cycles.
  """
  if isinstance(a, ShiftAutomorphism):
    if a.shift != 0:
      return OrderCertificate(False, witness={'shift': a.shift})
    m = 1
    for k, u in [(None, a.tail), *a.exceptions]:
      o = _unit_order(u)
      if o is None:
        where = 'tail' if k is None else k
        return OrderCertificate(
          False,
          witness={
            'cycle': [where],
            'twist': list(u.exps),
            'coefficient': str(u.coeff),
          },
        )
      m = math.lcm(m, o)
    return OrderCertificate(True, order=m)

  m = 1
  for cyc in cycles(a.perm):
    total = Unit.one(a.rank)
    for i in cyc:
      total = total * a.multipliers[i]
    o = _unit_order(total)
    if o is None:
      return OrderCertificate(
        False,
        witness={
          'cycle': cyc,
          'twist': list(total.exps),
          'coefficient': str(total.coeff),
        },
      )
    m = math.lcm(m, len(cyc) * o)
  if not is_identity(power(a, m)):
    raise AssertionError(f'order certificate {m} failed the power-up check')
  return OrderCertificate(True, order=m)


# -----------------------
# Subgroups and homology
# -----------------------


def lattice_rank(vectors: Sequence[Sequence[int]]) -> int:
  """Rank of the integer lattice spanned by the vectors (row reduction over Q)."""
  rows = [[Fraction(x) for x in v] for v in vectors if any(v)]
  if not rows:
    return 0
  ncols = len(rows[0])
  r = 0
  for c in range(ncols):
    piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
    if piv is None:
      continue
    rows[r], rows[piv] = rows[piv], rows[r]
    for i in range(len(rows)):
      if i != r and rows[i][c] != 0:
        f = rows[i][c] / rows[r][c]
        rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
    r += 1
    if r == len(rows):
      break
  return r


def _scalar_exponents(a: MonomialAutomorphism) -> Monomial:
  if not isinstance(a, FiniteAutomorphism) or a.perm != tuple(range(a.size)):
    raise UnsupportedError('subgroup rank needs pure multiplications')
  first = a.multipliers[0]
  if any(m != first for m in a.multipliers):
    raise UnsupportedError(
      'generators must multiply every generator by the same unit'
    )
  return first.exps


def subgroup_rank(gens: Sequence[MonomialAutomorphism]) -> int:
  """Rank of the free abelian group generated by pure multiplications.

  The generators act on a free summand by e^(A_j); a product of powers is the
  identity iff the same integer combination of the A_j vanishes.
  """
  if not gens:
    return 0
  sizes = {g.size for g in gens if isinstance(g, FiniteAutomorphism)}
  ranks = {g.rank for g in gens}
  if len(ranks) != 1 or len(sizes) > 1:
    raise DimensionError('generators act on different modules')
  return lattice_rank([_scalar_exponents(g) for g in gens])


def in_column_span(x: Sequence[GroupRingElem], rel: RingMatrix) -> bool:
  """Whether x is a Q[Z^r]-combination of the columns of rel."""
  if rel.cols == 0:
    return all(v.is_zero for v in x)
  if rel.rank == 1:
    u, d, _ = snf_univariate(rel)
    y = u.apply(list(x))
    diag = d.diagonal()
    for i, yi in enumerate(y):
      di = diag[i] if i < len(diag) else GroupRingElem.zero(1)
      if not divides(di, yi):
        return False
    return True
  if not _monomial_pattern(rel):
    raise UnsupportedRingError(
      'membership over rank > 1 needs one relation entry per row and column'
    )
  for i, xi in enumerate(x):
    if xi.is_zero:
      continue
    entries = [e for e in rel.row(i) if not e.is_zero]
    if not entries or not divides(entries[0], xi):
      return False
  return True


def act_on_homology(
  a: MonomialAutomorphism, h: HomologyPresentation
) -> FiniteAutomorphism:
  """Induced automorphism on Q[Z^r]^n / relations.

  Rejects `a` unless it maps every relation into the relation submodule, then
  drops every multiplier that acts trivially modulo the relations, i.e. with
  (m_i - 1) g_sigma(i) a relation.
  """
  if not isinstance(a, FiniteAutomorphism):
    raise UnsupportedError('only finite automorphisms act on presentations')
  if a.size != h.generators:
    raise DimensionError(
      f'automorphism on {a.size} generators, presentation has {h.generators}'
    )
  if a.rank != h.relations.rank:
    raise DimensionError('automorphism and presentation use different rings')
  mat = a.to_matrix()
  for j in range(h.relations.cols):
    if not in_column_span(mat.apply(list(h.relations.column(j))), h.relations):
      raise NotAChainMapError(
        f'relation {j} is not mapped into the relation submodule', relation=j
      )
  one = Unit.one(a.rank)
  zero = GroupRingElem.zero(a.rank)
  mults = []
  for target, m in zip(a.perm, a.multipliers):
    vec = [zero] * a.size
    vec[target] = m.as_elem() - GroupRingElem.one(a.rank)
    mults.append(one if in_column_span(vec, h.relations) else m)
  return FiniteAutomorphism(a.rank, a.perm, tuple(mults))


# -----------------------
# Higher morphisms
# -----------------------


@dataclass(frozen=True)
class HigherMorphism:
  """Degree (k - 1) morphism of contact homology given by a multiplier in t."""

  degree_shift: int
  multiplier: GroupRingElem
  additive: bool = True

  @property
  def is_zero(self) -> bool:
    return self.multiplier.is_zero

  def __add__(self, other: 'HigherMorphism') -> 'HigherMorphism':
    """eta_k of a concatenated family: multipliers add."""
    if other.degree_shift != self.degree_shift:
      raise DimensionError('cannot add morphisms of different degrees')
    return HigherMorphism(
      self.degree_shift, self.multiplier + other.multiplier, self.additive
    )

  def precompose_degree(self, m: int) -> 'HigherMorphism':
    """Effect of precomposing the sphere family with a degree-m self-map."""
    return HigherMorphism(self.degree_shift, self.multiplier * m, self.additive)


def eta_k(d: int, n: int) -> HigherMorphism:
  """eta_(2n-1) of the SO(2n) sphere family on T^2n x S^(2n-1): multiplication by d t."""
  if n < 2:
    raise DomainError(
      'the marked-point morphism needs n >= 2; n = 1 is the loop case'
    )
  return HigherMorphism(degree_shift=2 * n - 2, multiplier=T * d, additive=True)
