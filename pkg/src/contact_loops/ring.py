"""Exact arithmetic in the group ring Q[Z^r].

Elements are Laurent polynomials in r commuting variables with rational
coefficients. For r = 1 the ring Q[t, 1/t] is Euclidean (degree = Newton span)
and this module computes Smith normal forms over it. Multivariate matrices get
arithmetic, determinants and single-divisor exact division only.
"""

import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .data import DimensionError, DomainError, UnsupportedRingError

Monomial = tuple[int, ...]
Scalar = int | Fraction


def _as_fraction(c: Scalar | str) -> Fraction:
  return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True)
class GroupRingElem:
  """Element of Q[Z^rank], stored as sorted (monomial, coefficient) terms.

  The term tuple is canonical (sorted, no zero coefficients), so dataclass
  equality and hashing are ring equality.
  """

  rank: int
  terms: tuple[tuple[Monomial, Fraction], ...] = ()

  def __post_init__(self) -> None:
    for exps, coeff in self.terms:
      if len(exps) != self.rank:
        raise DimensionError(
          f'monomial {exps} has length {len(exps)}, ring rank is {self.rank}'
        )
      if coeff == 0:
        raise ValueError('stored coefficient must be nonzero')

  # ---------- Constructors ----------

  @classmethod
  def from_mapping(
    cls, rank: int, mapping: Mapping[Monomial, Scalar]
  ) -> 'GroupRingElem':
    """Build from a monomial -> coefficient map, pruning zeros."""
    terms = sorted(
      (tuple(int(e) for e in exps), _as_fraction(c))
      for exps, c in mapping.items()
      if c != 0
    )
    return cls(rank, tuple(terms))

  @classmethod
  def from_terms(
    cls, rank: int, terms: Iterable[tuple[Sequence[int], Scalar]]
  ) -> 'GroupRingElem':
    """Build from (exponents, coefficient) pairs; like terms are summed."""
    acc: dict[Monomial, Fraction] = {}
    for exps, c in terms:
      key = tuple(int(e) for e in exps)
      acc[key] = acc.get(key, Fraction(0)) + _as_fraction(c)
    return cls.from_mapping(rank, acc)

  @classmethod
  def zero(cls, rank: int) -> 'GroupRingElem':
    return cls(rank, ())

  @classmethod
  def constant(cls, rank: int, c: Scalar) -> 'GroupRingElem':
    return cls.from_mapping(rank, {(0,) * rank: c})

  @classmethod
  def one(cls, rank: int) -> 'GroupRingElem':
    return cls.constant(rank, 1)

  @classmethod
  def monomial(cls, exps: Sequence[int], coeff: Scalar = 1) -> 'GroupRingElem':
    """q * e^A for the exponent vector A."""
    return cls.from_mapping(len(exps), {tuple(exps): coeff})

  # ---------- Queries ----------

  @property
  def is_zero(self) -> bool:
    return not self.terms

  def as_dict(self) -> dict[Monomial, Fraction]:
    return dict(self.terms)

  def coefficient(self, exps: Sequence[int]) -> Fraction:
    return self.as_dict().get(tuple(exps), Fraction(0))

  @property
  def low(self) -> int:
    """Lowest exponent of a univariate element."""
    _require_univariate(self)
    return self.terms[0][0][0]

  @property
  def high(self) -> int:
    """Highest exponent of a univariate element."""
    _require_univariate(self)
    return self.terms[-1][0][0]

  @property
  def span(self) -> int:
    """Newton span max - min exponent; the Euclidean degree on Q[t, 1/t]."""
    if self.is_zero:
      raise ValueError('span of zero is undefined')
    return self.high - self.low

  # ---------- Arithmetic ----------

  def _coerce(self, other: object) -> 'GroupRingElem':
    if isinstance(other, GroupRingElem):
      if other.rank != self.rank:
        raise DimensionError(
          f'ring rank mismatch: {self.rank} vs {other.rank}'
        )
      return other
    if isinstance(other, (int, Fraction)):
      return GroupRingElem.constant(self.rank, other)
    return NotImplemented  # type: ignore[return-value]

  def __add__(self, other: object) -> 'GroupRingElem':
    other = self._coerce(other)
    if other is NotImplemented:
      return NotImplemented
    acc = self.as_dict()
    for exps, c in other.terms:
      acc[exps] = acc.get(exps, Fraction(0)) + c
    return GroupRingElem.from_mapping(self.rank, acc)

  __radd__ = __add__

  def __neg__(self) -> 'GroupRingElem':
    return GroupRingElem(self.rank, tuple((e, -c) for e, c in self.terms))

  def __sub__(self, other: object) -> 'GroupRingElem':
    other = self._coerce(other)
    if other is NotImplemented:
      return NotImplemented
    return self + (-other)

  def __rsub__(self, other: object) -> 'GroupRingElem':
    return (-self) + other

  def __mul__(self, other: object) -> 'GroupRingElem':
    other = self._coerce(other)
    if other is NotImplemented:
      return NotImplemented
    acc: dict[Monomial, Fraction] = {}
    for (ea, ca), (eb, cb) in itertools.product(self.terms, other.terms):
      key = tuple(x + y for x, y in zip(ea, eb))
      acc[key] = acc.get(key, Fraction(0)) + ca * cb
    return GroupRingElem.from_mapping(self.rank, acc)

  __rmul__ = __mul__

  def __pow__(self, k: int) -> 'GroupRingElem':
    if k < 0:
      ok, inv = is_unit(self)
      if not ok:
        raise ValueError('negative power of a non-unit')
      return inv**-k
    out = GroupRingElem.one(self.rank)
    for _ in range(k):
      out = out * self
    return out

  def shift(self, exps: Sequence[int]) -> 'GroupRingElem':
    """Multiply by the monomial e^exps."""
    return GroupRingElem(
      self.rank,
      tuple(
        (tuple(x + y for x, y in zip(e, exps)), c) for e, c in self.terms
      ),
    )

  def __str__(self) -> str:
    if self.is_zero:
      return '0'
    parts = []
    for exps, c in self.terms:
      mono = _format_monomial(exps)
      if mono == '1':
        body = str(abs(c))
      elif abs(c) == 1:
        body = mono
      else:
        body = f'{abs(c)}*{mono}'
      sign = '-' if c < 0 else '+'
      parts.append((sign, body))
    first_sign, first = parts[0]
    out = ('-' if first_sign == '-' else '') + first
    for sign, body in parts[1:]:
      out += f' {sign} {body}'
    return out


def _format_monomial(exps: Monomial) -> str:
  if all(e == 0 for e in exps):
    return '1'
  if len(exps) == 1:
    return 't' if exps[0] == 1 else f't^{exps[0]}'
  return 'e^(' + ','.join(str(e) for e in exps) + ')'


def _require_univariate(*elems: GroupRingElem) -> None:
  for a in elems:
    if a.rank != 1:
      raise UnsupportedRingError(
        f'operation needs Q[t, 1/t] (rank 1), got rank {a.rank}'
      )


def laurent(coeffs: Mapping[int, Scalar]) -> GroupRingElem:
  """Univariate element from an exponent -> coefficient map, e.g. {0: 1, 1: -1}."""
  return GroupRingElem.from_mapping(1, {(e,): c for e, c in coeffs.items()})


T = laurent({1: 1})


def ring_add(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
  return a + b


def ring_mul(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
  return a * b


def is_unit(a: GroupRingElem) -> tuple[bool, GroupRingElem | None]:
  """Return (True, q^-1 e^-A) when a = q e^A with q != 0, else (False, None)."""
  if len(a.terms) != 1:
    return False, None
  exps, c = a.terms[0]
  return True, GroupRingElem.monomial(tuple(-e for e in exps), 1 / c)


# -----------------------
# Division
# -----------------------


def laurent_divmod(
  a: GroupRingElem, b: GroupRingElem
) -> tuple[GroupRingElem, GroupRingElem]:
  """Euclidean division on Q[t, 1/t]: a = q b + r with r = 0 or span(r) < span(b)."""
  _require_univariate(a, b)
  if b.is_zero:
    raise ZeroDivisionError('division by zero in Q[t, 1/t]')
  if a.is_zero:
    return GroupRingElem.zero(1), GroupRingElem.zero(1)
  la, lb = a.low, b.low
  rem = {e[0] - la: c for e, c in a.terms}
  pb = {e[0] - lb: c for e, c in b.terms}
  deg_b = max(pb)
  lead_b = pb[deg_b]
  quo: dict[int, Fraction] = {}
  while rem and max(rem) >= deg_b:
    d = max(rem)
    c = rem[d] / lead_b
    quo[d - deg_b] = quo.get(d - deg_b, Fraction(0)) + c
    for e, cb in pb.items():
      k = e + d - deg_b
      v = rem.get(k, Fraction(0)) - c * cb
      if v:
        rem[k] = v
      else:
        rem.pop(k, None)
  q = laurent({e + la - lb: c for e, c in quo.items()})
  r = laurent({e + la: c for e, c in rem.items()})
  return q, r


def divide_exact(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem | None:
  """Return a / b when b divides a in Q[Z^r], else None.

  A single polynomial is a Groebner basis of the ideal it generates, so the
  lex division algorithm decides membership. Both operands are first shifted
  so every variable has minimal exponent 0; then b has no monomial factor and
  Laurent divisibility equals polynomial divisibility.
  """
  other = a._coerce(b)
  if b.is_zero:
    raise ZeroDivisionError('division by zero')
  if a.is_zero:
    return GroupRingElem.zero(a.rank)
  lo_a = tuple(min(col) for col in zip(*(e for e, _ in a.terms)))
  lo_b = tuple(min(col) for col in zip(*(e for e, _ in other.terms)))
  rem = {tuple(x - y for x, y in zip(e, lo_a)): c for e, c in a.terms}
  pb = {tuple(x - y for x, y in zip(e, lo_b)): c for e, c in other.terms}
  lt_b = max(pb)
  cb = pb[lt_b]
  quo: dict[Monomial, Fraction] = {}
  while rem:
    lt = max(rem)
    diff = tuple(x - y for x, y in zip(lt, lt_b))
    if any(d < 0 for d in diff):
      return None
    c = rem[lt] / cb
    quo[diff] = quo.get(diff, Fraction(0)) + c
    for e, ce in pb.items():
      k = tuple(x + y for x, y in zip(e, diff))
      v = rem.get(k, Fraction(0)) - c * ce
      if v:
        rem[k] = v
      else:
        rem.pop(k, None)
  offset = tuple(x - y for x, y in zip(lo_a, lo_b))
  return GroupRingElem.from_mapping(a.rank, quo).shift(offset)


def divides(b: GroupRingElem, a: GroupRingElem) -> bool:
  """True iff b | a."""
  if b.is_zero:
    return a.is_zero
  if a.rank == 1:
    return laurent_divmod(a, b)[1].is_zero
  return divide_exact(a, b) is not None


def specialize(a: GroupRingElem, variable: int) -> GroupRingElem:
  """Ring map Q[Z^r] -> Q[t, 1/t] sending variable -> t and the others -> 1."""
  if not 0 <= variable < a.rank:
    raise DimensionError(f'variable {variable} outside rank {a.rank}')
  return GroupRingElem.from_terms(1, (((e[variable],), c) for e, c in a.terms))


def normalize_unit(a: GroupRingElem) -> GroupRingElem:
  """Unit u with u*a having lowest exponent 0 and lowest coefficient 1."""
  _require_univariate(a)
  exps, c = a.terms[0]
  return GroupRingElem.monomial((-exps[0],), 1 / c)


# -----------------------
# Matrices
# -----------------------


@dataclass(frozen=True)
class RingMatrix:
  """Dense rows x cols matrix over Q[Z^rank]."""

  rank: int
  rows: int
  cols: int
  entries: tuple[tuple[GroupRingElem, ...], ...] = field(repr=False)

  def __post_init__(self) -> None:
    if len(self.entries) != self.rows or any(
      len(r) != self.cols for r in self.entries
    ):
      raise DimensionError(
        f'entries grid does not match declared shape {self.rows}x{self.cols}'
      )
    for row in self.entries:
      for x in row:
        if x.rank != self.rank:
          raise DimensionError(
            f'entry over rank {x.rank} in a rank {self.rank} matrix'
          )

  @classmethod
  def from_rows(
    cls, rank: int, rows: Sequence[Sequence[GroupRingElem | Scalar]],
    cols: int | None = None,
  ) -> 'RingMatrix':
    grid = tuple(
      tuple(
        x if isinstance(x, GroupRingElem) else GroupRingElem.constant(rank, x)
        for x in row
      )
      for row in rows
    )
    ncols = cols if cols is not None else (len(grid[0]) if grid else 0)
    return cls(rank, len(grid), ncols, grid)

  @classmethod
  def zeros(cls, rank: int, rows: int, cols: int) -> 'RingMatrix':
    z = GroupRingElem.zero(rank)
    return cls(rank, rows, cols, tuple((z,) * cols for _ in range(rows)))

  @classmethod
  def identity(cls, rank: int, n: int) -> 'RingMatrix':
    return cls.diagonal_of(rank, [GroupRingElem.one(rank)] * n)

  @classmethod
  def diagonal_of(
    cls, rank: int, diag: Sequence[GroupRingElem], rows: int | None = None,
    cols: int | None = None,
  ) -> 'RingMatrix':
    rows = len(diag) if rows is None else rows
    cols = len(diag) if cols is None else cols
    z = GroupRingElem.zero(rank)
    grid = [[z] * cols for _ in range(rows)]
    for i, d in enumerate(diag):
      grid[i][i] = d
    return cls(rank, rows, cols, tuple(tuple(r) for r in grid))

  def __getitem__(self, ij: tuple[int, int]) -> GroupRingElem:
    i, j = ij
    return self.entries[i][j]

  def row(self, i: int) -> tuple[GroupRingElem, ...]:
    return self.entries[i]

  def column(self, j: int) -> tuple[GroupRingElem, ...]:
    return tuple(r[j] for r in self.entries)

  def to_lists(self) -> list[list[GroupRingElem]]:
    return [list(r) for r in self.entries]

  @property
  def is_zero(self) -> bool:
    return all(x.is_zero for r in self.entries for x in r)

  def transpose(self) -> 'RingMatrix':
    return RingMatrix(
      self.rank, self.cols, self.rows,
      tuple(self.column(j) for j in range(self.cols)),
    )

  def diagonal(self) -> list[GroupRingElem]:
    return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

  def _check_rank(self, other: 'RingMatrix') -> None:
    if other.rank != self.rank:
      raise DimensionError(f'ring rank mismatch: {self.rank} vs {other.rank}')

  def __add__(self, other: 'RingMatrix') -> 'RingMatrix':
    self._check_rank(other)
    if (self.rows, self.cols) != (other.rows, other.cols):
      raise DimensionError('matrix shapes differ')
    return RingMatrix(
      self.rank, self.rows, self.cols,
      tuple(
        tuple(x + y for x, y in zip(ra, rb))
        for ra, rb in zip(self.entries, other.entries)
      ),
    )

  def __sub__(self, other: 'RingMatrix') -> 'RingMatrix':
    return self + other.scale(GroupRingElem.constant(self.rank, -1))

  def scale(self, c: GroupRingElem) -> 'RingMatrix':
    return RingMatrix(
      self.rank, self.rows, self.cols,
      tuple(tuple(c * x for x in r) for r in self.entries),
    )

  def __matmul__(self, other: 'RingMatrix') -> 'RingMatrix':
    self._check_rank(other)
    if self.cols != other.rows:
      raise DimensionError(
        f'cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}'
      )
    z = GroupRingElem.zero(self.rank)
    out = []
    for i in range(self.rows):
      row = []
      for j in range(other.cols):
        acc = z
        for k in range(self.cols):
          a = self.entries[i][k]
          if a.is_zero:
            continue
          b = other.entries[k][j]
          if not b.is_zero:
            acc = acc + a * b
        row.append(acc)
      out.append(tuple(row))
    return RingMatrix(self.rank, self.rows, other.cols, tuple(out))

  def apply(self, vec: Sequence[GroupRingElem]) -> list[GroupRingElem]:
    """Matrix times column vector."""
    if len(vec) != self.cols:
      raise DimensionError('vector length does not match matrix columns')
    z = GroupRingElem.zero(self.rank)
    out = []
    for r in self.entries:
      acc = z
      for a, b in zip(r, vec):
        if not a.is_zero and not b.is_zero:
          acc = acc + a * b
      out.append(acc)
    return out

  def det(self) -> GroupRingElem:
    """Determinant by Laplace expansion along the sparsest row."""
    if self.rows != self.cols:
      raise DimensionError('determinant of a non-square matrix')
    return _det(self.to_lists(), self.rank)


def _det(m: list[list[GroupRingElem]], rank: int) -> GroupRingElem:
  n = len(m)
  if n == 0:
    return GroupRingElem.one(rank)
  if n == 1:
    return m[0][0]
  i = min(range(n), key=lambda r: sum(not x.is_zero for x in m[r]))
  acc = GroupRingElem.zero(rank)
  for j, x in enumerate(m[i]):
    if x.is_zero:
      continue
    minor = [row[:j] + row[j + 1 :] for k, row in enumerate(m) if k != i]
    term = x * _det(minor, rank)
    acc = acc + term if (i + j) % 2 == 0 else acc - term
  return acc


# -----------------------
# Smith normal form over Q[t, 1/t]
# -----------------------


@dataclass
class _SmithState:
  """Working copies: U A V = D is maintained along with V^-1."""

  a: list[list[GroupRingElem]]
  u: list[list[GroupRingElem]]
  v: list[list[GroupRingElem]]
  v_inv: list[list[GroupRingElem]]

  def row_add(self, i: int, j: int, q: GroupRingElem) -> None:
    """row_i += q row_j."""
    for m in (self.a, self.u):
      m[i] = [x + q * y for x, y in zip(m[i], m[j])]

  def row_swap(self, i: int, j: int) -> None:
    for m in (self.a, self.u):
      m[i], m[j] = m[j], m[i]

  def row_scale(self, i: int, c: GroupRingElem) -> None:
    """row_i *= c for a unit c."""
    for m in (self.a, self.u):
      m[i] = [c * x for x in m[i]]

  def col_add(self, i: int, j: int, q: GroupRingElem) -> None:
    """col_i += q col_j; V^-1 gets row_j -= q row_i."""
    for m in (self.a, self.v):
      for r in m:
        r[i] = r[i] + q * r[j]
    self.v_inv[j] = [
      x - q * y for x, y in zip(self.v_inv[j], self.v_inv[i])
    ]

  def col_swap(self, i: int, j: int) -> None:
    for m in (self.a, self.v):
      for r in m:
        r[i], r[j] = r[j], r[i]
    self.v_inv[i], self.v_inv[j] = self.v_inv[j], self.v_inv[i]

  def col_scale(self, j: int, c: Fraction) -> None:
    """col_j *= c for a nonzero rational c; V^-1 gets row_j /= c."""
    k = GroupRingElem.constant(1, c)
    for m in (self.a, self.v):
      for r in m:
        r[j] = k * r[j]
    inv = GroupRingElem.constant(1, 1 / c)
    self.v_inv[j] = [inv * x for x in self.v_inv[j]]

  def make_row_primitive(self, i: int) -> None:
    c = _content(self.a[i])
    if c != 1:
      self.row_scale(i, GroupRingElem.constant(1, 1 / c))

  def make_col_primitive(self, j: int) -> None:
    c = _content(r[j] for r in self.a)
    if c != 1:
      self.col_scale(j, 1 / c)


def _content(xs: Iterable[GroupRingElem]) -> Fraction:
  """gcd of numerators over lcm of denominators of every coefficient."""
  nums, dens = [], []
  for x in xs:
    for _, c in x.terms:
      nums.append(c.numerator)
      dens.append(c.denominator)
  if not nums:
    return Fraction(1)
  return Fraction(math.gcd(*nums), math.lcm(*dens))


def _choose_pivot(
  a: list[list[GroupRingElem]], t: int
) -> tuple[int, int] | None:
  """Nonzero entry of a[t:, t:] with minimal (span, row, col)."""
  best = None
  for i in range(t, len(a)):
    for j in range(t, len(a[i])):
      x = a[i][j]
      if x.is_zero:
        continue
      key = (x.span, i, j)
      if best is None or key < best:
        best = key
  return None if best is None else (best[1], best[2])


def _place_pivot(st: _SmithState, t: int) -> bool:
  """Move the minimal-span entry of the block to (t, t) and make it monic."""
  pivot = _choose_pivot(st.a, t)
  if pivot is None:
    return False
  i, j = pivot
  if i != t:
    st.row_swap(i, t)
  if j != t:
    st.col_swap(j, t)
  _, lead = st.a[t][t].terms[-1]
  if lead != 1:
    st.row_scale(t, GroupRingElem.constant(1, 1 / lead))
  return True


def _reduce_pivot(st: _SmithState, t: int) -> None:
  """Clear row and column t and make a[t][t] divide the trailing block.

  Every sweep divides by the current pivot and leaves remainders of smaller
  span, so re-picking the minimal-span entry of the whole block strictly
  lowers the pivot span until row and column t are clear. Rows and columns
  touched by a sweep are made primitive to keep the rational coefficients
  from compounding.
  """
  a = st.a
  rows, cols = len(a), len(a[0])
  while True:
    for i in range(t + 1, rows):
      if a[i][t].is_zero:
        continue
      q, _ = laurent_divmod(a[i][t], a[t][t])
      st.row_add(i, t, -q)
      st.make_row_primitive(i)
    for j in range(t + 1, cols):
      if a[t][j].is_zero:
        continue
      q, _ = laurent_divmod(a[t][j], a[t][t])
      st.col_add(j, t, -q)
      st.make_col_primitive(j)
    clear = all(a[i][t].is_zero for i in range(t + 1, rows)) and all(
      a[t][j].is_zero for j in range(t + 1, cols)
    )
    if not clear:
      _place_pivot(st, t)
      continue
    bad = next(
      (
        i
        for i in range(t + 1, rows)
        for j in range(t + 1, cols)
        if not divides(a[t][t], a[i][j])
      ),
      None,
    )
    if bad is None:
      return
    st.row_add(t, bad, GroupRingElem.one(1))


def _smith(
  m: RingMatrix,
) -> tuple[RingMatrix, RingMatrix, RingMatrix, RingMatrix]:
  if m.rank != 1:
    raise UnsupportedRingError(
      f'Smith normal form needs Q[t, 1/t] (rank 1), got rank {m.rank}'
    )
  st = _SmithState(
    m.to_lists(),
    RingMatrix.identity(1, m.rows).to_lists(),
    RingMatrix.identity(1, m.cols).to_lists(),
    RingMatrix.identity(1, m.cols).to_lists(),
  )
  t = 0
  while t < min(m.rows, m.cols) and _place_pivot(st, t):
    _reduce_pivot(st, t)
    st.row_scale(t, normalize_unit(st.a[t][t]))
    t += 1

  def pack(grid: list[list[GroupRingElem]], r: int, c: int) -> RingMatrix:
    return RingMatrix(1, r, c, tuple(tuple(row) for row in grid))

  return (
    pack(st.u, m.rows, m.rows),
    pack(st.a, m.rows, m.cols),
    pack(st.v, m.cols, m.cols),
    pack(st.v_inv, m.cols, m.cols),
  )


def snf_univariate(m: RingMatrix) -> tuple[RingMatrix, RingMatrix, RingMatrix]:
  """Smith normal form U m V = D over Q[t, 1/t].

  Pivots are chosen by minimal Newton span with a (row, col) tie-break, so the
  output is deterministic. Nonzero diagonal entries are normalized to lowest
  exponent 0 and lowest coefficient 1 (1 - t stays 1 - t); d_i | d_(i+1).
  """
  u, d, v, _ = _smith(m)
  return u, d, v


def invariant_factors(m: RingMatrix) -> list[GroupRingElem]:
  """Diagonal of the Smith form, padded with zeros to the row count."""
  _, d, _ = snf_univariate(m)
  diag = d.diagonal()
  return diag + [GroupRingElem.zero(1)] * (m.rows - len(diag))


# -----------------------
# Coordinate lattices H_2(T^k) / R
# -----------------------


@dataclass(frozen=True)
class H2Lattice:
  """H_2(T^k, Z) modulo coordinate 2-tori, with basis A_{i,j}, i < j.

  `relations` lists coordinate pairs whose torus class is killed; the quotient
  of a free lattice by basis vectors is again free on the remaining ones.
  """

  coords: tuple[str, ...]
  relations: tuple[tuple[str, str], ...] = ()

  def __post_init__(self) -> None:
    for a, b in self.relations:
      if a not in self.coords or b not in self.coords or a == b:
        raise DomainError(
          f'relation torus ({a}, {b}) is not a coordinate torus'
        )

  @property
  def _killed(self) -> set[tuple[int, int]]:
    idx = {c: k for k, c in enumerate(self.coords)}
    return {tuple(sorted((idx[a], idx[b]))) for a, b in self.relations}

  @property
  def basis(self) -> list[tuple[str, str]]:
    killed = self._killed
    n = len(self.coords)
    return [
      (self.coords[i], self.coords[j])
      for i, j in itertools.combinations(range(n), 2)
      if (i, j) not in killed
    ]

  @property
  def rank(self) -> int:
    return len(self.basis)

  def vector(self, a: str, b: str) -> Monomial:
    """Exponent vector of A_{a,b}; A_{b,a} = -A_{a,b}; killed tori give 0."""
    if a == b:
      raise DomainError('a coordinate torus needs two distinct coordinates')
    ia, ib = self.coords.index(a), self.coords.index(b)
    sign = 1 if ia < ib else -1
    key = (a, b) if ia < ib else (b, a)
    out = [0] * self.rank
    if key in self.basis:
      out[self.basis.index(key)] = sign
    return tuple(out)

  def monomial(self, a: str, b: str) -> GroupRingElem:
    return GroupRingElem.monomial(self.vector(a, b))

  def label(self, exps: Sequence[int]) -> str:
    """Human-readable class, e.g. 'A_{x,theta}' or '2A_{1,4} - A_{2,4}'."""
    parts = []
    for (a, b), e in zip(self.basis, exps):
      if e == 0:
        continue
      coeff = '' if abs(e) == 1 else str(abs(e))
      sign = '-' if e < 0 else '+'
      parts.append((sign, f'{coeff}A_{{{a},{b}}}'))
    if not parts:
      return '0'
    out = ('-' if parts[0][0] == '-' else '') + parts[0][1]
    for sign, body in parts[1:]:
      out += f' {sign} {body}'
    return out

