"""JSON encodings of rationals, ring elements, matrices and pipeline results.

Rationals are strings "p/q" (integers as "p"), monomials are integer arrays,
ring elements are sorted [monomial, coefficient] pairs and matrices are
row-major. Decoders exist for everything the CLI reads back: monodromy,
profiles, matrices and automorphisms.
"""

import json
import math
from dataclasses import asdict
from fractions import Fraction
from typing import Any

from .complexes import HomologyPresentation
from .data import ConfigError, DimensionError, Report
from .flow import ShootingResult
from .holonomy import (
  FiniteAutomorphism,
  HigherMorphism,
  MonomialAutomorphism,
  OrderCertificate,
  ShiftAutomorphism,
  Unit,
)
from .lutz import CriticalCensus, CriticalPoint
from .orbits import (
  AngularProfile,
  LinearProfile,
  Monodromy,
  OrbitEnumeration,
  OrbitFamily,
  PiecewiseProfile,
)
from .ring import GroupRingElem, RingMatrix

TWO_PI = 2 * math.pi


class CodecError(ConfigError):
  """Malformed JSON input."""


# -----------------------
# Scalars and ring elements
# -----------------------


def _int(raw: Any, what: str) -> int:
  """An integer field of decoded input."""
  if isinstance(raw, bool):
    raise CodecError(f'{what} must be an integer, got {raw!r}')
  try:
    return int(raw)
  except (TypeError, ValueError) as e:
    raise CodecError(f'{what} must be an integer, got {raw!r}') from e


def encode_rational(q: Fraction | int) -> str:
  """Fraction as "p/q", integers as "p"."""
  return str(Fraction(q))


def decode_rational(raw: Any) -> Fraction:
  """Integer or "p/q" string to Fraction."""
  if isinstance(raw, bool) or not isinstance(raw, (int, str)):
    raise CodecError(f'a rational is an integer or a "p/q" string, got {raw!r}')
  try:
    return Fraction(raw)
  except (ValueError, ZeroDivisionError) as e:
    raise CodecError(f'bad rational {raw!r}') from e


def encode_elem(a: GroupRingElem) -> list[list[Any]]:
  """Ring element as sorted [monomial, coefficient] pairs."""
  return [[list(e), encode_rational(c)] for e, c in a.terms]


def decode_elem(raw: Any, rank: int | None = None) -> GroupRingElem:
  """Sorted pairs, or a bare rational for a constant (needs `rank`)."""
  if isinstance(raw, (int, str)) and not isinstance(raw, bool):
    if rank is None:
      raise CodecError('constant entries need the ring rank')
    return GroupRingElem.constant(rank, decode_rational(raw))
  if not isinstance(raw, list):
    raise CodecError(f'bad ring element {raw!r}')
  if not raw:
    if rank is None:
      raise CodecError('the empty element needs the ring rank')
    return GroupRingElem.zero(rank)
  terms = {}
  for pair in raw:
    if not (isinstance(pair, list) and len(pair) == 2):
      raise CodecError(f'bad term {pair!r}')
    if not isinstance(pair[0], list):
      raise CodecError(f'bad monomial {pair[0]!r}')
    exps = tuple(_int(x, 'an exponent') for x in pair[0])
    if rank is not None and len(exps) != rank:
      raise DimensionError(f'monomial {list(exps)} in a rank {rank} ring')
    terms[exps] = terms.get(exps, Fraction(0)) + decode_rational(pair[1])
  r = rank if rank is not None else len(next(iter(terms)))
  return GroupRingElem.from_mapping(r, terms)


def encode_matrix(m: RingMatrix) -> dict[str, Any]:
  return {
    'rank': m.rank,
    'rows': m.rows,
    'cols': m.cols,
    'entries': [[encode_elem(x) for x in row] for row in m.entries],
  }


def decode_matrix(raw: Any) -> RingMatrix:
  """{"rank": r, "entries": [[elem, ...], ...]}; a bare grid means rank 1."""
  if isinstance(raw, list):
    raw = {'rank': 1, 'entries': raw}
  if not isinstance(raw, dict) or 'entries' not in raw:
    raise CodecError('a matrix is {"rank": r, "entries": [[...], ...]}')
  rank = _int(raw.get('rank', 1), 'rank')
  grid = [[decode_elem(x, rank) for x in row] for row in raw['entries']]
  cols = len(grid[0]) if grid else _int(raw.get('cols', 0), 'cols')
  if any(len(row) != cols for row in grid):
    raise DimensionError('matrix rows have different lengths')
  return RingMatrix(rank, len(grid), cols, tuple(tuple(r) for r in grid))


# -----------------------
# Automorphisms and certificates
# -----------------------


def encode_unit(u: Unit) -> list[Any]:
  return [encode_rational(u.coeff), list(u.exps)]


def decode_unit(raw: Any, rank: int | None = None) -> Unit:
  """[coeff, exponents] to a Unit, checked against rank."""
  if not (isinstance(raw, list) and len(raw) == 2):
    raise CodecError(f'a multiplier is [coeff, exponents], got {raw!r}')
  if not isinstance(raw[1], list):
    raise CodecError(f'bad multiplier exponents {raw[1]!r}')
  exps = tuple(_int(x, 'an exponent') for x in raw[1])
  u = Unit(decode_rational(raw[0]), exps)
  if rank is not None and u.rank != rank:
    raise DimensionError(f'multiplier {raw!r} in a rank {rank} ring')
  return u


def encode_automorphism(a: MonomialAutomorphism) -> dict[str, Any]:
  if isinstance(a, FiniteAutomorphism):
    return {
      'index_set': {'finite': a.size},
      'rank': a.rank,
      'perm': list(a.perm),
      'multipliers': [encode_unit(m) for m in a.multipliers],
    }
  return {
    'index_set': {'shift': a.shift},
    'rank': a.rank,
    'perm': [],
    'multipliers': [encode_unit(a.tail)],
    'exceptions': [[k, encode_unit(u)] for k, u in a.exceptions],
  }


def decode_automorphism(raw: Any) -> MonomialAutomorphism:
  if not isinstance(raw, dict) or 'index_set' not in raw:
    raise CodecError('an automorphism needs an "index_set"')
  mults = raw.get('multipliers') or []
  rank = raw.get('rank')
  if rank is None:
    if not mults:
      raise CodecError('cannot infer the ring rank without multipliers')
    rank = len(decode_unit(mults[0]).exps)
  rank = _int(rank, 'rank')
  units = [decode_unit(m, rank) for m in mults]
  index_set = raw['index_set']
  if 'finite' in index_set:
    return FiniteAutomorphism(
      rank,
      tuple(_int(i, 'a permutation entry') for i in raw.get('perm', [])),
      tuple(units),
    )
  if 'shift' in index_set:
    tail = units[0] if units else Unit.one(rank)
    exceptions = tuple(
      sorted(
        (_int(k, 'an exception index'), decode_unit(u, rank))
        for k, u in raw.get('exceptions', [])
      )
    )
    shift = _int(index_set['shift'], 'the shift')
    return ShiftAutomorphism(rank, shift, tail, exceptions)
  raise CodecError(f'unknown index set {index_set!r}')


def encode_certificate(c: OrderCertificate) -> dict[str, Any]:
  """Finite order, or "infinite" with its witness."""
  if c.finite:
    return {'order': c.order}
  return {'order': 'infinite', 'witness': c.witness}


# -----------------------
# Monodromy, profiles, enumerations
# -----------------------


def decode_monodromy(raw: Any) -> Monodromy:
  """Text "a,b,c,d" or a list [a, b, c, d] to a Monodromy."""
  if isinstance(raw, str):
    raw = raw.replace('[', '').replace(']', '').split(',')
  if not (isinstance(raw, list) and len(raw) == 4):
    raise CodecError(f'monodromy is [a, b, c, d], got {raw!r}')
  return Monodromy.from_list([_int(x, 'a monodromy entry') for x in raw])


def encode_profile(p: AngularProfile) -> dict[str, Any]:
  if isinstance(p, LinearProfile):
    return {
      'linear_n': encode_rational(p.slope),
      'phase': encode_rational(p.phase),
    }
  return {'breakpoints': [list(b) for b in p.breakpoints], 'delta': p.delta}


def decode_profile(raw: Any) -> AngularProfile:
  """{"linear_n": n} or {"breakpoints": ..., "delta": d}."""
  if not isinstance(raw, dict):
    raise CodecError(f'bad profile {raw!r}')
  if 'linear_n' in raw:
    return LinearProfile(
      decode_rational(raw['linear_n']), decode_rational(raw.get('phase', 0))
    )
  if 'breakpoints' in raw:
    pts = tuple((float(a), float(b)) for a, b in raw['breakpoints'])
    delta = float(raw.get('delta', pts[-1][1] - pts[0][1]))
    return PiecewiseProfile(pts, delta)
  raise CodecError('a profile has "linear_n" or "breakpoints"')


def encode_family(f: OrbitFamily) -> dict[str, Any]:
  return {
    'theta': f.theta,
    'turns': None if f.turns is None else encode_rational(f.turns),
    'class': list(f.fiber_class.as_tuple()),
    'index': f.index_label,
    'error': f.error,
  }


def encode_enumeration(e: OrbitEnumeration, window: int = 1) -> dict[str, Any]:
  if e.kind == 'finite':
    return {'kind': 'finite', 'orbits': [encode_family(f) for f in e.families]}
  rule = e.rule
  return {
    'kind': 'shift',
    'rule': {
      'monodromy': rule.monodromy.as_list(),
      'profile': encode_profile(rule.profile),
      'base_class': list(rule.base.as_tuple()),
      'window': [encode_family(f) for f in rule.window(-window, window)],
    },
  }


# -----------------------
# Complexes, morphisms, numerics
# -----------------------


def encode_homology(h: HomologyPresentation) -> dict[str, Any]:
  return {
    'degree': h.degree,
    'generators': h.generators,
    'relations': encode_matrix(h.relations),
    'invariant_factors': None
    if h.normal_form is None
    else [encode_elem(d) for d in h.normal_form],
  }


def encode_morphism(m: HigherMorphism) -> dict[str, Any]:
  return {
    'degree_shift': m.degree_shift,
    'multiplier': encode_elem(m.multiplier),
    'text': str(m.multiplier),
    'additive': m.additive,
  }


def encode_point(p: CriticalPoint) -> dict[str, Any]:
  out = asdict(p)
  out['theta'] = list(p.theta)
  out['kind'] = p.kind.value
  out['hessian_eigs'] = list(p.hessian_eigs)
  return out


def encode_census(c: CriticalCensus, points: bool = False) -> dict[str, Any]:
  out: dict[str, Any] = {
    'epsilon': c.epsilon,
    'page': c.page,
    'maxima': c.maxima,
    'saddles': c.saddles,
    'minima': c.minima,
    'degenerate': c.degenerate,
    'seeds': c.seeds,
    'skipped': c.skipped,
  }
  if points:
    out['points'] = [encode_point(p) for p in c.points]
  return out


def encode_shooting(r: ShootingResult) -> dict[str, Any]:
  out = asdict(r)
  out['class_winding'] = list(r.class_winding)
  return out


# -----------------------
# Reports
# -----------------------


def encode_report(r: Report) -> dict[str, Any]:
  return {
    'command': r.command,
    'inputs': r.inputs,
    'outputs': r.outputs,
    'verdicts': [asdict(v) for v in r.verdicts],
    'passed': r.passed,
  }


def dumps(obj: Any) -> str:
  """Stable JSON text (sorted keys, rationals already strings)."""
  return json.dumps(obj, indent=2, sort_keys=True, default=_fallback)


def _fallback(o: Any) -> Any:
  """json default hook for rationals, ring elements and numpy scalars."""
  if isinstance(o, Fraction):
    return encode_rational(o)
  if isinstance(o, GroupRingElem):
    return encode_elem(o)
  if isinstance(o, tuple):
    return list(o)
  if hasattr(o, 'item'):
    return o.item()
  raise TypeError(f'{type(o).__name__} is not JSON serializable')
