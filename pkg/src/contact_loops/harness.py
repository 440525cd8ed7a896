"""End-to-end pipelines, one per result being reproduced.

Each run_* function chains the library modules, records the intermediate
objects as JSON outputs and finishes with named verdicts. Stage timings and
verdicts go to an optional RunLogger.
"""

import math
import time
from collections.abc import Iterator
from contextlib import contextmanager

from .codec import (
  encode_automorphism,
  encode_census,
  encode_certificate,
  encode_enumeration,
  encode_homology,
  encode_matrix,
  encode_morphism,
  encode_profile,
  encode_shooting,
)
from .complexes import (
  OrbitGeneratorPair,
  build_morse_bott,
  homology,
  torus_betti,
  verify_complex,
)
from .config import Config
from .data import DomainError, Report
from .flow import shoot_seeds
from .grader import check, check_true
from .holonomy import (
  MonomialAutomorphism,
  act_on_homology,
  automorphism_from_loop,
  bundle_automorphism,
  compose,
  eta_k,
  fiber_rotation_loop,
  is_identity,
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
from .lutz import (
  BetaChoice,
  CriticalKind,
  census_gradings,
  critical_census,
  opposite_page_census,
  page_symmetry,
  reeb_t5_direction,
  torus_distance,
  validate_beta,
)
from .orbits import (
  AngularProfile,
  FiberClass,
  Monodromy,
  MonodromyKind,
  classify_monodromy,
  default_profile,
  enumerate_bundle,
  enumerate_t3,
)
from .ring import (
  RingMatrix,
  T,
  divides,
  invariant_factors,
  is_unit,
  snf_univariate,
  specialize,
)
from .runlog import RunLogger, emit

TWO_PI = 2 * math.pi


class _Pipeline:
  """Report under construction plus logging helpers."""

  def __init__(
    self, command: str, inputs: dict, logger: RunLogger | None
  ) -> None:
    self.report = Report(command=command, inputs=inputs)
    self.logger = logger

  @contextmanager
  def stage(self, name: str, **fields) -> Iterator[None]:
    t0 = time.perf_counter()
    yield
    emit(
      self.logger,
      'stage',
      command=self.report.command,
      stage=name,
      elapsed_s=round(time.perf_counter() - t0, 4),
      **fields,
    )

  def out(self, key: str, value) -> None:
    self.report.outputs[key] = value

  def verdict(self, v) -> None:
    self.report.verdicts.append(v)
    emit(
      self.logger,
      'verdict',
      command=self.report.command,
      name=v.name,
      passed=v.passed,
      expected=v.expected,
      actual=v.actual,
    )


def _spot_check_infinite(a: MonomialAutomorphism, count: int) -> bool:
  """a^j != identity for j = 1..count."""
  p = a
  for _ in range(count):
    if is_identity(p):
      return False
    p = compose(a, p)
  return True


# -----------------------
# T^3
# -----------------------


def run_t3(
  n: int,
  cls: FiberClass,
  ring_mode: str = 'quotient',
  config: Config | None = None,
  logger: RunLogger | None = None,
  cross_check: bool = False,
) -> Report:
  """Orbits -> complex -> homology -> loop automorphism -> order certificate."""
  config = config or Config()
  if n < 1:
    raise DomainError(f'n must be >= 1, got {n}')
  if ring_mode not in ('quotient', 'full'):
    raise DomainError(f'ring mode is quotient or full, got {ring_mode!r}')
  pl = _Pipeline(
    't3', {'n': n, 'class': list(cls.as_tuple()), 'ring': ring_mode}, logger
  )

  with pl.stage('orbits'):
    enum = enumerate_t3(n, cls)
  pl.out('orbits', encode_enumeration(enum))
  pl.verdict(check('orbit_count', n, enum.count))
  base = math.atan2(cls.q, cls.p) % TWO_PI
  expected = [(base + TWO_PI * k) / n for k in range(n)]
  pl.verdict(
    check('orbit_angles', expected, [f.theta for f in enum.families], tol=1e-12)
  )

  lattice = t3_lattice(quotient=ring_mode == 'quotient')
  pl.out('coefficient_basis', [f'A_{{{a},{b}}}' for a, b in lattice.basis])
  with pl.stage('complex'):
    pairs = [OrbitGeneratorPair(f.index_label) for f in enum.families]
    cx = build_morse_bott(
      pairs, ring_mode, lattice.rank, lattice.vector('x', 'y')
    )
    ok = verify_complex(cx)
    h = homology(cx, -1)
  pl.verdict(check_true('d_squared_zero', ok))
  pl.out('homology_bottom', encode_homology(h))

  if ring_mode == 'full':
    xy = lattice.basis.index(('x', 'y'))
    spec_rel = RingMatrix(
      1,
      h.relations.rows,
      h.relations.cols,
      tuple(
        tuple(specialize(e, xy) for e in row) for row in h.relations.entries
      ),
    )
    factors = invariant_factors(spec_rel)
    pl.out('invariant_factors', [str(d) for d in factors])
    pl.verdict(
      check('relation_factors', ['1 - t'] * n, [str(d) for d in factors])
    )
  else:
    pl.verdict(check('free_generators', n, h.generators))

  with pl.stage('automorphism'):
    loop = t3_loop(n, lattice)
    aut = automorphism_from_loop(loop)
    cert = order(aut)
    back = automorphism_from_loop(reverse_loop(loop))
  pl.out('automorphism', encode_automorphism(aut))
  pl.out('certificate', encode_certificate(cert))
  pl.verdict(check_true('infinite_cyclic', not cert.finite))
  if not cert.finite:
    pl.verdict(
      check(
        'witness_twist',
        lattice.label(lattice.vector('x', 'theta')),
        lattice.label(cert.witness['twist']),
      )
    )
  pl.verdict(
    check_true(
      'powers_not_identity',
      _spot_check_infinite(aut, config.order_spot_check),
      detail=f'j = 1..{config.order_spot_check}',
    )
  )
  pl.verdict(
    check_true('reverse_loop_inverse', is_identity(compose(aut, back)))
  )

  with pl.stage('homology_action'):
    shift = automorphism_from_loop(translation_loop(n, lattice))
    induced = act_on_homology(shift, h)
    loop_induced = act_on_homology(aut, h)
  pl.out('translation_induced', encode_automorphism(induced))
  pl.verdict(check_true('translation_acts_trivially', is_identity(induced)))
  pl.verdict(
    check_true('loop_action_faithful', not order(loop_induced).finite)
  )

  if cross_check:
    with pl.stage('shooting', seeds=config.shoot_seeds):
      shots = shoot_seeds(
        n, cls, config.shoot_seeds, min(config.tol, 1e-6),
        step=config.flow_step, max_iter=config.shoot_max_iter, logger=logger,
      )
    found = [s.theta_star for s in shots]
    pl.out('shooting', [encode_shooting(s) for s in shots])
    pl.verdict(check('shooting_agrees', expected, found, tol=1e-6))
  return pl.report


# -----------------------
# T^3_A
# -----------------------


def run_bundle(
  A: Monodromy,
  cls: FiberClass,
  profile: AngularProfile | None = None,
  n: int = 1,
  config: Config | None = None,
  logger: RunLogger | None = None,
) -> Report:
  """Classification, enumeration and the automorphism of the zeta_n loop."""
  config = config or Config()
  pl = _Pipeline(
    'bundle',
    {'monodromy': A.as_list(), 'class': list(cls.as_tuple()), 'n': n},
    logger,
  )
  with pl.stage('classify'):
    kind = classify_monodromy(A)
  pl.out('classification', {'kind': kind.kind.value, 'order': kind.order})

  profile = profile or default_profile(A, n)
  pl.out('profile', encode_profile(profile))
  with pl.stage('orbits'):
    enum = enumerate_bundle(A, profile, cls, tol=max(config.tol, 1e-9))
  pl.out('orbits', encode_enumeration(enum))

  with pl.stage('automorphism'):
    aut = bundle_automorphism(enum)
    cert = order(aut)
  kind_name = 'shift' if enum.kind == 'shift' else 'cyclic_with_twist'
  pl.out('automorphism_type', kind_name)
  pl.out('automorphism', encode_automorphism(aut))
  pl.out('certificate', encode_certificate(cert))

  if kind.kind is MonodromyKind.HYPERBOLIC:
    pl.verdict(check('automorphism_type', 'shift', kind_name))
  elif kind.kind is MonodromyKind.ELLIPTIC:
    pl.verdict(check('automorphism_type', 'cyclic_with_twist', kind_name))
  pl.verdict(check_true('infinite_cyclic', not cert.finite))
  pl.verdict(
    check_true(
      'powers_not_identity', _spot_check_infinite(aut, config.order_spot_check)
    )
  )
  return pl.report


# -----------------------
# T^5
# -----------------------


def run_t5(
  epsilon: float,
  summand_rank: int = 8,
  config: Config | None = None,
  logger: RunLogger | None = None,
  opposite: bool = False,
) -> Report:
  """Lutz census, the three loops xi^(i) and the rank of their subgroup."""
  config = config or Config()
  if not 1 <= summand_rank <= 8:
    raise DomainError(f'summand rank must be in 1..8, got {summand_rank}')
  pl = _Pipeline(
    't5',
    {'epsilon': epsilon, 'summand_rank': summand_rank, 'grid': config.grid},
    logger,
  )

  with pl.stage('census', grid=config.grid):
    census = critical_census(
      epsilon, config.grid, config.tol, band=config.seed_band,
      dedup_radius=config.dedup_radius, max_iter=config.newton_max_iter,
      logger=logger,
    )
  pl.out('census', encode_census(census))
  pl.verdict(check('census_counts', [4, 8, 0], list(census.counts)))
  pl.verdict(check('degenerate_points', 0, census.degenerate))
  worst = max((p.gradient_norm for p in census.points), default=0.0)
  pl.verdict(check_true('gradients_below_tol', worst < config.tol,
                        detail=f'max {worst:.3g}'))
  maxima = [p.value for p in census.points if p.kind is CriticalKind.MAXIMUM]
  pl.verdict(
    check('maximum_value', [2 * epsilon**2] * len(maxima), maxima, tol=1e-9)
  )
  gradings = census_gradings(census)
  pl.out('gradings', [[list(p.theta), g] for p, g in gradings])

  if opposite:
    with pl.stage('opposite_page'):
      other = opposite_page_census(
        epsilon, config.grid, config.tol, band=config.seed_band,
        dedup_radius=config.dedup_radius, max_iter=config.newton_max_iter,
        logger=logger,
      )
    pl.out('opposite_census', encode_census(other))
    pl.verdict(
      check('opposite_counts', list(census.counts), list(other.counts))
    )
    matched = all(
      any(torus_distance(page_symmetry(p.theta), q.theta) < 1e-6
          for q in other.points)
      for p in census.points
    )
    pl.verdict(check_true('page_symmetry', matched))

  with pl.stage('reeb_direction'):
    beta = BetaChoice(config.beta_constant, config.beta_density)
    beta_report = validate_beta(beta, epsilon)
    top = next(
      (p for p in census.points if p.kind is CriticalKind.MAXIMUM), None
    )
    if top is not None:
      d = reeb_t5_direction((*top.theta, 0.0, 0.0), epsilon, beta)
      pl.out('reeb_direction_at_maximum', [float(x) for x in d])
      pl.verdict(check('reeb_along_theta4', [0, 0, 0, 1, 0], list(d), tol=1e-6))
  pl.out('beta', beta_report)

  with pl.stage('subgroup'):
    lattice = t5_lattice()
    gens = [
      automorphism_from_loop(t5_loop(i, summand_rank, lattice))
      for i in (1, 2, 3)
    ]
    rank = subgroup_rank(gens)
  pl.out('coefficient_rank', lattice.rank)
  pl.out(
    'generators',
    [lattice.label(g.multipliers[0].exps) for g in gens],
  )
  pl.verdict(check('coefficient_rank', 9, lattice.rank))
  pl.verdict(check('subgroup_rank', 3, rank))
  pl.verdict(
    check_true('generators_infinite', all(not order(g).finite for g in gens))
  )
  return pl.report


# -----------------------
# Higher morphisms and ST*Sigma_g
# -----------------------


def run_stt(
  n: int,
  d: int,
  m: int = 1,
  config: Config | None = None,
  logger: RunLogger | None = None,
) -> Report:
  """Betti table of T^(2n-1) and the marked-point morphism eta_(2n-1)."""
  pl = _Pipeline('stt', {'n': n, 'd': d, 'm': m}, logger)
  with pl.stage('homology'):
    betti = torus_betti(2 * n - 1)
  pl.out('betti', betti)
  pascal = [1]
  for _ in range(2 * n - 1):
    pascal = [a + b for a, b in zip([0] + pascal, pascal + [0])]
  pl.verdict(check('betti_row', pascal, betti))

  with pl.stage('morphism'):
    eta = eta_k(d, n)
    composed = eta.precompose_degree(m)
    doubled = eta + eta
  pl.out('morphism', encode_morphism(eta))
  pl.out('composed', encode_morphism(composed))
  pl.verdict(check('degree_shift', 2 * n - 2, eta.degree_shift))
  pl.verdict(check('multiplier', str(T * d), str(eta.multiplier)))
  pl.verdict(
    check('composition_law', str(T * (m * d)), str(composed.multiplier))
  )
  pl.verdict(check('additivity', str(T * (2 * d)), str(doubled.multiplier)))
  pl.verdict(
    check_true('infinite_order', not eta.is_zero, detail='multiplier d t != 0')
  )
  return pl.report


def run_stsigma(
  intersection: int,
  config: Config | None = None,
  logger: RunLogger | None = None,
) -> Report:
  """Fiber rotation on ST*Sigma_g: multiplication by e^[T]."""
  config = config or Config()
  pl = _Pipeline('stsigma', {'intersection_number': intersection}, logger)
  with pl.stage('automorphism'):
    aut = automorphism_from_loop(fiber_rotation_loop(intersection))
    cert = order(aut)
  pl.out('automorphism', encode_automorphism(aut))
  pl.out('certificate', encode_certificate(cert))
  pl.verdict(check_true('infinite_cyclic', not cert.finite))
  return pl.report


def run_stm(
  n: int,
  intersection: int,
  m: int = 1,
  config: Config | None = None,
  logger: RunLogger | None = None,
) -> Report:
  """Sphere family on ST*M, dim M = 2n, M negatively curved.

  A nontrivial free class holds exactly one closed orbit, so the homology in
  that class is generated by it alone; `intersection` is the pairing of the
  class with a (2n-1)-cycle dual to it. n = 1 is the loop on ST*Sigma_g.
  """
  if n < 1:
    raise DomainError(f'n must be >= 1, got {n}')
  config = config or Config()
  pl = _Pipeline(
    'stm', {'n': n, 'intersection_number': intersection, 'm': m}, logger
  )
  pl.out('generators', 1)
  if n == 1:
    with pl.stage('automorphism'):
      aut = automorphism_from_loop(fiber_rotation_loop(intersection))
      cert = order(aut)
    pl.out('automorphism', encode_automorphism(aut))
    pl.out('certificate', encode_certificate(cert))
    pl.verdict(check('single_generator', 1, aut.size))
    pl.verdict(check_true('infinite_cyclic', not cert.finite))
    return pl.report

  with pl.stage('morphism'):
    eta = eta_k(intersection, n)
    composed = eta.precompose_degree(m)
  pl.out('morphism', encode_morphism(eta))
  pl.out('composed', encode_morphism(composed))
  pl.verdict(check('degree_shift', 2 * n - 2, eta.degree_shift))
  pl.verdict(check('multiplier', str(T * intersection), str(eta.multiplier)))
  pl.verdict(
    check(
      'composition_law', str(T * (m * intersection)), str(composed.multiplier)
    )
  )
  pl.verdict(
    check_true(
      'infinite_order', not eta.is_zero, detail='class pairs nontrivially'
    )
  )
  return pl.report


# -----------------------
# Single-module commands
# -----------------------


def run_snf(m: RingMatrix, logger: RunLogger | None = None) -> Report:
  """Smith form over Q[t, 1/t] with its identities checked."""
  pl = _Pipeline('snf', {'matrix': encode_matrix(m)}, logger)
  with pl.stage('smith'):
    u, d, v = snf_univariate(m)
  pl.out('U', encode_matrix(u))
  pl.out('D', encode_matrix(d))
  pl.out('V', encode_matrix(v))
  pl.out('invariant_factors', [str(x) for x in d.diagonal()])
  pl.verdict(check_true('U_m_V_equals_D', u @ m @ v == d))
  pl.verdict(check_true('U_invertible', is_unit(u.det())[0]))
  pl.verdict(check_true('V_invertible', is_unit(v.det())[0]))
  diag = d.diagonal()
  chain = all(divides(a, b) for a, b in zip(diag, diag[1:]))
  pl.verdict(check_true('divisibility_chain', chain))
  return pl.report


def run_order(
  a: MonomialAutomorphism,
  config: Config | None = None,
  logger: RunLogger | None = None,
) -> Report:
  """Order certificate, checked against powering."""
  config = config or Config()
  pl = _Pipeline('order', {'automorphism': encode_automorphism(a)}, logger)
  with pl.stage('certificate'):
    cert = order(a)
  pl.out('certificate', encode_certificate(cert))
  if cert.finite:
    smaller = [j for j in range(1, cert.order) if is_identity(power(a, j))]
    at_order = is_identity(power(a, cert.order))
    pl.verdict(check_true('power_is_identity', at_order))
    pl.verdict(check('no_smaller_power', [], smaller))
  else:
    pl.verdict(
      check_true(
        'powers_not_identity',
        _spot_check_infinite(a, config.order_spot_check),
      )
    )
  return pl.report


def run_lutz(
  epsilon: float,
  config: Config | None = None,
  logger: RunLogger | None = None,
  dump_points: bool = False,
) -> Report:
  config = config or Config()
  pl = _Pipeline(
    'lutz-critical',
    {'epsilon': epsilon, 'grid': config.grid, 'tol': config.tol},
    logger,
  )
  with pl.stage('census', grid=config.grid):
    census = critical_census(
      epsilon, config.grid, config.tol, band=config.seed_band,
      dedup_radius=config.dedup_radius, max_iter=config.newton_max_iter,
      logger=logger,
    )
  pl.out('census', encode_census(census, points=dump_points))
  pl.verdict(check('census_counts', [4, 8, 0], list(census.counts)))
  return pl.report


def run_shoot(
  n: int,
  cls: FiberClass,
  config: Config | None = None,
  logger: RunLogger | None = None,
) -> Report:
  """Shooting from uniform seeds compared with the exact enumeration."""
  config = config or Config()
  pl = _Pipeline(
    'shoot',
    {'n': n, 'class': list(cls.as_tuple()), 'seeds': config.shoot_seeds},
    logger,
  )
  with pl.stage('shooting', seeds=config.shoot_seeds):
    shots = shoot_seeds(
      n, cls, config.shoot_seeds, min(config.tol, 1e-6),
      step=config.flow_step, max_iter=config.shoot_max_iter, logger=logger,
    )
  pl.out('results', [encode_shooting(s) for s in shots])
  exact = [f.theta for f in enumerate_t3(n, cls).families]
  pl.verdict(check('orbit_count', len(exact), len(shots)))
  pl.verdict(
    check('angles_match', exact, [s.theta_star for s in shots], tol=1e-6)
  )
  return pl.report


def run_all(
  config: Config | None = None, logger: RunLogger | None = None
) -> list[Report]:
  """Every reproduction with default arguments."""
  config = config or Config()
  reports = []
  for n in range(1, 7):
    reports.append(run_t3(n, FiberClass(1, 0), 'quotient', config, logger))
    reports.append(run_t3(n, FiberClass(1, 0), 'full', config, logger))
  for a, cls in (
    ([0, -1, 1, 0], FiberClass(1, 0)),
    ([1, 1, 0, 1], FiberClass(1, 0)),
    ([1, 1, 0, 1], FiberClass(0, 1)),
    ([2, 1, 1, 1], FiberClass(1, 0)),
  ):
    reports.append(run_bundle(Monodromy.from_list(a), cls, config=config,
                              logger=logger))
  reports.append(run_t5(config.epsilon, 8, config, logger))
  for n, d in ((2, 1), (3, 2)):
    reports.append(run_stt(n, d, 3, config, logger))
  reports.append(run_stsigma(1, config, logger))
  reports.append(run_stm(2, 1, 1, config, logger))
  return reports

