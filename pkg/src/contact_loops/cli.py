"""contact-loops command-line interface.

Every pipeline is a subcommand that prints a report (Markdown tables by
default, JSON with --json). Exit status: 0 when every verdict passes, 1 when
a verdict fails, 2 on invalid input.
"""

import argparse
import json
import os
import sys
from collections.abc import Sequence
from typing import Any

from .codec import CodecError, decode_automorphism, decode_matrix
from .codec import decode_monodromy, decode_profile
from .config import Config, load_config
from .data import ContactLoopsError, Report
from .harness import (
  run_all,
  run_bundle,
  run_lutz,
  run_order,
  run_shoot,
  run_snf,
  run_stm,
  run_stsigma,
  run_stt,
  run_t3,
  run_t5,
)
from .orbits import FiberClass, Monodromy
from .report import render_json, render_markdown, render_summary, write_report
from .runlog import RunLogger


def _fiber_class(text: str) -> FiberClass:
  try:
    return FiberClass.parse(text)
  except ValueError as e:
    raise argparse.ArgumentTypeError(f'bad class {text!r}: {e}') from e


def _monodromy(text: str) -> Monodromy:
  try:
    return decode_monodromy(text)
  except ContactLoopsError as e:
    raise argparse.ArgumentTypeError(str(e)) from e


def _json_arg(text: str) -> Any:
  """Inline JSON, or @path to read it from a file."""
  if text.startswith('@'):
    path = text[1:]
    if not os.path.exists(path):
      raise CodecError(f'input file not found: {path}')
    with open(path, 'r', encoding='utf-8') as f:
      text = f.read()
  try:
    return json.loads(text)
  except json.JSONDecodeError as e:
    raise CodecError(f'input is not valid JSON: {e}') from e


def _config(args: argparse.Namespace) -> Config:
  return load_config(
    args.config,
    overrides={
      'tol': args.tol,
      'epsilon': getattr(args, 'epsilon', None),
      'grid': getattr(args, 'grid', None),
      'shoot_seeds': getattr(args, 'seeds', None),
      'flow_step': getattr(args, 'step', None),
    },
  )


def _logger(args: argparse.Namespace, cfg: Config) -> RunLogger | None:
  if not (args.log or args.verbose):
    return None
  return RunLogger(
    args.log, console=args.verbose, stdout_format=cfg.log_format
  )


def cmd_t3(args, cfg, logger) -> list[Report]:
  """CLI: T^3 orbits, homology and the loop automorphism."""
  return [
    run_t3(
      args.n, args.cls, args.ring, cfg, logger, cross_check=args.cross_check
    )
  ]


def cmd_bundle(args, cfg, logger) -> list[Report]:
  """CLI: torus bundle T^3_A."""
  profile = decode_profile(_json_arg(args.profile)) if args.profile else None
  return [run_bundle(args.monodromy, args.cls, profile, args.n, cfg, logger)]


def cmd_t5(args, cfg, logger) -> list[Report]:
  """CLI: Lutz census and the Z^3 subgroup on T^5."""
  return [run_t5(cfg.epsilon, args.summand_rank, cfg, logger, args.opposite)]


def cmd_stt(args, cfg, logger) -> list[Report]:
  """CLI: marked-point morphism on T^2n x S^(2n-1)."""
  return [run_stt(args.n, args.d, args.m, cfg, logger)]


def cmd_stsigma(args, cfg, logger) -> list[Report]:
  """CLI: fiber rotation on the unit cotangent bundle of a surface."""
  return [run_stsigma(args.intersection, cfg, logger)]


def cmd_stm(args, cfg, logger) -> list[Report]:
  """CLI: sphere family on ST*M over a negatively curved M."""
  return [run_stm(args.n, args.intersection, args.m, cfg, logger)]


def cmd_lutz(args, cfg, logger) -> list[Report]:
  """CLI: critical-point census on one Lutz page."""
  return [run_lutz(cfg.epsilon, cfg, logger, dump_points=args.dump_points)]


def cmd_shoot(args, cfg, logger) -> list[Report]:
  """CLI: closed orbits by shooting."""
  return [run_shoot(args.n, args.cls, cfg, logger)]


def cmd_snf(args, cfg, logger) -> list[Report]:
  """CLI: Smith normal form over Q[t, 1/t]."""
  return [run_snf(decode_matrix(_json_arg(args.matrix)), logger)]


def cmd_order(args, cfg, logger) -> list[Report]:
  """CLI: order certificate of a monomial automorphism."""
  aut = decode_automorphism(_json_arg(args.automorphism))
  return [run_order(aut, cfg, logger)]


def cmd_all(args, cfg, logger) -> list[Report]:
  """CLI: every reproduction with defaults."""
  return run_all(cfg, logger)


def _emit(reports: list[Report], args: argparse.Namespace) -> None:
  if args.json:
    print(render_json(reports[0] if len(reports) == 1 else reports))
  else:
    for r in reports:
      print(render_markdown(r))
    if len(reports) > 1:
      print(render_summary(reports))
  if args.out:
    for i, r in enumerate(reports):
      name = r.command if len(reports) == 1 else f'{i:02d}_{r.command}'
      write_report(r, args.out, name)


def build_parser() -> argparse.ArgumentParser:
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument(
    '--json', action='store_true', help='Print JSON reports'
  )
  common.add_argument(
    '--config', type=str, default=None, help='KEY=VALUE config file'
  )
  common.add_argument(
    '--tol', type=float, default=None, help='Solver tolerance'
  )
  common.add_argument(
    '--out', type=str, default=None, help='Also write report files here'
  )
  common.add_argument('--log', type=str, default=None, help='JSONL log file')
  common.add_argument(
    '--verbose', action='store_true', help='Echo log events to stderr'
  )

  ap = argparse.ArgumentParser(
    prog='cloops', description='Contact homology loops toolkit'
  )
  sub = ap.add_subparsers(dest='cmd', required=True)

  t3 = sub.add_parser('t3', parents=[common], help='Loops on T^3')
  t3.add_argument('--n', type=int, default=1, help='alpha_n index')
  t3.add_argument(
    '--class', dest='cls', type=_fiber_class, default=FiberClass(1, 0),
    help='Fiber class P,Q',
  )
  t3.add_argument(
    '--ring', choices=['quotient', 'full'], default='quotient',
    help='Coefficients modulo A_{x,y} (quotient) or not (full)',
  )
  t3.add_argument(
    '--cross-check', action='store_true', help='Compare with shooting'
  )
  t3.set_defaults(func=cmd_t3)

  b = sub.add_parser('bundle', parents=[common], help='Torus bundles T^3_A')
  b.add_argument(
    '--monodromy', type=_monodromy, required=True,
    help='Monodromy a,b,c,d',
  )
  b.add_argument(
    '--class', dest='cls', type=_fiber_class, default=FiberClass(1, 0),
    help='Fiber class P,Q',
  )
  b.add_argument(
    '--profile', type=str, default=None,
    help='Profile JSON (or @file); a compatible default is used otherwise',
  )
  b.add_argument('--n', type=int, default=1, help='zeta_n index')
  b.set_defaults(func=cmd_bundle)

  t5 = sub.add_parser('t5', parents=[common], help='The Z^3 subgroup on T^5')
  t5.add_argument('--epsilon', type=float, default=None, help='Lutz scale')
  t5.add_argument('--grid', type=int, default=None, help='Seed grid size')
  t5.add_argument(
    '--summand-rank', type=int, default=8, help='Surviving summand rank 1..8'
  )
  t5.add_argument(
    '--opposite', action='store_true', help='Also census the opposite page'
  )
  t5.set_defaults(func=cmd_t5)

  s = sub.add_parser('stt', parents=[common], help='eta_(2n-1) on ST*T^n')
  s.add_argument('--n', type=int, default=2, help='Torus dimension n >= 2')
  s.add_argument('--d', type=int, default=1, help='Degree d of the family')
  s.add_argument('--m', type=int, default=1, help='Precomposition degree m')
  s.set_defaults(func=cmd_stt)

  g = sub.add_parser(
    'stsigma', parents=[common], help='Fiber rotation on ST*Sigma_g'
  )
  g.add_argument(
    '--intersection', type=int, default=1,
    help='Intersection number of a loop with the swept torus',
  )
  g.set_defaults(func=cmd_stsigma)

  sm = sub.add_parser(
    'stm', parents=[common], help='eta_(2n-1) on ST*M, dim M = 2n'
  )
  sm.add_argument('--n', type=int, default=2, help='Half the dimension of M')
  sm.add_argument(
    '--intersection', type=int, default=1,
    help='Intersection number of the class with a dual cycle',
  )
  sm.add_argument('--m', type=int, default=1, help='Precomposition degree m')
  sm.set_defaults(func=cmd_stm)

  lz = sub.add_parser(
    'lutz-critical', parents=[common], help='Critical points on a Lutz page'
  )
  lz.add_argument('--epsilon', type=float, default=None, help='Lutz scale')
  lz.add_argument('--grid', type=int, default=None, help='Seed grid size')
  lz.add_argument(
    '--dump-points', action='store_true', help='Include the point list'
  )
  lz.set_defaults(func=cmd_lutz)

  sh = sub.add_parser('shoot', parents=[common], help='Shoot closed orbits')
  sh.add_argument('--n', type=int, default=1, help='alpha_n index')
  sh.add_argument(
    '--class', dest='cls', type=_fiber_class, default=FiberClass(1, 0),
    help='Fiber class P,Q',
  )
  sh.add_argument('--seeds', type=int, default=None, help='Number of seeds')
  sh.add_argument('--step', type=float, default=None, help='RK4 step')
  sh.set_defaults(func=cmd_shoot)

  sn = sub.add_parser('snf', parents=[common], help='Smith normal form')
  sn.add_argument(
    '--matrix', type=str, required=True, help='Matrix JSON (or @file)'
  )
  sn.set_defaults(func=cmd_snf)

  o = sub.add_parser('order', parents=[common], help='Order certificate')
  o.add_argument(
    '--automorphism', type=str, required=True,
    help='Automorphism JSON (or @file)',
  )
  o.set_defaults(func=cmd_order)

  al = sub.add_parser('all', parents=[common], help='Every reproduction')
  al.set_defaults(func=cmd_all)
  for p in sub.choices.values():
    p.set_defaults(subparser=p)
  return ap


def main(argv: Sequence[str] | None = None) -> int:
  """Entry point for the cloops CLI."""
  ap = build_parser()
  args = ap.parse_args(argv)
  logger = None
  try:
    cfg = _config(args)
    logger = _logger(args, cfg)
    reports = args.func(args, cfg, logger)
  except ContactLoopsError as e:
    args.subparser.print_usage(sys.stderr)
    print(f'{args.subparser.prog}: error: {e}', file=sys.stderr)
    return 2
  finally:
    if logger is not None:
      logger.close()
  _emit(reports, args)
  return 0 if all(r.passed for r in reports) else 1


if __name__ == '__main__':
  sys.exit(main())
