"""Rendering of pipeline reports.

Reports go out as JSON or as Markdown tables (pandas + tabulate, GitHub
format), and can be written as report_{name}.json / report_{name}.md.
"""

import json
import os
from collections.abc import Sequence
from typing import Any

import pandas as pd
from tabulate import tabulate

from .codec import dumps, encode_report
from .data import Report
from .grader import Metrics, aggregate


def _cell(v: Any) -> str:
  """Table cell text; containers as compact JSON."""
  if isinstance(v, (dict, list)):
    return json.dumps(v, default=str)
  return str(v)


def verdict_frame(report: Report) -> pd.DataFrame:
  """One row per verdict."""
  return pd.DataFrame(
    [
      {
        'verdict': v.name,
        'passed': '✅' if v.passed else '❌',
        'expected': _cell(v.expected),
        'actual': _cell(v.actual),
        'detail': v.detail,
      }
      for v in report.verdicts
    ],
    columns=['verdict', 'passed', 'expected', 'actual', 'detail'],
  )


def _scalar_outputs(outputs: dict[str, Any]) -> pd.DataFrame:
  """Outputs short enough to print inline."""
  rows = [
    {'output': k, 'value': _cell(v)}
    for k, v in outputs.items()
    if not isinstance(v, (dict, list)) or len(json.dumps(v, default=str)) < 80
  ]
  return pd.DataFrame(rows, columns=['output', 'value'])


def render_markdown(report: Report) -> str:
  """Human-readable report: inputs line, small outputs, verdict table."""
  lines = [f'# {report.command}\n']
  inputs = ', '.join(f'{k}={_cell(v)}' for k, v in report.inputs.items())
  lines.append(f'**Inputs:** {inputs or "-"}  ')
  status = 'PASS' if report.passed else 'FAIL'
  lines.append(f'**Status:** {status}\n')
  outputs = _scalar_outputs(report.outputs)
  if not outputs.empty:
    lines.append('## Outputs\n')
    lines.append(outputs.to_markdown(index=False))
    lines.append('')
  lines.append('## Verdicts\n')
  frame = verdict_frame(report)
  if frame.empty:
    lines.append('(no verdicts)')
  else:
    lines.append(frame.to_markdown(index=False))
  return '\n'.join(lines) + '\n'


def render_table(rows: Sequence[dict[str, Any]], floatfmt: str = '.6g') -> str:
  """GitHub table of homogeneous rows."""
  if not rows:
    return '(empty)'
  return tabulate(
    pd.DataFrame(rows), headers='keys', tablefmt='github', showindex=False,
    floatfmt=floatfmt,
  )


def render_summary(reports: Sequence[Report]) -> str:
  """Pass/fail counts across several reports."""
  metrics: Metrics = aggregate(reports)
  df = pd.DataFrame(
    [
      {'command': cmd, 'passed': c['passed'], 'failed': c['failed']}
      for cmd, c in metrics.by_command.items()
    ],
    columns=['command', 'passed', 'failed'],
  )
  head = (
    f'**Verdicts:** {metrics.passed}/{metrics.verdicts} passed '
    f'across {metrics.reports} reports\n'
  )
  return head + '\n' + tabulate(
    df, headers='keys', tablefmt='github', showindex=False
  ) + '\n'


def render_json(report: Report | Sequence[Report]) -> str:
  """Stable JSON for one report or a list of them."""
  if isinstance(report, Report):
    return dumps(encode_report(report))
  return dumps([encode_report(r) for r in report])


def write_report(
  report: Report, out_dir: str, name: str | None = None
) -> list[str]:
  """Write report_{name}.json and report_{name}.md; returns the paths."""
  name = name or report.command
  os.makedirs(out_dir, exist_ok=True)
  json_path = os.path.join(out_dir, f'report_{name}.json')
  md_path = os.path.join(out_dir, f'report_{name}.md')
  with open(json_path, 'w', encoding='utf-8') as f:
    f.write(render_json(report) + '\n')
  with open(md_path, 'w', encoding='utf-8') as f:
    f.write(render_markdown(report))
  return [json_path, md_path]
