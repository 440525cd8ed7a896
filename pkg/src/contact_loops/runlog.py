"""Run logging for pipelines and solvers.

Writes every event as a JSON line to an optional file and echoes it to the
console, as a pretty one-liner on a TTY and as raw JSON otherwise.
"""

import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, TextIO


@dataclass(slots=True)
class RunLogger:
  """Tee logger that writes JSON lines to a file and prints console lines.

  The console stream defaults to stderr so JSON reports on stdout stay clean.
  """

  path: str | None = None
  enabled: bool = True
  console: bool = True
  stdout_format: str = 'auto'  # "auto" | "json" | "pretty"
  stream: TextIO | None = None
  _fh: Any | None = field(init=False, default=None)
  _t0: float = field(init=False, default_factory=time.time)
  _line_no: int = field(init=False, default=0)
  _use_color: bool = field(init=False, default=False)
  _use_pretty: bool = field(init=False, default=False)
  records: list[dict[str, Any]] = field(init=False, default_factory=list)

  def __post_init__(self) -> None:
    """Initialize sinks and console mode."""
    if self.stream is None:
      self.stream = sys.stderr
    if self.enabled and self.path:
      self._fh = open(self.path, 'a', encoding='utf-8')

    if self.stdout_format == 'pretty':
      self._use_pretty = True
    elif self.stdout_format == 'json':
      self._use_pretty = False
    else:
      self._use_pretty = self.stream.isatty()

    self._use_color = (
      self._use_pretty
      and self.stream.isatty()
      and os.environ.get('NO_COLOR') is None
      and os.environ.get('TERM') not in {'dumb', None}
    )

  # ---------- Public API ----------

  def log(self, record: dict[str, Any]) -> None:
    """Emit one record to file as JSONL, then to the console."""
    if not self.enabled:
      return
    self.records.append(record)

    line_json = json.dumps(record, ensure_ascii=False, default=str)
    if self._fh:
      self._fh.write(line_json + '\n')
      self._fh.flush()

    if not self.console:
      return
    if self._use_pretty:
      print(self._format_pretty_line(record), file=self.stream)
    else:
      print(line_json, file=self.stream)
    self.stream.flush()

  def event(self, name: str, /, **fields: Any) -> None:
    """Log a named event with extra fields."""
    self.log({'event': name, **fields})

  def count(self, name: str) -> int:
    """Number of logged records with this event name."""
    return sum(1 for r in self.records if r.get('event') == name)

  def close(self) -> None:
    """Close file handle if open."""
    if self._fh:
      self._fh.close()
      self._fh = None

  def __enter__(self) -> 'RunLogger':
    return self

  def __exit__(self, *exc: object) -> None:
    self.close()

  # ---------- Pretty formatting ----------

  def _format_pretty_line(self, r: dict[str, Any]) -> str:
    self._line_no += 1
    t_rel = self._style(self._since_start(), 'grey')
    n = self._style(f'{self._line_no:04d}', 'grey')

    event = r.get('event', 'info')
    if event == 'stage':
      return self._fmt_stage(n, t_rel, r)
    if event == 'verdict':
      return self._fmt_verdict(n, t_rel, r)
    if event in ('seed_skipped', 'shoot_failed'):
      return self._fmt_failure(n, t_rel, r)
    if event == 'dedup_warning':
      return self._fmt_warning(n, t_rel, r)
    return self._fmt_info(n, t_rel, r)

  def _fmt_stage(self, n: str, t: str, r: dict[str, Any]) -> str:
    elapsed = r.get('elapsed_s')
    extra = {
      k: v for k, v in r.items() if k not in ('event', 'stage', 'elapsed_s')
    }
    parts = [
      f'{n} {t} ▶',
      self._style(str(r.get('stage', '-')), 'cyan', bold=True),
      f'⏱ {elapsed:.3f}s' if isinstance(elapsed, (int, float)) else '',
      json.dumps(extra, ensure_ascii=False, default=str) if extra else '',
    ]
    return '  '.join(p for p in parts if p)

  def _fmt_verdict(self, n: str, t: str, r: dict[str, Any]) -> str:
    ok = bool(r.get('passed'))
    mark = '✅' if ok else '❌'
    check = self._style(mark, 'green' if ok else 'red', bold=True)
    return '  '.join(
      [
        f'{n} {t} {check}',
        self._style(str(r.get('name', '-')), 'magenta'),
        f'expected {r.get("expected")!s}',
        f'→ {self._style(str(r.get("actual")), "cyan", bold=True)}',
      ]
    )

  def _fmt_failure(self, n: str, t: str, r: dict[str, Any]) -> str:
    label = self._style(str(r.get('event')), 'yellow', bold=True)
    reason = r.get('reason') or r.get('error') or '-'
    where = r.get('seed', r.get('theta_seed', '-'))
    why = self._style(str(reason), 'red')
    return f'{n} {t} ⏭️  {label}  seed {where}  → {why}'

  def _fmt_warning(self, n: str, t: str, r: dict[str, Any]) -> str:
    body = {k: v for k, v in r.items() if k != 'event'}
    label = self._style('dedup_warning', 'yellow', bold=True)
    return f'{n} {t} ⚠️  {label}  {json.dumps(body, default=str)}'

  def _fmt_info(self, n: str, t: str, r: dict[str, Any]) -> str:
    return f'{n} {t} ℹ️  {json.dumps(r, ensure_ascii=False, default=str)}'

  # ---------- Small helpers ----------

  def _since_start(self) -> str:
    dt = time.time() - self._t0
    if dt < 60:
      return f'+{dt:05.2f}s'
    m, s = divmod(int(dt), 60)
    return f'+{m:02d}m{s:02d}s'

  def _style(self, s: str, color: str, bold: bool = False) -> str:
    """Apply ANSI color/bold if enabled."""
    if not self._use_color:
      return s
    codes = {
      'grey': '90',
      'red': '31',
      'green': '32',
      'yellow': '33',
      'magenta': '35',
      'cyan': '36',
    }
    parts = []
    if bold:
      parts.append('1')
    c = codes.get(color)
    if c:
      parts.append(c)
    return f'\033[{";".join(parts)}m{s}\033[0m'


def emit(logger: RunLogger | None, name: str, /, **fields: Any) -> None:
  """Log through `logger` when one is given; library code stays silent otherwise."""
  if logger is not None:
    logger.event(name, **fields)
