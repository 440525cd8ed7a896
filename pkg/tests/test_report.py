import json

from contact_loops.data import Report
from contact_loops.grader import check
from contact_loops.report import (
  render_json,
  render_markdown,
  render_summary,
  render_table,
  verdict_frame,
  write_report,
)


def _report():
  r = Report(command='t3', inputs={'n': 2, 'class': [1, 0]})
  r.outputs['orbit_count'] = 2
  r.outputs['orbits'] = [{'theta': 0.0}] * 20
  r.verdicts.append(check('orbit_count', 2, 2))
  r.verdicts.append(check('infinite_cyclic', True, False))
  return r


def test_verdict_frame():
  df = verdict_frame(_report())
  assert list(df.columns) == ['verdict', 'passed', 'expected', 'actual', 'detail']
  assert df['passed'].tolist() == ['✅', '❌']


def test_markdown_tables():
  md = render_markdown(_report())
  assert md.startswith('# t3')
  assert '**Status:** FAIL' in md
  assert '| orbit_count' in md
  assert 'orbits' not in md.split('## Verdicts')[0].split('## Outputs')[1]


def test_json_round_trip():
  raw = json.loads(render_json(_report()))
  assert raw['command'] == 't3'
  assert raw['passed'] is False
  assert raw['verdicts'][0]['name'] == 'orbit_count'
  assert len(json.loads(render_json([_report(), _report()]))) == 2


def test_summary_and_table():
  text = render_summary([_report(), _report()])
  assert '**Verdicts:** 2/4 passed across 2 reports' in text
  assert '| t3' in text
  assert render_table([]) == '(empty)'
  assert '| a ' in render_table([{'a': 1.5, 'b': 'x'}])


def test_write_report(tmp_path):
  paths = write_report(_report(), str(tmp_path / 'out'), 'demo')
  assert [p.rsplit('/', 1)[1] for p in paths] == [
    'report_demo.json', 'report_demo.md'
  ]
  assert json.loads(open(paths[0], encoding='utf-8').read())['command'] == 't3'
