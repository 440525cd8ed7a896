from contact_loops.data import Report, Verdict
from contact_loops.grader import aggregate, check, check_true, failed_verdicts


def test_exact_check():
  assert check('count', 3, 3).passed
  assert not check('count', 3, 4).passed
  assert check('pair', (4, 8), [4, 8]).passed


def test_tolerance_check():
  assert check('angle', [0.0, 3.14159265], [1e-13, 3.14159265], tol=1e-12).passed
  assert not check('angle', [0.0], [1e-6], tol=1e-9).passed
  assert not check('angle', [0.0, 1.0], [0.0], tol=1.0).passed


def test_check_true():
  v = check_true('infinite_cyclic', 1, detail='witness')
  assert v.passed and v.actual is True and v.detail == 'witness'


def _report(command, *flags):
  return Report(
    command=command,
    inputs={},
    verdicts=[Verdict(f'v{i}', f, True, f) for i, f in enumerate(flags)],
  )


def test_aggregate():
  reports = [_report('t3', True, True), _report('t3', False), _report('t5', True)]
  m = aggregate(reports)
  assert (m.reports, m.verdicts, m.passed, m.failed) == (3, 4, 3, 1)
  assert m.by_command['t3'] == {'passed': 2, 'failed': 1}
  assert not m.all_passed
  assert [(c, v.name) for c, v in failed_verdicts(reports)] == [('t3', 'v0')]


def test_report_passed():
  assert _report('t3', True).passed
  assert not _report('t3', True, False).passed
  assert _report('t3').passed
