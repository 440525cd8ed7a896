import io
import json

from contact_loops.runlog import RunLogger, emit


def test_records_and_jsonl(tmp_path):
  path = tmp_path / 'log.jsonl'
  stream = io.StringIO()
  with RunLogger(str(path), stream=stream, stdout_format='json') as logger:
    logger.event('stage', stage='census', elapsed_s=0.5)
    logger.event('seed_skipped', count=3)
    emit(logger, 'seed_skipped', count=1)
    emit(None, 'ignored')
  assert logger.count('seed_skipped') == 2
  lines = path.read_text().splitlines()
  assert [json.loads(x)['event'] for x in lines] == [
    'stage', 'seed_skipped', 'seed_skipped'
  ]
  assert stream.getvalue().splitlines() == lines


def test_pretty_console():
  stream = io.StringIO()
  logger = RunLogger(stream=stream, stdout_format='pretty')
  logger.event('verdict', name='orbit_count', passed=True, expected=2, actual=2)
  logger.event('shoot_failed', seed=1.5, reason='no convergence')
  text = stream.getvalue()
  assert '✅' in text and 'orbit_count' in text
  assert 'no convergence' in text
  assert '\033[' not in text


def test_disabled_logger_keeps_nothing():
  logger = RunLogger(enabled=False)
  logger.event('stage')
  assert logger.records == []
