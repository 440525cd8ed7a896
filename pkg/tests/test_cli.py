import json

import pytest

from contact_loops.cli import main


def test_t3_markdown(capsys):
  assert main(['t3', '--n', '2']) == 0
  out = capsys.readouterr().out
  assert out.startswith('# t3')
  assert '**Status:** PASS' in out


def test_t3_json(capsys):
  assert main(['t3', '--n', '2', '--ring', 'full', '--json']) == 0
  raw = json.loads(capsys.readouterr().out)
  assert raw['command'] == 't3'
  assert raw['inputs'] == {'class': [1, 0], 'n': 2, 'ring': 'full'}
  assert raw['outputs']['invariant_factors'] == ['1 - t', '1 - t']


def test_invalid_input_exits_two(capsys):
  assert main(['t3', '--n', '0']) == 2
  err = capsys.readouterr().err
  assert err.startswith('usage: cloops t3')
  assert 'cloops t3: error:' in err
  assert main(['snf', '--matrix', '[[1, 0]']) == 2
  assert main(['order', '--automorphism', '@/nonexistent/aut.json']) == 2


def test_bad_class_is_a_usage_error():
  with pytest.raises(SystemExit) as err:
    main(['t3', '--class', 'one'])
  assert err.value.code == 2


@pytest.mark.parametrize(
  'monodromy', ['1,x,0,1', '1,2', '1,1,1,1', '1.5,0,0,1']
)
def test_bad_monodromy_is_a_usage_error(capsys, monodromy):
  with pytest.raises(SystemExit) as err:
    main(['bundle', '--monodromy', monodromy])
  assert err.value.code == 2
  err_text = capsys.readouterr().err
  assert err_text.startswith('usage: cloops bundle')
  assert 'Traceback' not in err_text


def test_failed_verdict_exits_one(capsys):
  assert main(['stsigma', '--intersection', '0', '--json']) == 1
  assert json.loads(capsys.readouterr().out)['passed'] is False


def test_snf_inline(capsys):
  matrix = json.dumps([[[[[0], 1], [[1], -1]], 0], [0, [[[2], 1]]]])
  assert main(['snf', '--matrix', matrix, '--json']) == 0
  raw = json.loads(capsys.readouterr().out)
  assert raw['outputs']['invariant_factors'] == ['1', '1 - t']


def test_order_from_file(tmp_path, capsys):
  path = tmp_path / 'aut.json'
  path.write_text(json.dumps({
    'index_set': {'finite': 2},
    'perm': [1, 0],
    'multipliers': [['1', [0]], ['1', [0]]],
  }))
  assert main(['order', '--automorphism', f'@{path}', '--json']) == 0
  raw = json.loads(capsys.readouterr().out)
  assert raw['outputs']['certificate'] == {'order': 2}


def test_bundle_and_stt(capsys):
  assert main(['bundle', '--monodromy', '2,1,1,1', '--json']) == 0
  assert json.loads(capsys.readouterr().out)['outputs'][
    'automorphism_type'
  ] == 'shift'
  assert main(['stt', '--n', '3', '--d', '2']) == 0


def test_stm(capsys):
  assert main(['stm', '--n', '2', '--intersection', '3', '--json']) == 0
  raw = json.loads(capsys.readouterr().out)
  assert raw['outputs']['morphism']['text'] == '3*t'
  assert main(['stm', '--intersection', '0']) == 1


def test_shoot_with_overrides(capsys):
  assert main(
    ['shoot', '--n', '2', '--seeds', '32', '--step', '0.01', '--json']
  ) == 0
  raw = json.loads(capsys.readouterr().out)
  assert raw['inputs']['seeds'] == 32


def test_out_and_log(tmp_path, capsys):
  out = tmp_path / 'reports'
  log = tmp_path / 'run.jsonl'
  assert main(
    ['lutz-critical', '--grid', '32', '--out', str(out), '--log', str(log)]
  ) == 0
  capsys.readouterr()
  assert sorted(p.name for p in out.iterdir()) == [
    'report_lutz-critical.json', 'report_lutz-critical.md'
  ]
  events = [json.loads(line)['event'] for line in log.read_text().splitlines()]
  assert 'stage' in events and 'verdict' in events


def test_config_file(tmp_path, capsys):
  cfg = tmp_path / 'run.env'
  cfg.write_text('CLOOPS_EPSILON=0.1\nGRID=64\n')
  assert main(['t5', '--config', str(cfg), '--json']) == 0
  raw = json.loads(capsys.readouterr().out)
  assert raw['inputs']['epsilon'] == 0.1
  assert raw['inputs']['grid'] == 64
