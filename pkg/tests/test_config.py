import pytest

from contact_loops.config import Config, load_config
from contact_loops.data import ConfigError


def test_defaults(monkeypatch):
  monkeypatch.delenv('CLOOPS_TOL', raising=False)
  monkeypatch.delenv('CLOOPS_GRID', raising=False)
  cfg = load_config()
  assert cfg.tol == 1e-9
  assert cfg.grid == 64
  assert cfg.beta_constant == (0.0, 0.0, 1.0)


def test_precedence(tmp_path, monkeypatch):
  monkeypatch.setenv('CLOOPS_GRID', '96')
  monkeypatch.setenv('CLOOPS_EPSILON', '0.1')
  path = tmp_path / 'run.env'
  path.write_text('GRID=128\nCLOOPS_DEDUP_RADIUS=1e-5\n')
  cfg = load_config(str(path), overrides={'grid': 32, 'tol': None})
  assert cfg.grid == 32
  assert cfg.epsilon == 0.1
  assert cfg.dedup_radius == 1e-5
  assert cfg.tol == Config().tol


def test_unknown_key_rejected(tmp_path):
  path = tmp_path / 'bad.env'
  path.write_text('GRIDS=64\n')
  with pytest.raises(ConfigError, match='GRIDS'):
    load_config(str(path))


def test_bad_values_rejected(tmp_path):
  path = tmp_path / 'bad.env'
  path.write_text('GRID=many\n')
  with pytest.raises(ConfigError):
    load_config(str(path))
  with pytest.raises(ConfigError):
    load_config(overrides={'log_format': 'xml'})
  with pytest.raises(ConfigError):
    load_config(str(tmp_path / 'missing.env'))
