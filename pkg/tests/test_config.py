from pathlib import Path

import pytest

from esmin.errors import ConfigError
from esmin.esmin_config import EsminConfig


def test_defaults():
    cfg = EsminConfig()
    assert cfg.triple_cap == 1_000_000
    assert cfg.partition_cap == 200_000
    assert cfg.log_level == "WARNING"
    assert cfg.fixture_dir is None


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("ESMIN_TRIPLE_CAP", "50")
    monkeypatch.setenv("ESMIN_PARTITION_CAP", " 7 ")
    monkeypatch.setenv("ESMIN_LOG_LEVEL", "debug")
    monkeypatch.setenv("ESMIN_FIXTURE_DIR", str(tmp_path))
    cfg = EsminConfig()
    assert cfg.triple_cap == 50
    assert cfg.partition_cap == 7
    assert cfg.log_level == "DEBUG"
    assert cfg.fixture_dir == Path(tmp_path)


def test_blank_value_means_default(monkeypatch):
    monkeypatch.setenv("ESMIN_PARTITION_CAP", "")
    assert EsminConfig().partition_cap == 200_000


@pytest.mark.parametrize("raw", ["many", "0", "-3"])
def test_bad_cap(monkeypatch, raw):
    monkeypatch.setenv("ESMIN_TRIPLE_CAP", raw)
    with pytest.raises(ConfigError, match="ESMIN_TRIPLE_CAP"):
        EsminConfig().triple_cap
