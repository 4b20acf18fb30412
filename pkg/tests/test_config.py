import json

import pytest

from matterwave.services.config_service import ConfigService, config_value


def test_singleton():
    assert ConfigService() is ConfigService()


def test_dotted_lookup():
    assert config_value("numerics.quadrature.max_subdivisions") == 64
    assert config_value("sweep.beta_e0_list") == [1.0, 2.0, 4.0, 8.0, 16.0]
    assert config_value("numerics.missing", "fallback") == "fallback"


def test_load_overrides_and_reset(tmp_path):
    path = tmp_path / "custom.json"
    path.write_text(json.dumps({"sweep": {"points": 7}}), encoding="utf-8")
    service = ConfigService()
    service.load(path)
    assert config_value("sweep.points") == 7
    # 未覆盖的键回落到默认值
    assert config_value("sweep.t_max") == 10.0
    service.reset()
    assert config_value("sweep.points") == 400


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigService().load(tmp_path / "absent.json")
