import pytest

from matterwave.services.config_service import ConfigService


@pytest.fixture(autouse=True)
def reset_config():
    """每个测试结束后恢复默认配置文件"""
    yield
    ConfigService().reset()
