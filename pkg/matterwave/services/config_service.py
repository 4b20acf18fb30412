import copy
import json
import threading
from pathlib import Path
from typing import Any, Dict, Optional, Union

from matterwave.utils.file_utils import get_project_root
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)

# 数值默认值；配置文件缺少的键回落到这里
DEFAULT_CONFIG: Dict[str, Any] = {
    "numerics": {
        "quadrature": {
            "abs_tol": 1e-10,
            "rel_tol": 1e-10,
            "max_subdivisions": 64
        },
        "root_tol": 1e-15,
        "root_max_iter": 200,
        "extremum_tol": 1e-10,
        "extremum_scan_points": 33
    },
    "model": {
        "scan_points": 2048,
        "scan_t_floor": 1e-4,
        "default_t_max": 50.0,
        "threshold_bracket": [4.0, 5.0],
        "threshold_tol": 1e-6
    },
    "density": {
        "gauss_legendre_nodes": 64,
        "grid_cap": 1e-6
    },
    "montecarlo": {
        "block_size": 65536,
        "workers": 1
    },
    "inference": {
        "t_cap": 50.0,
        "t_floor": 1e-3,
        "grid_points": 400,
        "max_expansions": 8,
        "beta_grid": [0.1, 200.0, 60],
        "length_grid_points_2d": 120,
        "far_field_t": 8.0
    },
    "sweep": {
        "beta_e0_list": [1.0, 2.0, 4.0, 8.0, 16.0],
        "t_max": 10.0,
        "t_min": 1e-10,
        "points": 400
    }
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """递归合并配置字典，override优先"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigService:
    """全局配置服务（单例），从 config/config.json 读取数值默认值"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(ConfigService, cls).__new__(cls)
                cls._instance._initialized = False
            return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.config_path = Path(get_project_root()) / 'config' / 'config.json'
        self.config: Dict[str, Any] = {}
        self._load_config()

        self._initialized = True

    def _load_config(self) -> None:
        """加载全局配置文件，不存在时写出默认配置"""
        if not self.config_path.exists():
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(DEFAULT_CONFIG, f, indent=2, ensure_ascii=False)
            logger.info("已写出默认配置: %s", self.config_path)
            self.config = copy.deepcopy(DEFAULT_CONFIG)
            return

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                user_config = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("加载配置文件失败，使用默认配置: %s", e)
            user_config = {}
        self.config = _merge(DEFAULT_CONFIG, user_config)

    def load(self, config_path: Union[str, Path]) -> None:
        """
        切换到另一个配置文件

        Args:
            config_path: 配置文件路径
        """
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"配置文件不存在: {path}")
        with self._lock:
            self.config_path = path
            self._load_config()
        logger.info("已加载配置文件: %s", path)

    def reset(self) -> None:
        """恢复为项目默认配置文件"""
        with self._lock:
            self.config_path = Path(get_project_root()) / 'config' / 'config.json'
            self._load_config()

    def get_config_value(self, key_path: str, default: Optional[Any] = None) -> Any:
        """
        获取配置值，支持点号分隔的路径
        例如: get_config_value("numerics.quadrature.abs_tol")
        """
        keys = key_path.split('.')
        value = self.config

        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default

        return value


def config_value(key_path: str, default: Optional[Any] = None) -> Any:
    """读取配置值的便捷函数"""
    return ConfigService().get_config_value(key_path, default)
