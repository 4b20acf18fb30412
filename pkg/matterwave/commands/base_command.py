import argparse
from abc import ABC, abstractmethod

import pandas as pd

from matterwave.services.config_service import ConfigService


class BaseCommand(ABC):
    """基础命令类，所有子命令都应继承自此类"""

    name: str = ""
    help: str = ""

    def __init__(self):
        # 获取配置服务实例
        self.config_service = ConfigService()

    def config(self, key_path: str, default=None):
        """读取配置值"""
        return self.config_service.get_config_value(key_path, default)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """
        注册子命令参数

        Args:
            parser: 该子命令的参数解析器
        """

    @abstractmethod
    def execute(self, args: argparse.Namespace) -> str:
        """
        执行命令

        Args:
            args: 解析后的命令行参数

        Returns:
            写到标准输出（或 --output 文件）的文本
        """
        pass

    @staticmethod
    def to_csv(frame: pd.DataFrame) -> str:
        """固定格式的CSV文本：17位有效数字、\\n换行"""
        return frame.to_csv(index=False, float_format='%.17g', lineterminator='\n')
