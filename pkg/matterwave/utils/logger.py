import logging
import os
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str, log_level: Optional[int] = None, log_file: Optional[str] = None) -> logging.Logger:
    """
    设置日志记录器

    处理器只挂在包根记录器上（如 matterwave），子模块记录器继承其级别，
    这样同一条日志不会被重复输出。

    Args:
        name: 日志记录器名称，通常为 __name__
        log_level: 日志级别，如果为None则继承包根记录器的级别
        log_file: 日志文件路径，如果为None则只输出到控制台

    Returns:
        配置好的日志记录器
    """
    logger = logging.getLogger(name)
    package_logger = logging.getLogger(name.split('.')[0])

    formatter = logging.Formatter(LOG_FORMAT)

    # 避免重复添加处理器；StreamHandler默认写stderr，stdout只留给CSV/JSON结果
    if not package_logger.handlers:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        package_logger.addHandler(console_handler)
        if package_logger.level == logging.NOTSET:
            package_logger.setLevel(logging.WARNING)

    if log_level is not None:
        logger.setLevel(log_level)

    if log_file and not _has_file_handler(package_logger, log_file):
        # 确保日志目录存在
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)

        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        package_logger.addHandler(file_handler)

    return logger


def _has_file_handler(logger: logging.Logger, log_file: str) -> bool:
    target = os.path.abspath(log_file)
    return any(isinstance(h, logging.FileHandler) and h.baseFilename == target for h in logger.handlers)


def close_file_handlers(name: str) -> None:
    """移除并关闭包根记录器上的文件处理器"""
    package_logger = logging.getLogger(name.split('.')[0])
    for handler in [h for h in package_logger.handlers if isinstance(h, logging.FileHandler)]:
        package_logger.removeHandler(handler)
        handler.close()
