import os


def ensure_dir_exists(dir_path: str) -> None:
    """
    确保目录存在，如果不存在则创建

    Args:
        dir_path: 目录路径
    """
    if dir_path and not os.path.exists(dir_path):
        os.makedirs(dir_path, exist_ok=True)


def get_project_root() -> str:
    """
    获取项目根目录

    Returns:
        项目根目录的绝对路径
    """
    # matterwave/utils/file_utils.py -> 项目根目录
    utils_dir = os.path.dirname(os.path.abspath(__file__))
    package_dir = os.path.dirname(utils_dir)
    return os.path.dirname(package_dir)


def write_text(file_path: str, text: str) -> None:
    """
    写出文本结果（统一使用UTF-8和\\n换行）

    Args:
        file_path: 文件路径
        text: 文本内容
    """
    ensure_dir_exists(os.path.dirname(file_path))
    with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
