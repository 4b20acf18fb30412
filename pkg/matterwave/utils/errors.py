"""matterwave 的异常类型，CLI 根据类型映射退出码"""
from typing import Optional


class MatterWaveError(Exception):
    """所有模型异常的基类"""


class DomainError(MatterWaveError, ValueError):
    """参数超出运算的定义域"""


class SingularPointError(DomainError):
    """在奇点处求逐点密度（χ = t_D）"""


class BracketError(MatterWaveError, ValueError):
    """区间无效或端点函数值不变号"""


class ConvergenceError(MatterWaveError, RuntimeError):
    """迭代或细分预算耗尽仍未收敛"""

    def __init__(self, message: str, best_estimate: Optional[float] = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class ExtremumNotFoundError(MatterWaveError, ValueError):
    """区间内没有所要求类型的内部极值"""


class DegenerateDataError(MatterWaveError, ValueError):
    """测量数据不包含可以确定参数的信息"""


class DataFormatError(MatterWaveError, ValueError):
    """输入文件格式错误"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"第{line}行: {message}"
        super().__init__(message)
        self.line = line
