import dataclasses
import enum
import json
from typing import Any

import numpy as np
from pydantic import BaseModel


class JSONEncoder(json.JSONEncoder):
    """自定义JSON编码器，处理numpy类型、dataclass和pydantic模型"""
    def default(self, obj):
        # 处理numpy的数据类型
        if isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, np.bool_):
            return bool(obj)
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        # 结果类型多为dataclass
        elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
        elif isinstance(obj, BaseModel):
            return obj.model_dump()
        elif isinstance(obj, enum.Enum):
            return obj.value
        elif isinstance(obj, tuple):
            return list(obj)
        return super(JSONEncoder, self).default(obj)


def to_json_string(obj: Any, indent: int = 2) -> str:
    """
    将对象转换为JSON字符串，键排序以保证输出逐字节稳定

    Args:
        obj: 要转换的对象
        indent: 缩进空格数，None表示不缩进

    Returns:
        JSON字符串
    """
    return json.dumps(obj, ensure_ascii=False, indent=indent, sort_keys=True,
                      allow_nan=False, cls=JSONEncoder)
