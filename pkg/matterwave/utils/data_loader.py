import io
import os
from typing import List, Tuple

import pandas as pd
from pydantic import ValidationError

from matterwave.services.inference_service import Measurement
from matterwave.utils.errors import DataFormatError
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)

REQUIRED_COLUMNS = ["screen_distance_m", "ratio"]
OPTIONAL_COLUMNS = ["sigma"]


class MeasurementLoader:
    """测量数据加载器，读取 screen_distance_m,ratio[,sigma] 格式的CSV文件"""

    def __init__(self, file_path: str):
        """
        初始化数据加载器

        Args:
            file_path: CSV文件路径，以 # 开头的行为注释
        """
        self.file_path = file_path
        self.data = None

    def _data_lines(self) -> Tuple[List[int], List[str]]:
        """去掉注释与空行，返回 (文件行号, 行内容)"""
        if not os.path.exists(self.file_path):
            raise FileNotFoundError(f"文件不存在: {self.file_path}")
        with open(self.file_path, 'r', encoding='utf-8') as f:
            raw = f.read().splitlines()

        numbers, lines = [], []
        for number, line in enumerate(raw, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            numbers.append(number)
            lines.append(stripped)
        return numbers, lines

    def load_data(self) -> pd.DataFrame:
        """
        加载并校验数据文件

        Returns:
            列为 screen_distance_m, ratio, sigma 的DataFrame，
            另有 line 列记录每行在文件中的行号

        Raises:
            DataFormatError: 表头或某行格式错误，消息中给出行号
        """
        numbers, lines = self._data_lines()
        if not lines:
            raise DataFormatError(f"文件没有表头: {self.file_path}")

        header = [name.strip() for name in lines[0].split(',')]
        if header[:2] != REQUIRED_COLUMNS or header[2:] not in ([], OPTIONAL_COLUMNS):
            raise DataFormatError(
                f"表头应为 screen_distance_m,ratio[,sigma]，实际为 {lines[0]}", line=numbers[0]
            )

        # 字段数预检，pandas 报错时无法定位到原始行号
        for number, line in zip(numbers[1:], lines[1:]):
            if len(line.split(',')) != len(header):
                raise DataFormatError(f"应有 {len(header)} 个字段: {line}", line=number)

        frame = pd.read_csv(io.StringIO('\n'.join(lines)), dtype=str, skipinitialspace=True)
        frame['line'] = numbers[1:]
        for column in header:
            values = frame[column].str.strip()
            parsed = pd.to_numeric(values, errors='coerce')
            # sigma 可以留空
            bad = parsed.isna() & ~(values.isna() | (values == '')) if column == 'sigma' else parsed.isna()
            if bad.any():
                first = frame.index[bad][0]
                raise DataFormatError(f"{column} 不是数值: {frame.at[first, column]!r}",
                                      line=int(frame.at[first, 'line']))
            frame[column] = parsed
        if 'sigma' not in frame.columns:
            frame['sigma'] = float('nan')

        self.data = frame[REQUIRED_COLUMNS + OPTIONAL_COLUMNS + ['line']]
        logger.info("从 %s 读取 %d 条测量", self.file_path, len(self.data))
        return self.data

    def load_measurements(self) -> List[Measurement]:
        """
        读取为 Measurement 列表

        Raises:
            DataFormatError: 数值越界（如 ratio 不在 (0, 1]）
        """
        if self.data is None:
            self.load_data()

        measurements = []
        for row in self.data.itertuples(index=False):
            try:
                measurements.append(Measurement(
                    screen_distance=row.screen_distance_m,
                    ratio=row.ratio,
                    sigma=None if pd.isna(row.sigma) else row.sigma,
                ))
            except ValidationError as e:
                detail = '; '.join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
                raise DataFormatError(detail, line=int(row.line)) from e
        return measurements
