import argparse
from typing import List

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from matterwave.commands.base_command import BaseCommand
from matterwave.models.core_model import log_detection_ratio
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)


class SweepConfig(BaseModel):
    """探测比曲线扫描的设置"""
    model_config = ConfigDict(frozen=True)

    beta_e0_list: List[float] = Field(min_length=1)
    t_max: float = Field(gt=0, allow_inf_nan=False)
    t_min: float = Field(default=1e-10, gt=0, allow_inf_nan=False)
    points: int = Field(ge=2)
    log_axis: bool = True

    @model_validator(mode="after")
    def _check(self):
        for beta in self.beta_e0_list:
            if not (np.isfinite(beta) and beta >= 0):
                raise ValueError(f"beta_e0 必须是有限的非负数: {beta}")
        if self.log_axis and not self.t_min < self.t_max:
            raise ValueError(f"对数网格要求 t_min < t_max: {self.t_min}, {self.t_max}")
        return self

    def grid(self) -> np.ndarray:
        """(0, t_max] 上的 t_D 网格"""
        if self.log_axis:
            return np.geomspace(self.t_min, self.t_max, self.points)
        return self.t_max * np.arange(1, self.points + 1) / self.points


def sweep_frame(config: SweepConfig) -> pd.DataFrame:
    """长格式表：每个 βE0、每个网格点一行，按 (beta_e0, t_d) 排序"""
    grid = config.grid()
    frames = []
    for beta in sorted(config.beta_e0_list):
        log_ratio = log_detection_ratio(beta, grid)
        frames.append(pd.DataFrame({
            "beta_e0": np.full(grid.size, beta),
            "t_d": grid,
            "ratio": np.exp(log_ratio),
            "ln_ratio": log_ratio,
        }))
    return pd.concat(frames, ignore_index=True)[["beta_e0", "t_d", "ratio", "ln_ratio"]]


class SweepCommand(BaseCommand):
    name = "sweep"
    help = "扫描多条 βE0 曲线的 ln(N/N0)–t_D 关系，输出CSV"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--beta-e0", type=float, nargs="+", default=None,
                            help="βE0 列表（默认 1 2 4 8 16）")
        parser.add_argument("--t-max", type=float, default=None, help="t_D 上限")
        parser.add_argument("--t-min", type=float, default=None, help="对数网格的 t_D 下限")
        parser.add_argument("--points", type=int, default=None, help="每条曲线的点数")
        parser.add_argument("--linear", action="store_true", help="使用等距网格 t_max·k/points")

    def execute(self, args: argparse.Namespace) -> str:
        config = SweepConfig(
            beta_e0_list=args.beta_e0 or self.config("sweep.beta_e0_list", [1.0, 2.0, 4.0, 8.0, 16.0]),
            t_max=args.t_max if args.t_max is not None else self.config("sweep.t_max", 10.0),
            t_min=args.t_min if args.t_min is not None else self.config("sweep.t_min", 1e-10),
            points=args.points if args.points is not None else self.config("sweep.points", 400),
            log_axis=not args.linear,
        )
        logger.info("sweep: %d 条曲线，每条 %d 点", len(config.beta_e0_list), config.points)
        return self.to_csv(sweep_frame(config))
