"""
单粒子结果的精确蒙特卡洛采样：屏上探测 或 以位置 χ 留在孔径与屏之间

两阶段逆变换，无拒绝采样：
1. 以概率 N/N0 判为探测；
2. 否则采样边缘发射时刻 u（v = Z0 e^{-u} 服从 [Z0 e^{-t_D}, Z0] 上的截断指数分布），
   再在 [2u - t_D, t_D] 上均匀采样 χ。
"""
import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Union

import numpy as np
from scipy import stats
from tqdm import tqdm

from matterwave.models.core_model import ReducedParams, detection_ratio, z0
from matterwave.models.density import cdf_diffracted_array, diffracted_weight
from matterwave.services.config_service import config_value
from matterwave.utils.errors import DomainError
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)

UINT64_MAX = 2 ** 64 - 1
# KS 检验 1% 显著性水平的渐近系数
KS_CRITICAL_1PCT = 1.63


class OutcomeKind(str, Enum):
    DETECTED = "detected"
    RESIDUAL = "residual"


@dataclass(frozen=True)
class SampleOutcome:
    """一个粒子的结果；探测时 chi 与 emission_u 为 None"""
    kind: OutcomeKind
    chi: Optional[float] = None
    emission_u: Optional[float] = None


@dataclass(frozen=True)
class RngState:
    """
    可复现的随机流标识

    同一 (seed, stream_id) 总是给出同一序列；每个块 block 对应一条独立的 Philox 子流。
    """
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not (isinstance(value, (int, np.integer)) and 0 <= value <= UINT64_MAX):
                raise DomainError(f"{name} 必须是64位无符号整数: {value}")

    def generator(self, block: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id), int(block)))
        return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True)
class McEstimate:
    """探测比的蒙特卡洛估计"""
    n: int
    detected: int
    ratio_hat: float
    stderr: float

    @classmethod
    def from_counts(cls, n: int, detected: int) -> "McEstimate":
        ratio = detected / n
        return cls(n=n, detected=detected, ratio_hat=ratio, stderr=math.sqrt(ratio * (1.0 - ratio) / n))

    def merge(self, other: "McEstimate") -> "McEstimate":
        """合并两个独立估计（满足结合律）"""
        return McEstimate.from_counts(self.n + other.n, self.detected + other.detected)


@dataclass(frozen=True)
class HistogramBin:
    chi_lo: float
    chi_hi: float
    count: int


@dataclass(frozen=True)
class SampleBlock:
    """一块向量化采样的结果"""
    detected: np.ndarray
    chi: np.ndarray
    emission_u: np.ndarray

    @property
    def residual_chi(self) -> np.ndarray:
        return self.chi[~self.detected]

    @property
    def estimate(self) -> "McEstimate":
        return McEstimate.from_counts(int(self.detected.size), int(self.detected.sum()))


@dataclass(frozen=True)
class KsResult:
    """剩余粒子位置与解析分布的 Kolmogorov-Smirnov 比较"""
    statistic: float
    p_value: float
    n_residual: int
    critical_value: float

    @property
    def passed(self) -> bool:
        return self.statistic <= self.critical_value


@dataclass
class McRun:
    """一次完整运行：估计值、剩余粒子直方图与可选的 KS 检验"""
    params: ReducedParams
    rng_state: RngState
    estimate: McEstimate
    histogram: List[HistogramBin] = field(default_factory=list)
    ks: Optional[KsResult] = None


def sample_block(rng: np.random.Generator, p: ReducedParams, m: int) -> SampleBlock:
    """
    一次采样 m 个粒子

    每个粒子固定消耗三个均匀数（判定、发射时刻、位置），与结果类型无关。

    Args:
        rng: numpy 随机数生成器
        p: 参数 (βE0, t_D)
        m: 样本数

    Returns:
        SampleBlock；探测到的粒子在 chi、emission_u 中的值无意义
    """
    t = p.t_d
    uniforms = rng.random((3, m))
    detected = uniforms[0] < detection_ratio(p)

    z = z0()
    v_min = z * math.exp(-t)
    e_lo, e_hi = math.exp(-v_min), math.exp(-z)
    v = -np.log(e_lo - uniforms[1] * (e_lo - e_hi))
    u = np.clip(np.log(z / v), 0.0, t)
    chi_lo = 2.0 * u - t
    chi = np.clip(chi_lo + uniforms[2] * (t - chi_lo), chi_lo, t)
    return SampleBlock(detected=detected, chi=chi, emission_u=u)


class MonteCarloService:
    """分块、多线程的蒙特卡洛采样服务，结果与线程数无关"""

    def __init__(self, block_size: Optional[int] = None, workers: Optional[int] = None, progress: bool = False):
        self.block_size = int(block_size if block_size is not None else config_value("montecarlo.block_size", 65536))
        self.workers = int(workers if workers is not None else config_value("montecarlo.workers", 1))
        self.progress = progress
        if self.block_size < 1 or self.workers < 1:
            raise DomainError(f"block_size 与 workers 必须 >= 1: {self.block_size}, {self.workers}")

    def _block_sizes(self, n: int) -> List[int]:
        full, rest = divmod(n, self.block_size)
        return [self.block_size] * full + ([rest] if rest else [])

    def _sample_blocks(self, rng_state: RngState, p: ReducedParams, n: int) -> List[SampleBlock]:
        if n < 1:
            raise DomainError(f"样本数 n 必须 >= 1: {n}")
        sizes = self._block_sizes(n)

        def work(block: int) -> SampleBlock:
            return sample_block(rng_state.generator(block), p, sizes[block])

        logger.debug("采样 n=%d，%d 块，%d 线程", n, len(sizes), self.workers)
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            # map 按块序返回
            blocks = list(tqdm(pool.map(work, range(len(sizes))), total=len(sizes),
                               desc="mc", unit="block", disable=not self.progress))
        return blocks

    def sample_outcome(self, rng: Union[RngState, np.random.Generator], p: ReducedParams) -> SampleOutcome:
        """
        采样单个粒子

        Args:
            rng: RngState（取其第0块的第一次抽样）或 numpy Generator
            p: 参数 (βE0, t_D)
        """
        generator = rng.generator(0) if isinstance(rng, RngState) else rng
        block = sample_block(generator, p, 1)
        if block.detected[0]:
            return SampleOutcome(kind=OutcomeKind.DETECTED)
        return SampleOutcome(kind=OutcomeKind.RESIDUAL, chi=float(block.chi[0]),
                             emission_u=float(block.emission_u[0]))

    def estimate_ratio(self, rng_state: RngState, p: ReducedParams, n: int) -> McEstimate:
        """n 个独立粒子的探测比估计"""
        blocks = self._sample_blocks(rng_state, p, n)
        return _merged_estimate(blocks)

    def sample_residuals(self, rng_state: RngState, p: ReducedParams, n: int) -> np.ndarray:
        """n 个粒子中未被探测者的位置 χ（按块序拼接）"""
        blocks = self._sample_blocks(rng_state, p, n)
        return np.concatenate([b.residual_chi for b in blocks])

    def residual_histogram(self, rng_state: RngState, p: ReducedParams, n: int, bins: int) -> List[HistogramBin]:
        """
        剩余粒子在 [-t_D, t_D] 上的等宽直方图

        Returns:
            (chi_lo, chi_hi, count) 列表；t_D = 0 时为空
        """
        if bins < 1:
            raise DomainError(f"bins 必须 >= 1: {bins}")
        if p.t_d == 0.0:
            if n < 1:
                raise DomainError(f"样本数 n 必须 >= 1: {n}")
            return []
        return _histogram(self.sample_residuals(rng_state, p, n), p.t_d, bins)

    def ks_validation(self, rng_state: RngState, p: ReducedParams, n: int) -> KsResult:
        """
        用 KS 检验比较剩余粒子位置与归一化的解析累积分布

        Raises:
            DomainError: t_D = 0 或没有剩余粒子
        """
        return _ks_test(self.sample_residuals(rng_state, p, n), p)

    def run(self, rng_state: RngState, p: ReducedParams, n: int, bins: int, ks: bool = False) -> McRun:
        """一次采样同时给出估计、直方图与（可选）KS 检验"""
        if bins < 1:
            raise DomainError(f"bins 必须 >= 1: {bins}")
        blocks = self._sample_blocks(rng_state, p, n)
        estimate = _merged_estimate(blocks)
        result = McRun(params=p, rng_state=rng_state, estimate=estimate)
        if p.t_d == 0.0:
            return result

        residuals = np.concatenate([b.residual_chi for b in blocks])
        result.histogram = _histogram(residuals, p.t_d, bins)
        if ks:
            result.ks = _ks_test(residuals, p)
        logger.info("mc: n=%d, ratio_hat=%.6g ± %.2g", n, estimate.ratio_hat, estimate.stderr)
        return result


def _merged_estimate(blocks: List[SampleBlock]) -> McEstimate:
    """按块序合并各块的计数"""
    return functools.reduce(McEstimate.merge, (b.estimate for b in blocks))


def _histogram(residuals: np.ndarray, t: float, bins: int) -> List[HistogramBin]:
    counts, edges = np.histogram(residuals, bins=bins, range=(-t, t))
    return [HistogramBin(chi_lo=float(edges[k]), chi_hi=float(edges[k + 1]), count=int(counts[k]))
            for k in range(bins)]


def _ks_test(residuals: np.ndarray, p: ReducedParams) -> KsResult:
    if p.t_d == 0.0 or residuals.size == 0:
        raise DomainError("没有剩余粒子，无法做 KS 检验")
    mass = diffracted_weight(p)

    def cdf(x):
        return np.clip(cdf_diffracted_array(p, np.clip(x, -p.t_d, p.t_d)) / mass, 0.0, 1.0)

    result = stats.kstest(residuals, cdf)
    return KsResult(
        statistic=float(result.statistic),
        p_value=float(result.pvalue),
        n_residual=int(residuals.size),
        critical_value=KS_CRITICAL_1PCT / math.sqrt(residuals.size),
    )


def expected_bin_counts(p: ReducedParams, n: int, histogram: List[HistogramBin]) -> np.ndarray:
    """直方图各区间的解析期望计数 n·(CDF(hi) - CDF(lo))"""
    if not histogram:
        return np.zeros(0)
    edges = np.array([histogram[0].chi_lo] + [b.chi_hi for b in histogram])
    cdf = cdf_diffracted_array(p, np.clip(edges, -p.t_d, p.t_d))
    return n * np.diff(cdf)
