"""
无量纲核心模型：Z0、配分函数 Z_f 与 Z_d、探测比 N(D)/N0 及其近似、
谷-峰极值与单调性阈值。

模型只依赖两个无量纲量：βE0 = E0/k_BT 与标度时间 t_D = 2λD/(a0 L)。
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import special

from matterwave.models.numerics import Bracket, find_root, refine_extremum
from matterwave.services.config_service import config_value
from matterwave.utils.errors import DomainError, ExtremumNotFoundError
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class ReducedParams:
    """决定模型的无量纲参数对 (βE0, t_D)"""
    beta_e0: float
    t_d: float

    def __post_init__(self):
        for name in ("beta_e0", "t_d"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} 必须是有限的非负数: {value}")


@dataclass(frozen=True)
class Extremum:
    t: float
    ratio: float


@dataclass(frozen=True)
class ExtremaReport:
    """探测比曲线的极值报告，数值结果与解析近似并列"""
    beta_e0: float
    t_max: float
    valley: Optional[Extremum]
    peak: Optional[Extremum]
    approx_valley: Optional[Extremum]
    approx_peak: Optional[Extremum]
    monotonic: bool


@lru_cache(maxsize=None)
def z0() -> float:
    """
    超越方程 exp(z) - 2z - 1 = 0 的正根（启动后计算一次并缓存）

    Returns:
        Z0 ≈ 1.25643
    """
    value = find_root(lambda z: math.exp(z) - 2.0 * z - 1.0, Bracket(0.5, 3.0))
    logger.debug("Z0 = %.17g", value)
    return value


def asymptotic_prefactor() -> float:
    """Z0/(1 - e^{-Z0})，由定义方程恒等于 Z0 + 1/2"""
    z = z0()
    return z / -math.expm1(-z)


def partition_forward(p: ReducedParams) -> float:
    """
    前向波前的配分函数贡献 Z_f = exp(-βE0 e^{-t} - t)

    Args:
        p: 参数，p.t_d 作为时刻 t_r

    Returns:
        Z_f，取值 (0, 1]
    """
    t = p.t_d
    return math.exp(-p.beta_e0 * math.exp(-t) - t)


def partition_diffracted(t_r: float) -> float:
    """
    边缘衍射球面波的配分函数贡献 Z_d = [e^{-Z0 e^{-t}} - e^{-Z0}]/Z0

    Args:
        t_r: 标度时间，>= 0

    Returns:
        Z_d，非负且随 t_r 单调不减
    """
    if not t_r >= 0:
        raise DomainError(f"t_r 必须非负: {t_r}")
    z = z0()
    # e^{-Z0 s} - e^{-Z0} = e^{-Z0 s}(1 - e^{-Z0(1-s)})，1 - s = -expm1(-t)
    return math.exp(-z * math.exp(-t_r)) * -math.expm1(z * math.expm1(-t_r)) / z


def _log_diffracted_gain(beta_e0, t):
    """
    ln g(t)，g = [e^{-Z0 e^{-t}} - e^{-Z0}] exp(βE0 e^{-t} + t)，即 Z_d Z0 / Z_f

    t = 0 时 g = 0，返回 -inf。
    """
    z = z0()
    beta_e0 = np.asarray(beta_e0, dtype=float)
    t = np.asarray(t, dtype=float)
    s = np.exp(-t)
    with np.errstate(divide="ignore"):
        log_bracket = -z * s + np.log(-np.expm1(z * np.expm1(-t)))
    return beta_e0 * s + t + log_bracket


def log_detection_ratio(beta_e0, t_d):
    """
    ln(N/N0)，对numpy数组逐元素计算（扫描曲线的纵坐标）

    Args:
        beta_e0: βE0（标量或数组）
        t_d: 标度时间（标量或数组）

    Returns:
        ln N(D)/N0，与输入广播后形状相同
    """
    log_g = _log_diffracted_gain(beta_e0, t_d)
    # ratio = 1/(1 + g/Z0) = expit(ln Z0 - ln g)
    return special.log_expit(math.log(z0()) - log_g)


def detection_ratio_curve(beta_e0, t_values) -> np.ndarray:
    """探测比的向量化版本"""
    return special.expit(math.log(z0()) - _log_diffracted_gain(beta_e0, t_values))


def detection_ratio(p: ReducedParams) -> float:
    """
    屏上探测到的粒子比例 N(D)/N0

    分母在对数空间中合并，βE0 很大时也不会溢出。

    Args:
        p: 参数 (βE0, t_D)

    Returns:
        探测比，取值 (0, 1]，t_D = 0 时恰为 1
    """
    if p.t_d == 0.0:
        return 1.0
    return float(detection_ratio_curve(p.beta_e0, p.t_d))


def detection_ratio_approx(p: ReducedParams) -> float:
    """
    βE0 >> 1、t_D << 1 时的近似

    1/(1 + exp(βE0 - Z0) t_D exp(-βE0 t_D))，对任意合法参数都可求值。
    """
    if p.t_d == 0.0:
        return 1.0
    log_term = p.beta_e0 - z0() + math.log(p.t_d) - p.beta_e0 * p.t_d
    return float(special.expit(-log_term))


def approx_valley(beta_e0: float) -> Extremum:
    """
    局部极小值的解析近似：t = 1/βE0，
    ratio = βE0/(βE0 + exp(βE0 - Z0))

    Raises:
        DomainError: beta_e0 <= 0
    """
    if not beta_e0 > 0:
        raise DomainError(f"谷值近似要求 beta_e0 > 0: {beta_e0}")
    ratio = special.expit(math.log(beta_e0) - (beta_e0 - z0()))
    return Extremum(t=1.0 / beta_e0, ratio=float(ratio))


def approx_peak(beta_e0: float) -> Extremum:
    """
    局部极大值的解析近似：t = ln βE0，
    ratio = Z0/(e βE0 (1 - e^{-Z0}))

    Raises:
        DomainError: beta_e0 <= 1
    """
    if not beta_e0 > 1:
        raise DomainError(f"峰值近似要求 beta_e0 > 1: {beta_e0}")
    return Extremum(t=math.log(beta_e0), ratio=asymptotic_prefactor() / (math.e * beta_e0))


def asymptotic_ratio(t_d: float) -> float:
    """
    远场指数衰减：(Z0 + 1/2) e^{-t_D}
    """
    if not t_d >= 0:
        raise DomainError(f"t_d 必须非负: {t_d}")
    return asymptotic_prefactor() * math.exp(-t_d)


def log_ratio_slope(beta_e0, t):
    """
    d ln g/dt 的解析式；ratio 对 t 的导数符号与它相反

    d ln g/dt = Z0 s/(1 - e^{-Z0(1-s)}) - βE0 s + 1，s = e^{-t}
    """
    z = z0()
    t = np.asarray(t, dtype=float)
    s = np.exp(-t)
    return z * s / -np.expm1(z * np.expm1(-t)) - np.asarray(beta_e0, dtype=float) * s + 1.0


def _scan_grid(beta_e0: float, t_max: float) -> np.ndarray:
    n = int(config_value("model.scan_points", 2048))
    floor = float(config_value("model.scan_t_floor", 1e-4))
    # 谷值约在 1/βE0 处，下限需低于它
    if beta_e0 > 0:
        floor = min(floor, 0.1 / beta_e0)
    floor = min(floor, t_max / 10.0)
    return np.geomspace(floor, t_max, n)


def _refine(beta_e0: float, grid: np.ndarray, i: int, kind: str) -> Extremum:
    """细化 grid[i] 与 grid[i+1] 之间的导数变号点"""
    def log_ratio(x: float) -> float:
        return float(log_detection_ratio(beta_e0, x))

    last = len(grid) - 1
    for lo_i, hi_i in ((i, i + 1), (max(i - 1, 0), min(i + 2, last))):
        try:
            t, _ = refine_extremum(log_ratio, Bracket(grid[lo_i], grid[hi_i]), kind)
            break
        except ExtremumNotFoundError:
            continue
    else:
        # 谷峰贴得比网格间距还近（阈值附近），取网格点本身
        candidates = (grid[i], grid[i + 1])
        pick = min if kind == "min" else max
        t = float(pick(candidates, key=log_ratio))
        logger.debug("beta_e0=%g 的极值无法细化，取网格点 t=%g", beta_e0, t)
    return Extremum(t=t, ratio=detection_ratio(ReducedParams(beta_e0, t)))


def find_extrema(beta_e0: float, t_max: Optional[float] = None) -> ExtremaReport:
    """
    在 (0, t_max] 上寻找探测比曲线的谷与峰

    在对数网格上扫描解析导数的符号变化，再用黄金分割细化每个变号点；
    同时给出谷、峰的解析近似值（有定义时）。

    Args:
        beta_e0: βE0 >= 0
        t_max: 扫描上限，None时读取配置（默认50）

    Returns:
        ExtremaReport；没有内部极值时 monotonic=True
    """
    if t_max is None:
        t_max = float(config_value("model.default_t_max", 50.0))
    if not (math.isfinite(beta_e0) and beta_e0 >= 0):
        raise DomainError(f"beta_e0 必须是有限的非负数: {beta_e0}")
    if not (math.isfinite(t_max) and t_max > 0):
        raise DomainError(f"t_max 必须为正: {t_max}")

    grid = _scan_grid(beta_e0, t_max)
    slope_sign = np.where(log_ratio_slope(beta_e0, grid) >= 0.0, 1, -1)
    changes = np.nonzero(np.diff(slope_sign))[0]

    valleys: List[Extremum] = []
    peaks: List[Extremum] = []
    for i in changes:
        # ln g 由增转减 -> 探测比的谷；由减转增 -> 峰
        if slope_sign[i] > 0:
            valleys.append(_refine(beta_e0, grid, i, "min"))
        else:
            peaks.append(_refine(beta_e0, grid, i, "max"))

    if len(valleys) > 1 or len(peaks) > 1:
        logger.warning("beta_e0=%g 发现多个极值: %d 谷, %d 峰", beta_e0, len(valleys), len(peaks))

    return ExtremaReport(
        beta_e0=beta_e0,
        t_max=t_max,
        valley=valleys[0] if valleys else None,
        peak=peaks[0] if peaks else None,
        approx_valley=approx_valley(beta_e0) if beta_e0 > 0 else None,
        approx_peak=approx_peak(beta_e0) if beta_e0 > 1 else None,
        monotonic=not (valleys or peaks),
    )


@lru_cache(maxsize=None)
def monotonic_threshold() -> float:
    """
    谷-峰结构开始出现的临界 βE0*，用 find_extrema 在 βE0 上二分

    Returns:
        βE0*，位于 (4, 5)
    """
    lo, hi = (float(v) for v in config_value("model.threshold_bracket", [4.0, 5.0]))
    tol = float(config_value("model.threshold_tol", 1e-6))
    if not find_extrema(lo).monotonic or find_extrema(hi).monotonic:
        raise DomainError(f"阈值区间 [{lo}, {hi}] 两端的单调性不相反")

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if find_extrema(mid).monotonic:
            lo = mid
        else:
            hi = mid

    threshold = 0.5 * (lo + hi)
    logger.info("单调性阈值 beta_e0* = %.9f", threshold)
    return threshold


def critical_beta_e0() -> Tuple[float, float]:
    """
    阈值的解析交叉验证

    d ln g/dt = s (h(s) - βE0)，h(s) = Z0/(1 - e^{-Z0(1-s)}) + 1/s；
    曲线非单调当且仅当 βE0 > min h。

    Returns:
        (min h, 取得最小值处的 t = -ln s)
    """
    z = z0()

    def h(s: float) -> float:
        return z / -math.expm1(-z * (1.0 - s)) + 1.0 / s

    s_star, h_star = refine_extremum(h, Bracket(0.05, 0.95), "min")
    return h_star, -math.log(s_star)
