"""
标量数值内核：有界求根、容忍端点可积奇点的自适应积分、一维极值细化。

所有函数都是输入的纯函数，可并发调用。
"""
import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Tuple

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from matterwave.services.config_service import config_value
from matterwave.utils.errors import BracketError, ConvergenceError, DomainError, ExtremumNotFoundError
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)

ScalarFunction = Callable[[float], float]
ExtremumKind = Literal["min", "max"]


@dataclass(frozen=True)
class Bracket:
    """闭区间 [lo, hi]，要求 lo < hi"""
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"区间端点必须有限: [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise DomainError(f"区间要求 lo < hi: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class QuadratureSpec:
    """积分容差与细分预算"""
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 64

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0 or not (self.abs_tol > 0 or self.rel_tol > 0):
            raise DomainError(f"容差无效: abs_tol={self.abs_tol}, rel_tol={self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(f"max_subdivisions 必须 >= 1: {self.max_subdivisions}")

    @classmethod
    def from_config(cls) -> "QuadratureSpec":
        """从配置文件读取默认积分设置"""
        return cls(
            abs_tol=float(config_value("numerics.quadrature.abs_tol", 1e-10)),
            rel_tol=float(config_value("numerics.quadrature.rel_tol", 1e-10)),
            max_subdivisions=int(config_value("numerics.quadrature.max_subdivisions", 64)),
        )


def find_root(f: ScalarFunction, bracket: Bracket, tol: Optional[float] = None) -> float:
    """
    在有界区间内求根（Brent法：二分 + 割线/逆二次插值加速）

    Args:
        f: 区间上连续的标量函数
        bracket: 端点函数值异号的区间
        tol: 绝对容差，None时读取配置

    Returns:
        根的近似值

    Raises:
        BracketError: 端点函数值不变号
        ConvergenceError: 超过最大迭代次数
    """
    if tol is None:
        tol = float(config_value("numerics.root_tol", 1e-15))
    if not tol > 0:
        raise DomainError(f"tol 必须为正: {tol}")

    f_lo, f_hi = f(bracket.lo), f(bracket.hi)
    if f_lo == 0.0:
        return bracket.lo
    if f_hi == 0.0:
        return bracket.hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError(
            f"区间 [{bracket.lo}, {bracket.hi}] 端点函数值不变号: f(lo)={f_lo}, f(hi)={f_hi}"
        )

    max_iter = int(config_value("numerics.root_max_iter", 200))
    root, result = optimize.brentq(f, bracket.lo, bracket.hi, xtol=tol,
                                   maxiter=max_iter, full_output=True, disp=False)
    if not result.converged:
        raise ConvergenceError(f"求根在 {result.iterations} 次迭代后未收敛", best_estimate=root)
    return float(root)


def integrate(f: ScalarFunction, lo: float, hi: float, spec: Optional[QuadratureSpec] = None) -> float:
    """
    计算定积分，右端点允许对数型可积奇点

    先做一次自适应Gauss-Kronrod积分；未达到容差时把右端点视为奇点，
    用代换 x = hi - exp(-s) 把区间映射到 [s0, ∞) 后重新积分。

    Args:
        f: 被积函数，在 (lo, hi) 内有限
        lo: 积分下限
        hi: 积分上限
        spec: 容差设置，None时读取配置

    Returns:
        积分值

    Raises:
        ConvergenceError: 细分预算耗尽仍未达到容差，携带最佳估计
    """
    if spec is None:
        spec = QuadratureSpec.from_config()
    if not lo <= hi:
        raise DomainError(f"积分区间要求 lo <= hi: [{lo}, {hi}]")
    if lo == hi:
        return 0.0

    first = sp_integrate.quad(f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                              limit=spec.max_subdivisions, full_output=1)
    # quad 在未收敛时多返回一条说明信息
    if len(first) == 3:
        return float(first[0])

    logger.debug("积分 [%g, %g] 未收敛(%s)，改用端点代换", lo, hi, first[3])

    def substituted(s: float) -> float:
        step = math.exp(-s)
        x = hi - step
        if not x < hi:
            return 0.0
        return f(x) * step

    s0 = -math.log(hi - lo)
    second = sp_integrate.quad(substituted, s0, np.inf, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                               limit=spec.max_subdivisions, full_output=1)
    if len(second) == 3:
        return float(second[0])

    best = second[0] if second[1] <= first[1] else first[0]
    raise ConvergenceError(
        f"积分 [{lo}, {hi}] 在 {spec.max_subdivisions} 次细分内未达到容差", best_estimate=float(best)
    )


def refine_extremum(f: ScalarFunction, bracket: Bracket, kind: ExtremumKind = "min",
                    tol: Optional[float] = None) -> Tuple[float, float]:
    """
    细化区间内唯一的内部极值（黄金分割搜索）

    Args:
        f: 标量函数
        bracket: 只含一个所求类型内部极值的区间
        kind: "min" 或 "max"
        tol: 横坐标容差，None时读取配置

    Returns:
        (极值点横坐标, 该处函数值)

    Raises:
        ExtremumNotFoundError: 区间内没有内部极值
    """
    if kind not in ("min", "max"):
        raise DomainError(f"kind 必须为 'min' 或 'max': {kind}")
    if tol is None:
        tol = float(config_value("numerics.extremum_tol", 1e-10))
    sign = 1.0 if kind == "min" else -1.0

    def objective(x: float) -> float:
        return sign * f(x)

    # 粗扫描定位内部最优点，得到满足黄金分割要求的三点
    n_scan = int(config_value("numerics.extremum_scan_points", 33))
    xs = np.linspace(bracket.lo, bracket.hi, n_scan)
    values = np.array([objective(x) for x in xs])
    if not np.all(np.isfinite(values)):
        raise ExtremumNotFoundError(f"区间 [{bracket.lo}, {bracket.hi}] 内函数值不有限")
    i = int(np.argmin(values))
    if i == 0 or i == n_scan - 1:
        raise ExtremumNotFoundError(
            f"区间 [{bracket.lo}, {bracket.hi}] 内没有内部{'极小' if kind == 'min' else '极大'}值"
        )

    lo, mid, hi = xs[i - 1], xs[i], xs[i + 1]
    if values[i] < values[i - 1] and values[i] < values[i + 1]:
        xtol = max(tol / max(abs(mid), tol), 1e-15)
        result = optimize.minimize_scalar(objective, bracket=(lo, mid, hi), method="golden",
                                          options={"xtol": xtol, "maxiter": 500})
    else:
        # 平台：三点不严格成立时退回有界Brent
        result = optimize.minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                          options={"xatol": tol, "maxiter": 500})

    x = float(np.clip(result.x, bracket.lo, bracket.hi))
    return x, float(f(x))
