"""
孔径与屏之间的位置概率分布（无量纲坐标 χ = 2λx/(a0 L)，χ ∈ [-t_D, t_D]）

总概率 = 屏上 δ 分量的权重 + 衍射部分密度 ρ_d 在 [-t_D, t_D] 上的积分 = 1。
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd
from numpy.polynomial.legendre import leggauss

from matterwave.models.core_model import ReducedParams, detection_ratio, partition_diffracted, partition_forward, z0
from matterwave.models.numerics import QuadratureSpec, integrate
from matterwave.services.config_service import config_value
from matterwave.utils.errors import DomainError, SingularPointError


@dataclass(frozen=True)
class DensityPoint:
    chi: float
    rho: float
    cdf: float


@dataclass(frozen=True)
class DensityProfile:
    """位置分布的表格化结果"""
    params: ReducedParams
    forward_weight: float
    points: List[DensityPoint] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """转换为列顺序固定的 DataFrame: chi, rho, cdf"""
        return pd.DataFrame(
            {
                "chi": [pt.chi for pt in self.points],
                "rho": [pt.rho for pt in self.points],
                "cdf": [pt.cdf for pt in self.points],
            },
            columns=["chi", "rho", "cdf"],
            dtype=float,
        )


def _emission_weight(u):
    """边缘发射时刻 u 的未归一化权重 e^{-u - Z0 e^{-u}}"""
    return np.exp(-u - z0() * np.exp(-u))


def _partition(p: ReducedParams) -> float:
    return partition_forward(p) + partition_diffracted(p.t_d)


def _check_chi(p: ReducedParams, chi: float) -> None:
    if not (math.isfinite(chi) and -p.t_d <= chi <= p.t_d):
        raise DomainError(f"chi={chi} 超出 [-{p.t_d}, {p.t_d}]")


def forward_weight(p: ReducedParams) -> float:
    """
    屏上 δ 分量的概率质量，等于探测比

    Args:
        p: 参数 (βE0, t_D)

    Returns:
        Z_f/(Z_f + Z_d)
    """
    return detection_ratio(p)


def diffracted_weight(p: ReducedParams) -> float:
    """衍射部分的总概率 Z_d/Z（闭式）"""
    if p.t_d == 0.0:
        return 0.0
    z_f, z_d = partition_forward(p), partition_diffracted(p.t_d)
    return z_d / (z_f + z_d)


def rho_diffracted(p: ReducedParams, chi: float, spec: Optional[QuadratureSpec] = None) -> float:
    """
    衍射部分的概率密度

    ρ(χ) = 1/(2Z) ∫_0^{(t_D+χ)/2} e^{-u-Z0 e^{-u}}/(t_D-u) du

    Args:
        p: 参数 (βE0, t_D)
        chi: 位置，-t_D <= chi < t_D
        spec: 积分容差

    Returns:
        密度值（非负）

    Raises:
        SingularPointError: chi = t_D，密度在此对数发散
        DomainError: chi 超出 [-t_D, t_D]
    """
    _check_chi(p, chi)
    t = p.t_d
    if chi == t:
        raise SingularPointError(f"密度在 chi = t_D = {t} 处对数发散")
    upper = 0.5 * (t + chi)
    if upper == 0.0:
        return 0.0

    value = integrate(lambda u: _emission_weight(u) / (t - u), 0.0, upper, spec)
    return value / (2.0 * _partition(p))


def cdf_diffracted(p: ReducedParams, chi: float, spec: Optional[QuadratureSpec] = None) -> float:
    """
    衍射部分的累积分布 P(剩余位置 <= χ)

    交换积分次序后被积函数有界：
    CDF(χ) = 1/(2Z) ∫_0^{(t_D+χ)/2} e^{-u-Z0 e^{-u}} (χ+t_D-2u)/(t_D-u) du

    Args:
        p: 参数 (βE0, t_D)
        chi: 位置，-t_D <= chi <= t_D
        spec: 积分容差

    Returns:
        累积概率；chi = t_D 时为闭式 Z_d/Z
    """
    _check_chi(p, chi)
    t = p.t_d
    if chi == t:
        return diffracted_weight(p)
    upper = 0.5 * (t + chi)
    if upper == 0.0:
        return 0.0

    value = integrate(lambda u: _emission_weight(u) * (chi + t - 2.0 * u) / (t - u), 0.0, upper, spec)
    return value / (2.0 * _partition(p))


def _gauss_legendre():
    n = int(config_value("density.gauss_legendre_nodes", 64))
    return leggauss(n)


def rho_diffracted_array(p: ReducedParams, chi, chunk: int = 65536) -> np.ndarray:
    """
    衍射密度的向量化版本（用于大样本）

    积分上限 a = (t_D+χ)/2，r0 = t_D - a。[0, a-1] 段被积函数光滑，直接求积；
    [a-1, a] 段代换 t_D - u = e^y 消去 1/(t_D-u) 的近奇异性：
    ∫ w(u)/(t_D-u) du = ∫_{ln r0}^{ln(r0+1)} w(t_D - e^y) dy。
    两段都用固定阶 Gauss-Legendre。χ = t_D 处返回 inf。
    """
    chi = np.atleast_1d(np.asarray(chi, dtype=float))
    t = p.t_d
    if np.any(~np.isfinite(chi)) or np.any(chi < -t) or np.any(chi > t):
        raise DomainError(f"chi 超出 [-{t}, {t}]")
    out = np.zeros_like(chi)
    if t == 0.0:
        out[:] = np.inf
        return out

    nodes, weights = _gauss_legendre()
    scale = 1.0 / (2.0 * _partition(p))
    for start in range(0, chi.size, chunk):
        block = chi[start:start + chunk]
        upper = 0.5 * (t + block)
        r0 = t - upper
        singular = r0 <= 0.0
        split = np.maximum(upper - 1.0, 0.0)

        half_u = 0.5 * split
        u = half_u[:, None] * (1.0 + nodes[None, :])
        smooth = half_u * ((_emission_weight(u) / (t - u)) @ weights)

        y_hi = np.log(t - split)
        y_lo = np.log(np.where(singular, t - split, r0))
        half_y = 0.5 * (y_hi - y_lo)
        y = (0.5 * (y_hi + y_lo))[:, None] + half_y[:, None] * nodes[None, :]
        tail = half_y * (_emission_weight(t - np.exp(y)) @ weights)

        out[start:start + chunk] = np.where(singular, np.inf, scale * (smooth + tail))
    return out


def cdf_diffracted_array(p: ReducedParams, chi, chunk: int = 65536) -> np.ndarray:
    """
    累积分布的向量化版本

    CDF(χ) = W((t_D+χ)/2)/Z - (t_D-χ) ρ(χ)，W(a) = ∫_0^a w(u) du 有闭式。
    """
    chi = np.atleast_1d(np.asarray(chi, dtype=float))
    t = p.t_d
    rho = rho_diffracted_array(p, chi, chunk)
    if t == 0.0:
        return np.zeros_like(chi)

    z = z0()
    upper = 0.5 * (t + chi)
    emitted = np.exp(-z * np.exp(-upper)) * -np.expm1(z * np.expm1(-upper)) / z
    with np.errstate(invalid="ignore"):
        cdf = emitted / _partition(p) - (t - chi) * rho
    return np.where(chi == t, diffracted_weight(p), cdf)


def profile(p: ReducedParams, n_points: int, spec: Optional[QuadratureSpec] = None) -> DensityProfile:
    """
    在 [-t_D, t_D(1-1e-6)] 的等距网格上列出密度与累积分布

    Args:
        p: 参数 (βE0, t_D)
        n_points: 网格点数，>= 2
        spec: 积分容差

    Returns:
        DensityProfile；t_D = 0 时退化为前向权重 1、没有网格点
    """
    if n_points < 2:
        raise DomainError(f"n_points 必须 >= 2: {n_points}")
    weight = forward_weight(p)
    if p.t_d == 0.0:
        return DensityProfile(params=p, forward_weight=weight, points=[])

    cap = float(config_value("density.grid_cap", 1e-6))
    grid = np.linspace(-p.t_d, p.t_d * (1.0 - cap), n_points)
    points = [
        DensityPoint(chi=float(c), rho=rho_diffracted(p, float(c), spec), cdf=cdf_diffracted(p, float(c), spec))
        for c in grid
    ]
    return DensityProfile(params=p, forward_weight=weight, points=points)
