"""
由屏距 D 处测得的探测比反推长度参数 L（以及可选的 βE0）

目标函数是对数残差的加权平方和：
    Σ w_i (ln ratio_i - ln N/N0(βE0, 2λD_i/(a0 L)))²，w_i = 1/σ_i² 或 1
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import optimize

from matterwave.models.core_model import detection_ratio_curve, log_detection_ratio
from matterwave.models.units import beta_e0_at, length_from_scaled_time, scaled_time_from
from matterwave.services.config_service import config_value
from matterwave.utils.errors import DegenerateDataError, DomainError
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)

# 二维拟合中 ln βE0 的取值范围
LOG_BETA_BOUNDS = (math.log(1e-3), math.log(1e4))


class Measurement(BaseModel):
    """一次测量：屏距（m）、探测比与可选的相对误差"""
    model_config = ConfigDict(frozen=True)

    screen_distance: float = Field(ge=0, allow_inf_nan=False)
    ratio: float = Field(gt=0, le=1, allow_inf_nan=False)
    sigma: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)


@dataclass
class FitResult:
    """拟合结果与收敛诊断"""
    length_param: float
    beta_e0: float
    beta_fitted: bool
    residual_norm: float
    iterations: int
    converged: bool
    warnings: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class _Data:
    """排序后的测量数组；base_t 为 L = 1 m 时的标度时间"""
    base_t: np.ndarray
    log_ratio: np.ndarray
    sqrt_w: np.ndarray

    def residuals(self, beta_e0: float, length_param: float) -> np.ndarray:
        model = log_detection_ratio(beta_e0, self.base_t / length_param)
        return self.sqrt_w * (self.log_ratio - model)

    def grid_objective(self, beta_e0, log_lengths: np.ndarray) -> np.ndarray:
        """在一组 ln L（可与 βE0 广播）上同时计算目标函数"""
        t = self.base_t / np.exp(log_lengths)[..., None]
        model = log_detection_ratio(np.asarray(beta_e0)[..., None], t)
        return np.sum((self.sqrt_w * (self.log_ratio - model)) ** 2, axis=-1)


def _prepare(data: Sequence[Measurement], wavelength: float, aperture_radius: float) -> _Data:
    # 排序使结果与测量的输入顺序无关
    rows = sorted((m.screen_distance, m.ratio, m.sigma or 0.0) for m in data)
    distance = np.array([r[0] for r in rows])
    ratio = np.array([r[1] for r in rows])
    sigma = np.array([r[2] for r in rows])
    weights = np.where(sigma > 0, 1.0 / np.where(sigma > 0, sigma, 1.0), 1.0)
    return _Data(
        base_t=scaled_time_from(wavelength, aperture_radius, 1.0, distance),
        log_ratio=np.log(ratio),
        sqrt_w=weights,
    )


def _check_informative(data: Sequence[Measurement], min_points: int = 2) -> np.ndarray:
    """检查数据能否确定 L，返回正屏距数组"""
    if len(data) < min_points:
        raise DegenerateDataError(f"至少需要 {min_points} 个测量，实际 {len(data)} 个")
    if all(m.ratio == 1.0 for m in data):
        raise DegenerateDataError("所有探测比都等于 1，数据不含 L 的信息")
    positive = np.array(sorted({m.screen_distance for m in data if m.screen_distance > 0}))
    if positive.size < 2:
        raise DegenerateDataError(f"至少需要 2 个不同的正屏距，实际 {positive.size} 个")
    return positive


class InferenceService:
    """长度参数 L（与 βE0）的最小二乘估计"""

    def __init__(self):
        self.t_cap = float(config_value("inference.t_cap", 50.0))
        self.t_floor = float(config_value("inference.t_floor", 1e-3))
        self.grid_points = int(config_value("inference.grid_points", 400))
        self.max_expansions = int(config_value("inference.max_expansions", 8))
        self.beta_grid = tuple(config_value("inference.beta_grid", [0.1, 200.0, 60]))
        self.length_grid_points_2d = int(config_value("inference.length_grid_points_2d", 120))
        self.far_field_t = float(config_value("inference.far_field_t", 8.0))

    def _log_length_bracket(self, distances: np.ndarray, wavelength: float, aperture_radius: float) -> Tuple[float, float]:
        # 最近的屏 t_D <= t_cap，最远的屏 t_D >= t_floor
        shortest = length_from_scaled_time(wavelength, aperture_radius, float(distances[0]), self.t_cap)
        longest = length_from_scaled_time(wavelength, aperture_radius, float(distances[-1]), self.t_floor)
        return math.log(shortest), math.log(longest)

    def objective(self, data: Sequence[Measurement], beta_e0: float, length_param: float,
                  wavelength: float, aperture_radius: float) -> float:
        """
        给定参数处的目标函数值

        Args:
            data: 测量列表
            beta_e0: βE0
            length_param: L（m）
            wavelength: 波长（m）
            aperture_radius: 孔径半径（m）

        Returns:
            加权对数残差平方和
        """
        if not (length_param > 0 and beta_e0 >= 0):
            raise DomainError(f"length_param 必须为正、beta_e0 必须非负: {length_param}, {beta_e0}")
        prepared = _prepare(data, wavelength, aperture_radius)
        return float(np.sum(prepared.residuals(beta_e0, length_param) ** 2))

    def fit_length(self, data: Sequence[Measurement], mass: float, wavelength: float,
                   aperture_radius: float, temperature: float) -> FitResult:
        """
        已知 βE0（由质量、波长、温度算出）时拟合 L

        在 ln L 的对数网格上扫描，再用有界 Brent 法细化、最小二乘抛光。

        Raises:
            DegenerateDataError: 数据不足以确定 L
        """
        beta = beta_e0_at(mass, wavelength, temperature)
        return self._fit_length_at(data, beta, wavelength, aperture_radius)

    def _fit_length_at(self, data: Sequence[Measurement], beta_e0: float,
                       wavelength: float, aperture_radius: float) -> FitResult:
        distances = _check_informative(data)
        prepared = _prepare(data, wavelength, aperture_radius)
        lo, hi = self._log_length_bracket(distances, wavelength, aperture_radius)

        iterations = 0
        for expansion in range(self.max_expansions + 1):
            grid = np.linspace(lo, hi, self.grid_points)
            values = prepared.grid_objective(beta_e0, grid)
            iterations += self.grid_points
            i = int(np.nanargmin(values))
            if 0 < i < self.grid_points - 1:
                break
            # 最优点在网格边缘：向该侧扩大十倍
            if i == 0:
                lo -= math.log(10.0)
            else:
                hi += math.log(10.0)
            logger.debug("ln L 网格最优点位于边缘，第 %d 次扩展到 [%g, %g]", expansion + 1, lo, hi)
        else:
            length = math.exp(grid[i])
            logger.warning("ln L 区间扩展 %d 次后最优点仍在边缘，返回最佳网格点 L=%g", self.max_expansions, length)
            return FitResult(length_param=length, beta_e0=beta_e0, beta_fitted=False,
                             residual_norm=math.sqrt(values[i]), iterations=iterations,
                             converged=False, warnings=["ln L 网格最优点位于边缘"])

        # 以最佳网格点为原点细化，保持横坐标量级小
        centre = grid[i]

        def along(y: float) -> float:
            return float(prepared.grid_objective(beta_e0, np.array(centre + y)))

        brent = optimize.minimize_scalar(along, bounds=(grid[i - 1] - centre, grid[i + 1] - centre),
                                         method="bounded", options={"xatol": 1e-13, "maxiter": 500})
        iterations += int(brent.nfev)

        polish = optimize.least_squares(
            lambda y: prepared.residuals(beta_e0, math.exp(centre + y[0])),
            x0=[brent.x], xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200,
        )
        iterations += int(polish.nfev)
        y = float(polish.x[0]) if 2.0 * polish.cost <= brent.fun else float(brent.x)

        length = math.exp(centre + y)
        value = along(y)
        result = FitResult(length_param=length, beta_e0=beta_e0, beta_fitted=False,
                           residual_norm=math.sqrt(value), iterations=iterations,
                           converged=bool(brent.success) and polish.status > 0)
        logger.info("拟合 L=%.10g (beta_e0=%g), 残差范数 %.3g", length, beta_e0, result.residual_norm)
        return result

    def fit_length_and_beta(self, data: Sequence[Measurement], wavelength: float, aperture_radius: float,
                            beta_e0: Optional[float] = None) -> FitResult:
        """
        同时拟合 L 与 βE0

        二维网格给出初值，Nelder-Mead 单纯形搜索后用最小二乘抛光。
        给定 beta_e0 时退化为 L 的一维拟合。

        Args:
            data: 测量列表，至少 3 个且屏距跨度不小于 3 倍
            wavelength: 波长（m）
            aperture_radius: 孔径半径（m）
            beta_e0: 固定的 βE0，None 表示一并拟合

        Returns:
            FitResult；数据全部落在远场区时附带平坦似然告警
        """
        if beta_e0 is not None:
            if not (math.isfinite(beta_e0) and beta_e0 >= 0):
                raise DomainError(f"beta_e0 必须是有限的非负数: {beta_e0}")
            return self._fit_length_at(data, beta_e0, wavelength, aperture_radius)

        distances = _check_informative(data, min_points=3)
        if distances[-1] / distances[0] < 3.0:
            raise DegenerateDataError(
                f"屏距跨度 {distances[-1] / distances[0]:.3g} 倍不足 3 倍，无法同时确定 L 与 βE0"
            )
        prepared = _prepare(data, wavelength, aperture_radius)
        lo, hi = self._log_length_bracket(distances, wavelength, aperture_radius)

        beta_lo, beta_hi, beta_n = self.beta_grid
        log_lengths = np.linspace(lo, hi, self.length_grid_points_2d)
        betas = np.geomspace(float(beta_lo), float(beta_hi), int(beta_n))
        values = prepared.grid_objective(betas[:, None], log_lengths[None, :])
        j, i = np.unravel_index(int(np.nanargmin(values)), values.shape)
        origin = np.array([log_lengths[i], math.log(betas[j])])
        iterations = values.size

        def residuals(x: np.ndarray) -> np.ndarray:
            log_beta = float(np.clip(origin[1] + x[1], *LOG_BETA_BOUNDS))
            return prepared.residuals(math.exp(log_beta), math.exp(origin[0] + x[0]))

        def total(x: np.ndarray) -> float:
            value = float(np.sum(residuals(x) ** 2))
            return value if math.isfinite(value) else math.inf

        simplex = optimize.minimize(
            total, x0=np.zeros(2), method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 4000,
                     "initial_simplex": [[0.0, 0.0], [0.05, 0.0], [0.0, 0.05]]},
        )
        iterations += int(simplex.nfev)
        polish = optimize.least_squares(residuals, x0=simplex.x, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                        max_nfev=500)
        iterations += int(polish.nfev)
        x = polish.x if 2.0 * polish.cost <= simplex.fun else simplex.x

        length = math.exp(origin[0] + x[0])
        beta = math.exp(float(np.clip(origin[1] + x[1], *LOG_BETA_BOUNDS)))
        result = FitResult(length_param=length, beta_e0=beta, beta_fitted=True,
                           residual_norm=math.sqrt(total(x)), iterations=iterations,
                           converged=bool(simplex.success) or polish.status > 0)

        if np.min(prepared.base_t / length) >= self.far_field_t:
            message = (f"所有测量的 t_D >= {self.far_field_t:g}，处于远场指数衰减区，"
                       "似然对 βE0 几乎平坦，βE0 不可辨识")
            logger.warning(message)
            result.warnings.append(message)

        logger.info("拟合 L=%.10g, beta_e0=%.6g, 残差范数 %.3g", length, beta, result.residual_norm)
        return result

    def synthetic_measurements(self, beta_e0: float, length_param: float, wavelength: float,
                               aperture_radius: float, t_values: Sequence[float], noise: float = 0.0,
                               seed: Optional[int] = None) -> List[Measurement]:
        """
        按模型生成测量数据，可叠加乘性对数正态噪声

        Args:
            t_values: 标度时间列表（> 0）
            noise: 对数噪声标准差，0 表示无噪声
            seed: 噪声随机种子
        """
        t = np.asarray(t_values, dtype=float)
        if t.size == 0 or np.any(~(t > 0)):
            raise DomainError("t_values 必须非空且全部为正")
        if noise < 0:
            raise DomainError(f"noise 必须非负: {noise}")
        distance = t * aperture_radius * length_param / (2.0 * wavelength)
        ratio = detection_ratio_curve(beta_e0, t)
        if noise > 0:
            rng = np.random.default_rng(seed)
            ratio = np.minimum(ratio * np.exp(noise * rng.standard_normal(t.size)), 1.0)
        sigma = noise if noise > 0 else None
        return [Measurement(screen_distance=float(d), ratio=float(r), sigma=sigma)
                for d, r in zip(distance, ratio)]
