"""
SI 物理量与无量纲参数 (βE0, t_D) 之间的换算

E0 = h²/(2mλ²)，V_g = h/(mλ)，t_D = 2λD/(a0 L)，特征时间 m a0 L/(2h)。
"""
import math

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import constants

from matterwave.models.core_model import ReducedParams
from matterwave.utils.errors import DomainError
from matterwave.utils.logger import setup_logger

logger = setup_logger(__name__)

PLANCK = constants.h            # 6.62607015e-34 J s
BOLTZMANN = constants.k         # 1.380649e-23 J/K
ELECTRON_VOLT = constants.eV    # 1.602176634e-19 J

# 孔径/波长比的硬下限与告警带上限
MIN_APERTURE_RATIO = 100.0
WARN_APERTURE_RATIO = 1000.0


class BeamSetup(BaseModel):
    """入射粒子束与环境：质量、波长、孔径半径、温度（SI单位）"""
    model_config = ConfigDict(frozen=True)

    mass: float = Field(gt=0, allow_inf_nan=False, description="kg")
    wavelength: float = Field(gt=0, allow_inf_nan=False, description="m")
    aperture_radius: float = Field(gt=0, allow_inf_nan=False, description="m")
    temperature: float = Field(gt=0, allow_inf_nan=False, description="K")

    @model_validator(mode="after")
    def _aperture_much_larger_than_wavelength(self):
        if self.aperture_radius / self.wavelength < MIN_APERTURE_RATIO:
            raise ValueError(
                f"孔径半径/波长 = {self.aperture_radius / self.wavelength:.3g} < {MIN_APERTURE_RATIO:g}，"
                "不满足 a0 >> λ"
            )
        return self

    @property
    def aperture_ratio(self) -> float:
        return self.aperture_radius / self.wavelength


class PhysicalSetup(BeamSetup):
    """完整实验几何：再加上长度参数 L 与屏距 D"""
    length_param: float = Field(gt=0, allow_inf_nan=False, description="m，未知长度参数 L")
    screen_distance: float = Field(ge=0, allow_inf_nan=False, description="m")


def kinetic_energy(setup: BeamSetup) -> float:
    """
    入射粒子的动能 E0 = h²/(2mλ²)

    Returns:
        能量（J）
    """
    return PLANCK ** 2 / (2.0 * setup.mass * setup.wavelength ** 2)


def kinetic_energy_ev(setup: BeamSetup) -> float:
    """动能（eV）"""
    return kinetic_energy(setup) / ELECTRON_VOLT


def group_velocity(setup: BeamSetup) -> float:
    """
    群速度 V_g = h/(mλ)

    Returns:
        速度（m/s）
    """
    return PLANCK / (setup.mass * setup.wavelength)


def beta_e0_at(mass: float, wavelength: float, temperature: float) -> float:
    """
    βE0 = E0/(k_B T)

    Raises:
        DomainError: 任一输入非正（模型要求有限温度）
    """
    if not (mass > 0 and wavelength > 0 and temperature > 0):
        raise DomainError(f"mass、wavelength、temperature 必须为正: {mass}, {wavelength}, {temperature}")
    return PLANCK ** 2 / (2.0 * mass * wavelength ** 2) / (BOLTZMANN * temperature)


def beta_e0(setup: BeamSetup) -> float:
    """动能与热能之比 βE0"""
    return beta_e0_at(setup.mass, setup.wavelength, setup.temperature)


def scaled_time_from(wavelength: float, aperture_radius: float, length_param: float, distance):
    """t_D = 2λD/(a0 L)，distance 可为numpy数组"""
    if not (wavelength > 0 and aperture_radius > 0 and length_param > 0):
        raise DomainError(f"wavelength、aperture_radius、length_param 必须为正: "
                          f"{wavelength}, {aperture_radius}, {length_param}")
    return 2.0 * wavelength * distance / (aperture_radius * length_param)


def length_from_scaled_time(wavelength: float, aperture_radius: float, distance: float, t_d: float) -> float:
    """t_D 的反函数：给定屏距与标度时间求 L"""
    if not (t_d > 0 and distance > 0):
        raise DomainError(f"distance 与 t_d 必须为正: {distance}, {t_d}")
    return 2.0 * wavelength * distance / (aperture_radius * t_d)


def scaled_time(setup: PhysicalSetup) -> float:
    """
    标度时间 t_D = 2λD/(a0 L)

    Returns:
        无量纲时间
    """
    return scaled_time_from(setup.wavelength, setup.aperture_radius, setup.length_param, setup.screen_distance)


def decoherence_timescale(setup: PhysicalSetup) -> float:
    """
    退相干特征时间 m a0 L/(2h)；t_D 等于飞行时间 D/V_g 除以它

    Returns:
        时间（s）
    """
    return setup.mass * setup.aperture_radius * setup.length_param / (2.0 * PLANCK)


def flight_time(setup: PhysicalSetup) -> float:
    """前向波前到达屏的时间 D/V_g（s）"""
    return setup.screen_distance / group_velocity(setup)


def to_reduced(setup: PhysicalSetup) -> ReducedParams:
    """
    换算为无量纲参数 (βE0, t_D)

    孔径/波长比处于 [100, 1000) 时只告警不报错。
    """
    if setup.aperture_ratio < WARN_APERTURE_RATIO:
        logger.warning("孔径半径/波长 = %.3g < %g，a0 >> λ 的近似可能不够好",
                       setup.aperture_ratio, WARN_APERTURE_RATIO)
    b = beta_e0(setup)
    t = scaled_time(setup)
    if not math.isfinite(b):
        raise DomainError(f"βE0 溢出: {b}")
    return ReducedParams(beta_e0=b, t_d=t)
