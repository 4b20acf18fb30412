import logging
import math

import pytest
from pydantic import ValidationError
from scipy import constants

from matterwave.models import units
from matterwave.models.core_model import detection_ratio, log_detection_ratio
from matterwave.utils.errors import DomainError


def electron_setup(**overrides) -> units.PhysicalSetup:
    values = dict(mass=constants.m_e, wavelength=1e-10, aperture_radius=1e-4,
                  length_param=2e-6, temperature=300.0, screen_distance=1e-3)
    values.update(overrides)
    return units.PhysicalSetup(**values)


def test_electron_kinetic_energy():
    setup = electron_setup()
    assert units.kinetic_energy_ev(setup) == pytest.approx(150.4, rel=1e-3)
    assert units.kinetic_energy(setup) == pytest.approx(2.40987e-17, rel=1e-5)


def test_energy_velocity_identity():
    setup = electron_setup()
    v = units.group_velocity(setup)
    assert v == pytest.approx(7.2739e6, rel=1e-4)
    assert units.kinetic_energy(setup) == pytest.approx(0.5 * setup.mass * v * v, rel=1e-12)


def test_scaled_time_is_flight_time_over_timescale():
    setup = electron_setup()
    ratio = units.flight_time(setup) / units.decoherence_timescale(setup)
    assert units.scaled_time(setup) == pytest.approx(ratio, rel=1e-12)
    assert units.decoherence_timescale(setup) == pytest.approx(1.3748e-7, rel=1e-4)


def test_beta_e0_room_temperature():
    assert units.beta_e0(electron_setup()) == pytest.approx(5818.0, rel=1e-3)
    assert units.beta_e0_at(constants.m_e, 1e-10, 300.0) == units.beta_e0(electron_setup())


def test_length_inverse():
    setup = electron_setup()
    t = units.scaled_time(setup)
    length = units.length_from_scaled_time(setup.wavelength, setup.aperture_radius, setup.screen_distance, t)
    assert length == pytest.approx(setup.length_param, rel=1e-14)
    with pytest.raises(DomainError):
        units.length_from_scaled_time(1e-10, 1e-4, 1e-3, 0.0)


def test_screen_at_aperture():
    reduced = units.to_reduced(electron_setup(screen_distance=0.0))
    assert reduced.t_d == 0.0
    assert detection_ratio(reduced) == 1.0


@pytest.mark.parametrize("field, value", [
    ("temperature", 0.0),
    ("temperature", -5.0),
    ("mass", 0.0),
    ("length_param", math.inf),
    ("screen_distance", -1.0),
])
def test_invalid_setup(field, value):
    with pytest.raises(ValidationError):
        electron_setup(**{field: value})


def test_aperture_must_exceed_wavelength():
    with pytest.raises(ValidationError):
        electron_setup(aperture_radius=5e-9)


def test_aperture_warning_band(caplog):
    with caplog.at_level(logging.WARNING, logger="matterwave"):
        units.to_reduced(electron_setup(aperture_radius=5e-8))
    assert any("a0 >> λ" in record.getMessage() for record in caplog.records)

    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="matterwave"):
        units.to_reduced(electron_setup())
    assert not caplog.records


def test_beta_e0_at_rejects_zero_temperature():
    with pytest.raises(DomainError):
        units.beta_e0_at(constants.m_e, 1e-10, 0.0)


@pytest.mark.parametrize("overrides, beta_factor, t_factor", [
    ({"wavelength": 2e-10}, 0.25, 2.0),
    ({"mass": 2.0 * constants.m_e}, 0.5, 1.0),
    ({"temperature": 600.0}, 0.5, 1.0),
    ({"screen_distance": 2e-3}, 1.0, 2.0),
    ({"aperture_radius": 2e-4}, 1.0, 0.5),
    ({"length_param": 4e-6}, 1.0, 0.5),
])
def test_reduced_params_scaling(overrides, beta_factor, t_factor):
    base = units.to_reduced(electron_setup())
    scaled = units.to_reduced(electron_setup(**overrides))
    assert scaled.beta_e0 == pytest.approx(base.beta_e0 * beta_factor, rel=1e-12)
    assert scaled.t_d == pytest.approx(base.t_d * t_factor, rel=1e-12)


def test_setups_with_equal_reduced_params_give_equal_ratio():
    # 波长加倍、温度取四分之一、屏距减半：βE0 与 t_D 都不变
    first = units.to_reduced(electron_setup())
    second = units.to_reduced(electron_setup(wavelength=2e-10, temperature=75.0, screen_distance=5e-4))
    assert second.beta_e0 == pytest.approx(first.beta_e0, rel=1e-12)
    assert second.t_d == pytest.approx(first.t_d, rel=1e-12)
    assert float(log_detection_ratio(second.beta_e0, second.t_d)) == pytest.approx(
        float(log_detection_ratio(first.beta_e0, first.t_d)), rel=1e-10)
