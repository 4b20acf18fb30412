import math

import numpy as np
import pytest

from matterwave.models.numerics import Bracket, QuadratureSpec, find_root, integrate, refine_extremum
from matterwave.services.config_service import ConfigService
from matterwave.utils.errors import BracketError, ConvergenceError, DomainError, ExtremumNotFoundError


def test_find_root_sqrt2():
    root = find_root(lambda x: x * x - 2.0, Bracket(0.0, 2.0))
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_find_root_z0_equation():
    root = find_root(lambda z: math.exp(z) - 2.0 * z - 1.0, Bracket(0.5, 3.0))
    assert root == pytest.approx(1.25643, abs=1e-5)
    assert abs(math.exp(root) - 2.0 * root - 1.0) < 1e-12


def test_find_root_exact_endpoint():
    assert find_root(lambda x: x - 1.0, Bracket(1.0, 3.0)) == 1.0


def test_find_root_no_sign_change():
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1.0, Bracket(-1.0, 1.0))


def test_find_root_budget_exhausted(monkeypatch):
    monkeypatch.setitem(ConfigService().config["numerics"], "root_max_iter", 2)
    with pytest.raises(ConvergenceError) as info:
        find_root(lambda x: math.exp(x) - 2.0 * x - 1.0, Bracket(0.5, 3.0), tol=1e-15)
    assert info.value.best_estimate is not None


@pytest.mark.parametrize("lo, hi", [(1.0, 1.0), (2.0, 1.0), (0.0, math.inf)])
def test_invalid_bracket(lo, hi):
    with pytest.raises(DomainError):
        Bracket(lo, hi)


def test_integrate_polynomial():
    assert integrate(lambda x: x * x, 0.0, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_integrate_log_endpoint_singularity():
    # ∫_0^1 -ln(1-x) dx = 1
    value = integrate(lambda x: -math.log(1.0 - x), 0.0, 1.0)
    assert value == pytest.approx(1.0, abs=1e-8)


def test_integrate_empty_and_reversed():
    assert integrate(math.exp, 2.0, 2.0) == 0.0
    with pytest.raises(DomainError):
        integrate(math.exp, 2.0, 1.0)


def test_integrate_additivity():
    whole = integrate(math.cos, 0.0, 2.0)
    parts = integrate(math.cos, 0.0, 0.7) + integrate(math.cos, 0.7, 2.0)
    assert whole == pytest.approx(parts, abs=1e-12)
    assert whole == pytest.approx(math.sin(2.0), abs=1e-12)


def test_integrate_is_linear():
    combined = integrate(lambda x: 2.0 * math.sin(x) + 3.0 * math.cos(x), 0.0, 2.0)
    separate = 2.0 * integrate(math.sin, 0.0, 2.0) + 3.0 * integrate(math.cos, 0.0, 2.0)
    assert combined == pytest.approx(separate, abs=1e-12)


def test_integrate_emission_weight_against_midpoint_sum():
    z = 1.2564312086261697
    n = 1_000_000
    u = (np.arange(n) + 0.5) * (2.0 / n)
    midpoint = np.exp(-u - z * np.exp(-u)).sum() * (2.0 / n)
    closed = (math.exp(-z * math.exp(-2.0)) - math.exp(-z)) / z
    value = integrate(lambda x: math.exp(-x - z * math.exp(-x)), 0.0, 2.0)
    assert value == pytest.approx(midpoint, rel=1e-9)
    assert value == pytest.approx(closed, rel=1e-10)


def test_integrate_budget_exhausted():
    spec = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=1)
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: math.sin(1.0 / x), 1e-3, 1.0, spec)
    assert info.value.best_estimate is not None
    assert math.isfinite(info.value.best_estimate)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0, rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=0)
    assert QuadratureSpec.from_config().max_subdivisions == 64


def test_refine_extremum_max():
    x, value = refine_extremum(lambda t: t * math.exp(-t), Bracket(0.1, 5.0), "max")
    assert x == pytest.approx(1.0, abs=1e-6)
    assert value == pytest.approx(math.exp(-1.0), abs=1e-12)


def test_refine_extremum_min():
    x, value = refine_extremum(lambda t: (t - 0.3) ** 2 + 2.0, Bracket(-1.0, 1.0), "min")
    assert x == pytest.approx(0.3, abs=1e-6)
    assert value == pytest.approx(2.0, abs=1e-12)


def test_refine_extremum_min_of_negation_is_max():
    def f(t):
        return t * math.exp(-t)

    x_max, v_max = refine_extremum(f, Bracket(0.1, 5.0), "max")
    x_min, v_min = refine_extremum(lambda t: -f(t), Bracket(0.1, 5.0), "min")
    assert x_min == x_max
    assert v_min == -v_max


def test_refine_extremum_monotonic():
    with pytest.raises(ExtremumNotFoundError):
        refine_extremum(math.exp, Bracket(0.0, 1.0), "min")


def test_refine_extremum_bad_kind():
    with pytest.raises(DomainError):
        refine_extremum(math.exp, Bracket(0.0, 1.0), "saddle")
