import math

import numpy as np
import pytest

from matterwave.models.core_model import (ReducedParams, approx_peak, approx_valley, asymptotic_prefactor,
                                          asymptotic_ratio, critical_beta_e0, detection_ratio,
                                          detection_ratio_approx, detection_ratio_curve, find_extrema,
                                          log_detection_ratio, log_ratio_slope, monotonic_threshold,
                                          partition_diffracted, partition_forward, z0)
from matterwave.utils.errors import DomainError


def test_z0_solves_defining_equation():
    z = z0()
    assert z == pytest.approx(1.25643, abs=1e-5)
    assert abs(math.exp(z) - 2.0 * z - 1.0) < 1e-12


def test_prefactor_identity():
    assert asymptotic_prefactor() == pytest.approx(z0() + 0.5, abs=1e-12)


def test_partition_functions_reference_values():
    p = ReducedParams(1.0, 1.0)
    assert partition_forward(p) == pytest.approx(0.254646, rel=1e-5)
    assert partition_diffracted(1.0) == pytest.approx(0.2747613, rel=1e-6)
    assert detection_ratio(p) == pytest.approx(0.4810025, rel=1e-6)


@pytest.mark.parametrize("beta_e0", [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0])
@pytest.mark.parametrize("t_d", [0.0, 1e-6, 1e-3, 0.1, 1.0, 5.0, 10.0, 20.0])
def test_log_space_ratio_matches_direct_quotient(beta_e0, t_d):
    p = ReducedParams(beta_e0, t_d)
    z_f, z_d = partition_forward(p), partition_diffracted(t_d)
    assert detection_ratio(p) == pytest.approx(z_f / (z_f + z_d), rel=1e-12)


def test_partition_diffracted_zero_and_monotone():
    assert partition_diffracted(0.0) == 0.0
    values = [partition_diffracted(t) for t in np.linspace(0.0, 10.0, 51)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    with pytest.raises(DomainError):
        partition_diffracted(-0.1)


def test_partition_forward_monotone_for_small_beta():
    values = [partition_forward(ReducedParams(0.8, t)) for t in np.linspace(0.0, 5.0, 51)]
    assert all(b < a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("beta_e0, t_d", [(-1.0, 1.0), (1.0, -1.0), (math.nan, 1.0), (1.0, math.inf)])
def test_reduced_params_validation(beta_e0, t_d):
    with pytest.raises(DomainError):
        ReducedParams(beta_e0, t_d)


def test_detection_ratio_at_aperture():
    assert detection_ratio(ReducedParams(5.0, 0.0)) == 1.0
    assert detection_ratio_approx(ReducedParams(5.0, 0.0)) == 1.0


def test_detection_ratio_in_unit_interval():
    for beta in (0.0, 1.0, 8.0, 50.0):
        for t in (1e-6, 0.1, 1.0, 10.0, 40.0):
            r = detection_ratio(ReducedParams(beta, t))
            assert 0.0 < r < 1.0


def test_detection_ratio_large_beta_no_overflow():
    r = detection_ratio(ReducedParams(800.0, 0.5))
    assert 0.0 < r < 1e-100
    assert math.isfinite(float(log_detection_ratio(800.0, 0.5)))


def test_vectorised_forms_agree():
    t = np.geomspace(1e-4, 20.0, 40)
    curve = detection_ratio_curve(8.0, t)
    scalar = np.array([detection_ratio(ReducedParams(8.0, x)) for x in t])
    np.testing.assert_allclose(curve, scalar, rtol=1e-14)
    np.testing.assert_allclose(np.exp(log_detection_ratio(8.0, t)), curve, rtol=1e-12)


@pytest.mark.parametrize("beta_e0", [10.0, 20.0, 50.0])
@pytest.mark.parametrize("t_d", [1e-3, 5e-3, 1e-2])
def test_small_time_approximation(beta_e0, t_d):
    p = ReducedParams(beta_e0, t_d)
    assert detection_ratio_approx(p) == pytest.approx(detection_ratio(p), rel=0.03)


def test_small_time_approximation_reference():
    assert detection_ratio_approx(ReducedParams(20.0, 0.05)) == pytest.approx(3.9364e-7, rel=1e-3)


def test_far_field_decay():
    for t in (15.0, 20.0, 30.0):
        assert detection_ratio(ReducedParams(8.0, t)) == pytest.approx(asymptotic_ratio(t), rel=1e-5)


@pytest.mark.parametrize("beta_e0, t_d, rel", [(5.0, 10.0, 1e-3), (2.0, 15.0, 1e-4)])
def test_far_field_tolerance(beta_e0, t_d, rel):
    assert detection_ratio(ReducedParams(beta_e0, t_d)) == pytest.approx(asymptotic_ratio(t_d), rel=rel)


def test_approximation_domains():
    with pytest.raises(DomainError):
        approx_valley(0.0)
    with pytest.raises(DomainError):
        approx_peak(1.0)
    assert approx_peak(10.0).ratio == pytest.approx(0.064618, rel=1e-4)
    assert approx_valley(20.0).t == pytest.approx(0.05)


@pytest.mark.parametrize("beta_e0", [0.0, 1.0, 2.0, 3.0, 4.0])
def test_monotonic_below_threshold(beta_e0):
    report = find_extrema(beta_e0)
    assert report.monotonic
    assert report.valley is None and report.peak is None


@pytest.mark.parametrize("beta_e0", [5.0, 8.0, 10.0, 20.0])
def test_valley_and_peak_above_threshold(beta_e0):
    report = find_extrema(beta_e0)
    assert not report.monotonic
    assert report.valley is not None and report.peak is not None
    assert report.valley.t < report.peak.t
    assert report.valley.ratio < report.peak.ratio
    # 极值处解析导数为零
    assert abs(float(log_ratio_slope(beta_e0, report.valley.t))) < 1e-4
    assert abs(float(log_ratio_slope(beta_e0, report.peak.t))) < 1e-4


def test_extrema_against_closed_forms():
    report = find_extrema(20.0)
    assert report.peak.t == pytest.approx(math.log(20.0), rel=0.05)
    assert report.peak.ratio == pytest.approx(report.approx_peak.ratio, rel=0.10)
    assert report.valley.t == pytest.approx(0.05, rel=0.15)
    assert report.approx_valley.ratio < report.valley.ratio < math.e * report.approx_valley.ratio


def test_valley_abscissa_approaches_closed_form():
    gaps = [abs(find_extrema(b).valley.t * b - 1.0) for b in (10.0, 20.0, 50.0)]
    assert gaps[0] > gaps[1] > gaps[2]


@pytest.mark.parametrize("beta_e0", [5.0, 8.0, 10.0, 20.0])
def test_valley_against_dense_scan(beta_e0):
    grid = np.geomspace(0.01, 1.0, 400_001)
    t_star = grid[int(np.argmin(log_detection_ratio(beta_e0, grid)))]
    assert find_extrema(beta_e0).valley.t == pytest.approx(t_star, rel=1e-4)


def test_valley_beta_10_sits_well_above_inverse_beta():
    # 闭式 1/βE0 = 0.1 只是首项，精确谷底在 0.1298 附近
    assert find_extrema(10.0).valley.t == pytest.approx(0.1298, rel=2e-3)


def test_peak_value_beta_10():
    report = find_extrema(10.0)
    assert report.peak.ratio == pytest.approx(0.064618, rel=0.15)


def test_truncated_scan_hides_peak():
    report = find_extrema(20.0, t_max=1.0)
    assert report.valley is not None
    assert report.peak is None
    assert not report.monotonic


def test_find_extrema_invalid():
    with pytest.raises(DomainError):
        find_extrema(-1.0)
    with pytest.raises(DomainError):
        find_extrema(5.0, t_max=0.0)


def test_monotonic_threshold():
    threshold = monotonic_threshold()
    assert 4.0 < threshold < 5.0
    h_star, t_star = critical_beta_e0()
    assert threshold == pytest.approx(h_star, abs=1e-3)
    assert t_star > 0
    assert find_extrema(threshold - 0.01).monotonic
    assert not find_extrema(threshold + 0.01).monotonic
