from fractions import Fraction

import mpmath
import pytest

from heunwkb.contourcheck import (NumConfig, contour_Vminus1, convergence_order, eval_series, leading_series,
                                  trapezoid_period)
from heunwkb.exceptions import BranchTrackError, ContourError, MissingSymbol
from heunwkb.casecatalog import get_case
from heunwkb.puiseuxseries import PuiseuxSeries


def test_eval_series():
    series = PuiseuxSeries('t', {0: '(4*nu^2 + 9*hbar^2)/32'})
    value = eval_series(series, {'nu': 1, 'hbar': 0, 't': Fraction(1, 2)})
    assert value == mpmath.mpf(1) / 8


def test_eval_series_needs_every_symbol():
    series = PuiseuxSeries('t', {1: 'nu*th0'})
    with pytest.raises(MissingSymbol):
        eval_series(series, {'nu': 1, 't': 1})
    with pytest.raises(MissingSymbol):
        eval_series(series, {'nu': 1, 'th0': 1})


def test_simple_pole_period():
    with mpmath.workdps(30):
        value = trapezoid_period(lambda z: 1 / z**2, mpmath.mpc(0), mpmath.mpf(1), 64, lambda z: 1 / z)
        assert abs(value - 2j * mpmath.pi) < mpmath.mpf(10) ** -25


def test_contour_without_singularities_vanishes():
    with mpmath.workdps(30):
        value = trapezoid_period(lambda z: (z - 5)**2, mpmath.mpc(0), mpmath.mpf(1), 64, lambda z: z - 5)
        assert abs(value) < mpmath.mpf(10) ** -25


def test_enclosed_branch_point_is_detected():
    with pytest.raises(BranchTrackError):
        trapezoid_period(lambda z: z, mpmath.mpc(0), mpmath.mpf(1), 64, lambda z: mpmath.sqrt(z))


def test_precision_from_environment(monkeypatch):
    monkeypatch.setenv('HEUNWKB_PRECISION', '40')
    assert NumConfig().precision == 40
    monkeypatch.delenv('HEUNWKB_PRECISION')
    assert NumConfig().precision == 60


def test_pole_period_at_zero_coupling(iii3_t0):
    cfg = NumConfig(precision=60, points=512, assignment={'nu': Fraction(2, 5)})
    result = contour_Vminus1(iii3_t0, cfg, '-nu^2')
    with mpmath.workdps(60):
        assert abs(result.expected - 2j * mpmath.pi * mpmath.mpf(2) / 5) < mpmath.mpf(10) ** -55
        assert result.relative_error < mpmath.mpf(10) ** -40


def test_solved_leading_value_gives_the_same_period(iii3_t0):
    cfg = NumConfig(precision=50, points=512, assignment={'nu': Fraction(2, 5)})
    result = contour_Vminus1(iii3_t0, cfg)
    assert result.relative_error < mpmath.mpf(10) ** -40


def test_radius_must_separate_features(iii3_t0):
    cfg = NumConfig(precision=30, points=64, radius=Fraction(1, 2), assignment={'nu': Fraction(2, 5)})
    with pytest.raises(ContourError):
        contour_Vminus1(iii3_t0, cfg, '-nu^2')


def test_two_point_cycles_are_rejected():
    with pytest.raises(ValueError):
        contour_Vminus1(get_case('II.tinf1'), NumConfig(points=64))


def test_leading_series_of_strong_coupling(iii3_tinf):
    series = leading_series(iii3_tinf, 2)
    assert series.coefficient(0) == 2
    assert series.order == 3


@pytest.mark.slow
def test_strong_coupling_period(iii3_tinf):
    cfg = NumConfig(precision=60, points=4096, assignment={'nu': Fraction(1, 3)}, lam=Fraction(1, 100), levels=16)
    result = contour_Vminus1(iii3_tinf, cfg)
    with mpmath.workdps(60):
        expected = 2j * mpmath.pi * mpmath.mpf(1) / 3 / 100
        assert abs(result.expected - expected) < mpmath.mpf(10) ** -55
    assert result.relative_error < mpmath.mpf(10) ** -30


@pytest.mark.slow
def test_truncation_error_has_order_levels_plus_one(iii3_tinf):
    cfg = NumConfig(precision=60, points=4096, assignment={'nu': Fraction(1, 3)}, levels=6)
    slopes = convergence_order(iii3_tinf, cfg, [Fraction(1, 100), Fraction(1, 200), Fraction(1, 400)])
    assert len(slopes) == 2
    assert all(slope >= 7 - 0.25 for slope in slopes)


def test_sigma_minus_period_uses_the_conjugate_double_zero():
    cfg = NumConfig(precision=40, points=256, assignment={'nu': Fraction(1, 3)})
    result = contour_Vminus1(get_case('I.tinf', 'sigma-minus'), cfg)
    with mpmath.workdps(40):
        assert abs(result.center + mpmath.mpc(0, 1) / mpmath.sqrt(6)) < mpmath.mpf(10) ** -35
    assert result.relative_error < mpmath.mpf(10) ** -30
