"""Adaptive Gauss-Kronrod integration against a battery of closed forms."""

import math

import numpy as np
import pytest

from hperim.quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    compensated_sum,
    compensated_term_sum,
    integrate_1d,
    integrate_2d,
)

VALUE_TOL = 5e-8

# (name, integrand, interval, exact value); every entry is genuinely curved so
# a fixed-order rule cannot be exact by accident
BATTERY_1D = [
    ("log2", lambda x: 1.0 / (1.0 + x), (0.0, 1.0), math.log(2.0)),
    ("shifted_log", lambda x: 1.0 / x, (1.0, 3.0), math.log(3.0)),
    ("rational_square", lambda x: (1.0 + x * x) ** -2.0, (-1.0, 1.0), (math.pi + 2.0) / 4.0),
    ("exp", lambda x: np.exp(x), (0.0, 1.0), math.e - 1.0),
    ("x_exp", lambda x: x * np.exp(x), (0.0, 1.0), 1.0),
    ("sine_arch", lambda x: np.sin(x), (0.0, math.pi), 2.0),
    ("sqrt_shift", lambda x: np.sqrt(1.0 + x), (0.0, 1.0), (2.0 / 3.0) * (2.0 * math.sqrt(2.0) - 1.0)),
    ("log1p", lambda x: np.log(1.0 + x), (0.0, 1.0), 2.0 * math.log(2.0) - 1.0),
    ("tangent", lambda x: np.tan(x), (0.0, math.pi / 4.0), 0.5 * math.log(2.0)),
    ("arctan_density", lambda x: 1.0 / (1.0 + x * x), (0.0, 1.0), math.pi / 4.0),
    ("scaled_arctan", lambda x: 1.0 / (4.0 + x * x), (0.0, 2.0), math.pi / 8.0),
    ("squared_sine", lambda x: np.sin(math.pi * x) ** 2, (0.0, 1.0), 0.5),
    ("cosh", lambda x: np.cosh(x), (0.0, 1.0), math.sinh(1.0)),
    ("inverse_hyperbolic", lambda x: 1.0 / np.sqrt(1.0 + x * x), (0.0, 1.0), math.asinh(1.0)),
    ("gaussian", lambda x: np.exp(-x * x), (0.0, 1.0), 0.5 * math.sqrt(math.pi) * math.erf(1.0)),
]

BATTERY_2D = [
    ("product_log", lambda x, y: x / (1.0 + x * y), (0.0, 1.0, 0.0, 1.0), 2.0 * math.log(2.0) - 1.0),
    ("exp_moment", lambda x, y: y * np.exp(x * y), (0.0, 1.0, 0.0, 1.0), math.e - 2.0),
    ("plane_pole", lambda x, y: 1.0 / (1.0 + x + y), (0.0, 1.0, 0.0, 1.0), math.log(27.0 / 16.0)),
    ("sine_moment", lambda x, y: x * np.sin(x * y), (0.0, 1.0, 0.0, 1.0), 1.0 - math.sin(1.0)),
    ("pole_square", lambda x, y: (1.0 + x + y) ** -2.0, (0.0, 1.0, 0.0, 1.0), math.log(4.0 / 3.0)),
]


@pytest.mark.parametrize("name,f,interval,exact", BATTERY_1D, ids=[b[0] for b in BATTERY_1D])
def test_battery_1d(name, f, interval, exact):
    value, err = integrate_1d(f, interval)
    assert abs(value - exact) <= VALUE_TOL * max(1.0, abs(exact))
    assert err <= max(DEFAULT_SPEC.abs_floor, DEFAULT_SPEC.rel_tol * abs(value)) * 1.01


@pytest.mark.parametrize("name,f,box,exact", BATTERY_2D, ids=[b[0] for b in BATTERY_2D])
def test_battery_2d(name, f, box, exact):
    value, err = integrate_2d(f, box)
    assert abs(value - exact) <= VALUE_TOL * max(1.0, abs(exact))
    assert err <= max(DEFAULT_SPEC.abs_floor, DEFAULT_SPEC.rel_tol * abs(value)) * 1.01


def battery_soundness():
    """Fraction of battery entries whose true error sits under the estimate."""
    sound = 0
    total = 0
    for _, f, interval, exact in BATTERY_1D:
        value, err = integrate_1d(f, interval)
        total += 1
        if abs(value - exact) <= max(10.0 * err, 1e-13):
            sound += 1
    for _, f, box, exact in BATTERY_2D:
        value, err = integrate_2d(f, box)
        total += 1
        if abs(value - exact) <= max(10.0 * err, 1e-13):
            sound += 1
    return sound, total


def test_battery_error_estimates_are_sound():
    sound, total = battery_soundness()
    assert total == 20
    assert sound >= 19


def test_separable_integrand_factorizes():
    fx = lambda x: 1.0 / (1.0 + x)
    gy = lambda y: np.exp(y)
    v2, _ = integrate_2d(lambda x, y: fx(x) * gy(y), (0.0, 1.0, -1.0, 0.5))
    v1a, _ = integrate_1d(fx, (0.0, 1.0))
    v1b, _ = integrate_1d(gy, (-1.0, 0.5))
    assert abs(v2 - v1a * v1b) < 1e-12


def test_iterated_matches_two_dimensional():
    f = lambda x, y: 1.0 / (1.0 + x + y)

    def outer(x):
        x = np.asarray(x)
        out = np.empty(x.shape)
        for i, xi in np.ndenumerate(x):
            out[i] = integrate_1d(lambda y: f(xi, y), (0.0, 1.0))[0]
        return out

    nested, _ = integrate_1d(outer, (0.0, 1.0))
    direct, _ = integrate_2d(f, (0.0, 1.0, 0.0, 1.0))
    assert abs(nested - direct) < 1e-10


@pytest.mark.parametrize("workers", [2, 4])
def test_worker_count_does_not_change_bits_1d(workers):
    f = lambda x: np.exp(-x * x) * np.sin(3.0 * x + 0.5)
    serial = integrate_1d(f, (-2.0, 3.0), workers=1)
    parallel = integrate_1d(f, (-2.0, 3.0), workers=workers)
    assert serial == parallel


@pytest.mark.parametrize("workers", [2, 4])
def test_worker_count_does_not_change_bits_2d(workers):
    f = lambda x, y: np.exp(x * y) / (2.0 + np.sin(x) + np.cos(y))
    serial = integrate_2d(f, (0.0, 2.0, -1.0, 1.0), workers=1)
    parallel = integrate_2d(f, (0.0, 2.0, -1.0, 1.0), workers=workers)
    assert serial == parallel


def test_nonfinite_integrand_raises():
    with np.errstate(divide="ignore"), pytest.raises(ValueError):
        integrate_1d(lambda x: 1.0 / x, (-1.0, 1.0))


def test_nonfinite_bounds_raise():
    with pytest.raises(ValueError):
        integrate_1d(np.exp, (0.0, float("inf")))
    with pytest.raises(ValueError):
        integrate_2d(lambda x, y: x + y, (0.0, float("nan"), 0.0, 1.0))


def test_zero_width_domain_is_zero():
    assert integrate_1d(np.exp, (1.0, 1.0)) == (0.0, 0.0)
    assert integrate_2d(lambda x, y: x * y, (0.0, 1.0, 2.0, 2.0)) == (0.0, 0.0)


def test_reversed_interval_flips_sign():
    fwd, _ = integrate_1d(np.exp, (0.0, 1.0))
    rev, _ = integrate_1d(np.exp, (1.0, 0.0))
    assert math.isclose(rev, -fwd, rel_tol=1e-14)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"rel_tol": 0.0},
        {"rel_tol": -1e-8},
        {"abs_floor": -1.0},
        {"max_subdivisions": 0},
        {"rule_order": 17},
    ],
)
def test_spec_rejects_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


def test_higher_order_rule_agrees():
    spec21 = QuadratureSpec(rule_order=21)
    f = lambda x: np.exp(np.sin(2.0 * x)) / (1.5 + np.cos(x))
    a, _ = integrate_1d(f, (0.0, 4.0))
    b, _ = integrate_1d(f, (0.0, 4.0), spec21)
    assert abs(a - b) < 1e-10


def test_tight_tolerance_is_honored():
    spec = QuadratureSpec(rel_tol=1e-12)
    value, err = integrate_1d(lambda x: 1.0 / (1.0 + x), (0.0, 1.0), spec)
    assert abs(value - math.log(2.0)) < 1e-13
    assert err <= max(spec.abs_floor, spec.rel_tol * abs(value)) * 1.01


def test_compensated_sum_recovers_cancelled_tail():
    # naive summation in double precision loses the 1.0 entirely
    values = np.asarray([1e16, 1.0, -1e16])
    assert compensated_sum(values) == 1.0


def test_compensated_sum_matches_fsum():
    rng = np.random.default_rng(2024)
    values = rng.uniform(-1.0, 1.0, 2000) * 10.0 ** rng.integers(-8, 8, 2000)
    assert compensated_sum(values) == pytest.approx(math.fsum(values), rel=1e-15, abs=1e-12)


def test_compensated_term_sum_is_elementwise():
    rng = np.random.default_rng(7)
    terms = [rng.uniform(-1, 1, 16) * 10.0 ** rng.integers(-6, 6, 16) for _ in range(10)]
    out = compensated_term_sum(terms)
    stacked = np.stack(terms)
    for i in range(16):
        assert out[i] == pytest.approx(math.fsum(stacked[:, i]), rel=1e-15, abs=1e-13)
