import math

import numpy as np
import pytest

from helpers import random_rational, trapezoid_log_abs, trapezoid_log_plus
from zetalab.errors import PreconditionError
from zetalab.handles import (
    callable_handle,
    const_handle,
    exp_handle,
    poly_from_roots,
    rational_handle,
    zeta_shift_handle,
)
from zetalab.nevanlinna import (
    DiskSpec,
    PointList,
    SMT_CONSTANT,
    borel_caratheodory_check,
    characteristic_T,
    counting_N,
    jensen_residual,
    lemma1_check,
    max_modulus,
    proximity_m,
    smt_check,
)

TWO_OVER_PI = 2.0 / math.pi


def test_handle_derivative_matches_finite_difference():
    rng = np.random.default_rng(2)
    for h, zeros, poles, scale in [random_rational(rng) for _ in range(4)]:
        pts = []
        while len(pts) < 20:
            z = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
            if min((abs(z - p) for p in zeros + poles), default=1.0) > 0.05:
                pts.append(z)
        pts = np.array(pts)
        d, _ = h.deriv(pts, 1e-12)
        step = 1e-6
        vp, _ = h.eval(pts + step, 1e-12)
        vm, _ = h.eval(pts - step, 1e-12)
        fd = (vp - vm) / (2 * step)
        rel = np.abs(d - fd) / np.maximum(np.abs(d), 1e-9)
        assert float(np.max(rel)) < 1e-6


def test_proximity_exponential_closed_form():
    # (1/2pi) integral of max(0, 2 cos phi) over the circle of radius 2.
    m, err = proximity_m(exp_handle(), 2.0, 1e-8)
    assert abs(m - TWO_OVER_PI) < 1e-6
    assert err < 1e-6


def test_proximity_constants():
    assert proximity_m(const_handle(0.5), 1.0)[0] == 0.0
    m, _ = proximity_m(const_handle(2.0), 1.0)
    assert abs(m - math.log(2.0)) < 1e-12


def test_proximity_convergence_property():
    # Halving the step (one more doubling) moves the result by less than the
    # reported quadrature error.
    f = rational_handle([0.5 + 0.1j], [1.7 - 0.2j], 2.0)
    m1, e1 = proximity_m(f, 1.0, 1e-9)
    oracle = trapezoid_log_plus(lambda z: 2.0 * (z - (0.5 + 0.1j)) / (z - (1.7 - 0.2j)), 1.0, 1 << 15)
    assert abs(m1 - oracle) <= e1 + 1e-9


def test_counting_closed_forms():
    assert counting_N(PointList([(0.5 + 0j, 1)]), 0, 1.0) == pytest.approx(
        math.log(2.0), abs=1e-15
    )
    assert counting_N(PointList([]), 0, 1.0) == 0.0
    assert counting_N(PointList([]), 2, math.e) == pytest.approx(2.0, abs=1e-14)
    with pytest.raises(PreconditionError):
        counting_N(PointList([(2.0 + 0j, 1)]), 0, 1.0)


def test_characteristic_exponential():
    rep = characteristic_T(exp_handle(), 2.0, 1e-8)
    assert rep.N == 0.0
    assert abs(rep.T - TWO_OVER_PI) < 1e-6


def test_characteristic_rational_vs_fine_grid():
    f = rational_handle([-2.0], [2.0])
    rep = characteristic_T(f, 1.0, 1e-9)
    oracle = trapezoid_log_plus(lambda z: (z + 2.0) / (z - 2.0), 1.0, 1 << 15)
    assert rep.N == 0.0  # pole at 2 is outside radius 1
    assert abs(rep.T - oracle) < 1e-7


def test_characteristic_locates_poles_when_not_declared():
    def fn(z):
        return (z + 2.0) / (z - 0.5)

    def dfn(z):
        return -2.5 / (z - 0.5) ** 2

    f = callable_handle(fn, DiskSpec(0j, 40.0), dfn=dfn, label="undeclared-pole")
    rep = characteristic_T(f, 1.0, 1e-8)
    assert rep.N == pytest.approx(math.log(2.0), abs=1e-7)


def test_max_modulus_values():
    assert max_modulus(exp_handle(), 3.0) == pytest.approx(math.exp(3.0), rel=1e-12)
    assert max_modulus(poly_from_roots([0.0, 0.0]), 2.0) == pytest.approx(4.0, rel=1e-12)


def test_max_modulus_zeta_shift_stable_under_doubling():
    f = zeta_shift_handle(100.0, 3.49)
    a = max_modulus(f, 3.48, nodes=1 << 12)
    b = max_modulus(f, 3.48, nodes=1 << 13)
    assert abs(a - b) < 1e-8


def test_jensen_single_zero():
    a = 0.4 + 0.2j
    f = poly_from_roots([a])
    res = jensen_residual(f, 1.0, PointList([(a, 1)]), PointList([]), -a, 1e-10)
    assert res < 1e-9


def test_jensen_exponential():
    res = jensen_residual(exp_handle(), 2.0, PointList([]), PointList([]), 1.0 + 0j, 1e-10)
    assert res < 1e-9


def test_jensen_rational_vs_doubled_oracle():
    a, b = 0.3 + 0.1j, -0.6 + 0.4j
    f = rational_handle([a], [b])
    f0 = (0 - a) / (0 - b)
    res = jensen_residual(f, 1.0, PointList([(a, 1)]), PointList([(b, 1)]), f0, 1e-10)
    assert res < 1e-8
    oracle_avg = trapezoid_log_abs(lambda z: (z - a) / (z - b), 1.0, 1 << 15)
    identity = abs(
        math.log(abs(f0)) - (oracle_avg - math.log(1 / abs(a)) + math.log(1 / abs(b)))
    )
    assert identity < 1e-10


def test_jensen_suite_of_random_rationals():
    rng = np.random.default_rng(17)
    for _ in range(50):
        h, zeros, poles, scale = random_rational(rng)
        f0 = h.eval_scalar(0j).value
        res = jensen_residual(
            h,
            1.0,
            PointList.from_points([(z, 1) for z in zeros if abs(z) < 1.0]),
            PointList.from_points([(p, 1) for p in poles if abs(p) < 1.0]),
            f0,
            1e-9,
        )
        assert res < 1e-8


def test_lemma1_exponential():
    v = lemma1_check(exp_handle(), 1.0, 2.0)
    assert v.passed
    # T(r) = r/pi for this function; both sides have known values.
    assert v.provenance["T_r"] == pytest.approx(1.0 / math.pi, abs=1e-6)
    assert v.provenance["log_plus_M"] == pytest.approx(1.0, abs=1e-9)


def test_lemma1_constant_collapses():
    v = lemma1_check(const_handle(5.0), 1.0, 2.0)
    assert v.passed
    assert v.provenance["T_r"] == pytest.approx(math.log(5.0), abs=1e-9)


def test_lemma1_cube():
    v = lemma1_check(poly_from_roots([0.0, 0.0, 0.0]), 2.0, 3.0)
    assert v.passed
    assert v.provenance["log_plus_M"] == pytest.approx(3 * math.log(2.0), abs=1e-9)


def test_lemma1_monotonicity_of_T():
    # T(r1) <= T(r2) + tolerance for analytic members of the suite.
    handles = [exp_handle(), poly_from_roots([0.3, -0.5j]), zeta_shift_handle(100.0, 3.49)]
    radii = [0.5, 1.0, 2.0, 3.0]
    for h in handles:
        rmax = min(h.domain.radius * 0.95, 3.4)
        vals = [characteristic_T(h, r, 1e-8).T for r in radii if r <= rmax]
        for lo, hi in zip(vals, vals[1:]):
            assert lo <= hi + 1e-9


def test_borel_caratheodory_identity_function():
    f = callable_handle(
        lambda z: np.asarray(z, dtype=complex),
        DiskSpec(0j, 100.0),
        dfn=lambda z: np.ones_like(np.asarray(z, dtype=complex)),
    )
    v = borel_caratheodory_check(f, 0j, 2.0, 1.0)
    assert v.passed
    assert v.computed == pytest.approx(1.0, rel=1e-9)  # max |z| on r-disk
    assert v.bound == pytest.approx(2.0 * 1.0 / (2.0 - 1.0) * 2.0, rel=1e-9)


def test_borel_caratheodory_constant():
    v = borel_caratheodory_check(const_handle(3.0 + 1.0j), 0j, 2.0, 1.0)
    assert v.passed
    assert abs(v.computed) < 1e-12
    assert abs(v.bound) < 1e-9


def test_borel_caratheodory_log_zeta():
    from zetalab.handles import log_zeta_shift_handle

    f = log_zeta_shift_handle(20.0, 3.5)
    v = borel_caratheodory_check(f, 0j, 3.49, 3.48)
    assert v.passed
    assert v.margin > 0


def test_smt_simple_rational():
    f = rational_handle([-2.0], [2.0])
    v = smt_check(f, 1.0, 0.5)
    assert v.passed
    # No zeros, poles, or 1-points inside the unit disk; the bound reduces to
    # the two log terms plus the additive constant.
    assert v.provenance["N_zeros"] == 0.0
    assert v.provenance["N_poles"] == 0.0
    assert v.provenance["N_ones"] == 0.0
    assert v.bound == pytest.approx(24 * math.log(2.0) + SMT_CONSTANT, abs=1e-9)


def test_smt_rejects_f0_equal_one():
    f = poly_from_roots([-1.0])  # f(z) = z + 1, f(0) = 1
    with pytest.raises(PreconditionError):
        smt_check(f, 1.0, 0.5)


def test_smt_scaled_exponential_with_known_one_points():
    f = exp_handle(scale=2.0, radius=50.0)
    v = smt_check(f, 8.0, 4.0)
    assert v.passed
    # 2 e^z = 1 at -log 2 + 2 pi i k; k in {-1, 0, 1} lie inside radius 8.
    expected = [complex(-math.log(2.0), 2 * math.pi * k) for k in (-1, 0, 1)]
    n_expected = sum(math.log(8.0 / abs(w)) for w in expected)
    assert v.provenance["N_ones"] == pytest.approx(n_expected, abs=1e-6)
    assert v.provenance["additive_constant"] == 2328.0


def test_smt_suite_random_rationals():
    rng = np.random.default_rng(29)
    checked = 0
    while checked < 12:
        h, zeros, poles, scale = random_rational(rng, rho=1.0)
        f0 = h.eval_scalar(0j).value
        d0 = h.deriv(np.array([0j]), 1e-12)[0][0]
        if abs(f0) < 1e-3 or abs(f0 - 1.0) < 1e-3 or abs(d0) < 1e-3:
            continue
        if min((abs(abs(p) - 1.0) for p in zeros + poles), default=1.0) < 0.05:
            continue
        v = smt_check(h, 1.0, 0.5)
        assert v.passed, (zeros, poles, scale, v)
        checked += 1
