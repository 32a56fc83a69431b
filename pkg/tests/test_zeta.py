import cmath
import math

import numpy as np
import pytest

from helpers import direct_zeta_bracket, direct_zeta_deriv, zeta_via_eta
from zetalab.errors import (
    BranchObstruction,
    PoleError,
    PreconditionError,
    PrecisionExhausted,
)
from zetalab.zeta import (
    log_zeta_series,
    log_zeta_tracked,
    zeta_em,
    zeta_em_batch,
)

PI4_OVER_90 = math.pi**4 / 90.0
PI2_OVER_6 = math.pi**2 / 6.0


def test_oracle_self_check():
    # Anchor the alternating-series oracle before using it as a referee.
    assert abs(zeta_via_eta(2.0) - PI2_OVER_6) < 1e-13
    lo, hi = direct_zeta_bracket(2.0, 10**6)
    assert hi - lo < 2e-12
    assert lo - 1e-13 <= PI2_OVER_6 <= hi + 1e-13


def test_zeta4_spot_value():
    r = zeta_em(4.0, 0, 1e-12)
    assert abs(r.value - PI4_OVER_90) <= 1e-12
    assert r.abs_error <= 1e-12


def test_zeta2_spot_value_with_bracket_oracle():
    r = zeta_em(2.0, 0, 1e-12)
    lo, hi = direct_zeta_bracket(2.0, 10**6)
    assert lo - r.abs_error <= r.value.real <= hi + r.abs_error
    assert abs(r.value - PI2_OVER_6) <= 1e-12


def test_zeta0_with_eta_oracle():
    r = zeta_em(0.0, 0, 1e-10)
    assert abs(r.value - (-0.5)) <= 1e-9
    assert abs(zeta_via_eta(0.0) - (-0.5)) < 1e-10


def test_continuation_matches_eta_oracle():
    for s in [0.5, -0.5, complex(0.25, 2.0), complex(-0.5, 5.0), complex(0.1, -3.0)]:
        r = zeta_em(s, 0, 1e-10)
        ref = zeta_via_eta(s)
        assert abs(r.value - ref) <= r.abs_error + 1e-9, s


def test_deriv_at_4_16i_against_term_sum():
    r = zeta_em(complex(4, 16), 1, 1e-10)
    ref, tail = direct_zeta_deriv(complex(4, 16), 5000)
    assert abs(r.value - ref) <= r.abs_error + tail
    assert abs(r.value) >= 0.012


def test_pole_and_domain_errors():
    with pytest.raises(PoleError):
        zeta_em(1.0, 0, 1e-10)
    with pytest.raises(PreconditionError):
        zeta_em(-1.5, 0, 1e-10)
    with pytest.raises(PreconditionError):
        zeta_em(2.0, 2, 1e-10)


def test_conjugate_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(100):
        s = complex(rng.uniform(-0.8, 6.0), rng.uniform(-40.0, 40.0))
        if abs(s - 1.0) < 0.1:
            continue
        a = zeta_em(s, 0, 1e-10)
        b = zeta_em(s.conjugate(), 0, 1e-10)
        assert abs(b.value - a.value.conjugate()) <= 2 * (a.abs_error + b.abs_error)


def test_error_bound_honesty_against_boosted_oracle():
    # Same algorithm pushed to a tighter target in double-double mode serves
    # as the reference; reported bounds must cover the discrepancy.
    rng = np.random.default_rng(23)
    pts = []
    while len(pts) < 1000:
        s = complex(rng.uniform(-0.9, 8.0), rng.uniform(-200.0, 200.0))
        if abs(s - 1.0) > 0.2:
            pts.append(s)
    arr = np.array(pts)
    vals, errs, _ = zeta_em_batch(arr, 0, 1e-8, mode="auto", allow_floor=True)
    ref, referr, _ = zeta_em_batch(arr, 0, 1e-12, mode="double_double", allow_floor=True)
    bad = np.abs(vals - ref) > errs + referr
    assert not bad.any(), arr[bad][:5]


def test_precision_exhaustion_is_loud():
    with pytest.raises(PrecisionExhausted):
        zeta_em(complex(0.51, 1e6), 0, 1e-14, mode="double")


def test_log_zeta_series_at_4():
    r = log_zeta_series(4.0, 1e-12)
    assert 0.0426 <= abs(r.value) <= 0.0824
    assert cmath.isclose(
        cmath.exp(r.value), zeta_em(4.0, 0, 1e-12).value, abs_tol=1e-10
    )


def test_log_zeta_series_leading_term_dominates():
    r = log_zeta_series(50.0, 1e-22)
    lead = 2.0**-50
    # Residual series beyond the leading term is ~1.5e-9 of it; the computed
    # value must sit on the leading term at that scale with tiny abs_error.
    assert abs(r.value - lead) < 3e-9 * lead
    assert r.abs_error < 1e-14 * lead * 10


def test_log_zeta_series_precondition():
    with pytest.raises(PreconditionError):
        log_zeta_series(1.2, 1e-10)


def test_exp_log_consistency_random():
    rng = np.random.default_rng(5)
    count = 0
    while count < 100:
        sigma = rng.uniform(2.0, 8.0)
        t = rng.uniform(-100.0, 100.0)
        s = complex(sigma, t)
        target = max(1e-12, 4.0 * 20000.0 ** (1.0 - sigma) / (sigma - 1.0))
        lz = log_zeta_series(s, target)
        z = zeta_em(s, 0, 1e-12)
        combined = lz.abs_error * abs(z.value) * 2.72 + z.abs_error
        assert abs(cmath.exp(lz.value) - z.value) <= combined + 1e-12
        count += 1


def test_tracked_anchor_consistency():
    for t in (5.0, 30.0):
        a = log_zeta_tracked(4.0, t, 1e-10)
        b = log_zeta_series(complex(4.0, t), 1e-10)
        assert abs(a.value - b.value) <= a.abs_error + b.abs_error


def test_tracked_strip_identity():
    w = log_zeta_tracked(0.54, 30.0, 1e-9)
    z = zeta_em(complex(0.54, 30.0), 0, 1e-12)
    assert abs(cmath.exp(w.value) - z.value) <= (w.abs_error * abs(z.value) * 2.72 + z.abs_error) + 1e-9


def test_tracked_branch_consistency_right_half():
    rng = np.random.default_rng(3)
    for _ in range(50):
        sigma = rng.uniform(1.5, 6.0)
        t = rng.uniform(1.0, 300.0)
        a = log_zeta_tracked(sigma, t, 1e-9)
        series_target = max(1e-11, 4.0 * 20000.0 ** (1.0 - sigma) / (sigma - 1.0))
        b = log_zeta_series(complex(sigma, t), series_target)
        assert abs(a.value - b.value) <= a.abs_error + b.abs_error + 1e-10


def _first_zero_ordinate_oracle() -> float:
    # Independent sampling oracle: coarse scan of |zeta(1/2+it)| for the
    # first dip, then golden-section refinement of the minimum.
    ts = np.linspace(13.0, 15.0, 400)
    vals = [abs(zeta_em(complex(0.5, float(t)), 0, 1e-9).value) for t in ts]
    j = int(np.argmin(vals))
    a, b = float(ts[j - 1]), float(ts[j + 1])
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc = abs(zeta_em(complex(0.5, c), 0, 1e-10).value)
    fd = abs(zeta_em(complex(0.5, d), 0, 1e-10).value)
    while b - a > 1e-9:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = abs(zeta_em(complex(0.5, c), 0, 1e-10).value)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = abs(zeta_em(complex(0.5, d), 0, 1e-10).value)
    return 0.5 * (a + b)


def test_tracked_near_first_zero_is_contained():
    t_zero = _first_zero_ordinate_oracle()
    assert 14.10 < t_zero < 14.17
    assert abs(zeta_em(complex(0.5, t_zero), 0, 1e-10).value) < 1e-6
    try:
        r = log_zeta_tracked(0.51, t_zero, 1e-8)
        assert math.isfinite(r.value.real) and math.isfinite(r.value.imag)
    except BranchObstruction as exc:
        assert abs(exc.location.imag - t_zero) < 0.5
