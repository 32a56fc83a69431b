"""Riemann zeta, its derivative, and log-zeta with explicit absolute error bounds.

Two evaluation strategies share one batch kernel:

* plain Dirichlet truncation with an integral tail bound (fast for
  Re s comfortably above 1),
* Euler-Maclaurin summation with a periodized-Bernoulli remainder bound
  (valid down to Re s > -1, the supported continuation range).

Every result carries a certified absolute error: truncation remainder plus
an explicit floating-point accumulation model.  For large |t| the oscillatory
phases t*log(n) are reduced modulo 2*pi in double-double arithmetic so the
rounding floor stays flat in t (the ``double_double`` mode; ``auto`` switches
it on above |t| = 1e4 or whenever plain doubles could not meet the target).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np
from mpmath import mp

from .arith import default_table
from .doubledouble import LOG_TABLE, reduce_phase
from .errors import (
    BranchObstruction,
    ConvergenceError,
    PoleError,
    PreconditionError,
    PrecisionExhausted,
)

N_CAP = 1 << 21
M_MAX = 40
DD_THRESHOLD = 1.0e4
# Per-term/accumulation rounding model; validated by the oracle honesty suite.
C_SUM = 1.5e-14
C_PHASE = 5.0e-16
ZERO_FLOOR = 1.0e-8  # |zeta| below this on a tracking path counts as an obstruction


@dataclass(frozen=True)
class EvalResult:
    """A complex value with a guaranteed absolute error bound."""

    value: complex
    abs_error: float
    provenance: Mapping = field(default_factory=dict)

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise PreconditionError("non-finite value in EvalResult")
        if not (math.isfinite(self.abs_error) and self.abs_error >= 0):
            raise PreconditionError("abs_error must be finite and nonnegative")


@lru_cache(maxsize=None)
def _bernoulli_over_fact(k: int) -> float:
    """B_{2k} / (2k)! via 2*zeta(2k)/(2*pi)^{2k}, stable for any k."""
    with mp.workdps(40):
        v = 2 * mp.zeta(2 * k) / (2 * mp.pi) ** (2 * k)
    return float(v) * (1.0 if k % 2 == 1 else -1.0)


@lru_cache(maxsize=None)
def _two_zeta_odd(m: int) -> float:
    with mp.workdps(30):
        return float(2 * mp.zeta(m))


def _em_tail_bounds(sigma, s_abs, n: int, m_order: int):
    """Remainder bounds (value, derivative) after m_order correction terms.

    Uses |periodized B_{2m+1}| <= 2*zeta(2m+1)*(2m+1)!/(2*pi)^{2m+1} and
    the triangle inequality on the remainder integral; all factors are kept
    in the scaled form (|s|+j)/(2*pi*n) so nothing overflows.
    """
    sigma = np.asarray(sigma, dtype=float)
    s_abs = np.asarray(s_abs, dtype=float)
    two_pi_n = 2.0 * math.pi * n
    with np.errstate(over="ignore", invalid="ignore"):
        g0 = np.ones_like(s_abs)
        g1 = np.zeros_like(s_abs)
        for j in range(2 * m_order + 1):
            f = (s_abs + j) / two_pi_n
            g1 = g1 * f + g0 / two_pi_n
            g0 = g0 * f
        zk = _two_zeta_odd(2 * m_order + 1)
        denom = sigma + 2 * m_order
        scale = zk * np.power(float(n), 1.0 - sigma)
        logn = math.log(n)
        rem0 = scale * g0 / denom
        rem1 = scale * (g1 / denom + g0 * (logn / denom + 1.0 / denom**2))
        rem0 = np.where(np.isfinite(rem0), rem0, np.inf)
        rem1 = np.where(np.isfinite(rem1), rem1, np.inf)
    return rem0, rem1


_N_LADDER = []
_n = 16
while _n <= N_CAP:
    _N_LADDER.append(_n)
    _N_LADDER.append(int(_n * 1.5))
    _n *= 2
_N_LADDER = sorted(set(n for n in _N_LADDER if n <= N_CAP))


@lru_cache(maxsize=4096)
def _choose_params(sigma_min: float, s_abs_max: float, target: float, order: int):
    """Pick (strategy, N, M) meeting `target` truncation error at lowest cost."""
    best = None
    if sigma_min > 1.1:
        # Direct truncation: tail <= N^{1-sigma}/(sigma-1) (value) and
        # N^{1-sigma}*(log N/(sigma-1) + 1/(sigma-1)^2) (derivative).
        a = sigma_min - 1.0
        n = max(8, int(math.exp(math.log(2.0 / (target * a)) / a)) + 1)
        while n <= N_CAP:
            tail = n ** (1.0 - sigma_min) / a
            if order:
                tail = n ** (1.0 - sigma_min) * (math.log(n) / a + 1.0 / a**2)
            if tail <= target / 2:
                best = ("dirichlet", n, 0)
                break
            n = int(n * 1.3) + 1
    for n in _N_LADDER:
        if best is not None and n >= best[1]:
            break
        for m in range(1, M_MAX + 1):
            rem0, rem1 = _em_tail_bounds(sigma_min, s_abs_max, n, m)
            rem = float(rem1 if order else rem0)
            if rem <= target / 2:
                best = ("em", n, m)
                break
        if best is not None and best[0] == "em":
            break
    if best is None:
        raise PrecisionExhausted(
            f"no cutoff <= {N_CAP} meets target {target} at sigma >= {sigma_min}"
        )
    return best


def _resolve_mode(mode: str, t_max: float, target: float, n: int, a_estimate: float) -> str:
    if mode not in ("auto", "double", "double_double"):
        raise PreconditionError(f"unknown precision mode {mode!r}")
    if mode != "auto":
        return mode
    phase_noise = C_PHASE * t_max * math.log(max(n, 2)) * a_estimate
    if t_max > DD_THRESHOLD or phase_noise > target / 4:
        return "double_double"
    return "double"


def _sum_powers(s: np.ndarray, n_terms: int, mode: str, order: int, t_ref: float):
    """Batched sum_{n=1}^{n_terms} n^{-s} with companion absolute sums.

    Returns (S0, S1, A0, A1, A2): the value sum, the log-weighted derivative
    sum (-sum log n * n^{-s}), and absolute sums weighted by log^0, log^1,
    log^2 for the error model.

    In double-double mode the phase t*log(n) is split as
    t_ref*log(n) + (t - t_ref)*log(n): the first part is reduced mod 2*pi in
    double-double once per term (1-D work), the small offset part is exact
    enough in plain doubles, so the P x N matrix stays in cheap double ops.
    """
    p = s.shape[0]
    sig = s.real.reshape(p, 1)
    t = s.imag.reshape(p, 1)
    dd = mode == "double_double"
    if dd:
        LOG_TABLE.ensure(n_terms)
        dt = t - t_ref
    s0 = np.zeros(p, dtype=complex)
    s1 = np.zeros(p, dtype=complex)
    a0 = np.zeros(p)
    a1 = np.zeros(p)
    a2 = np.zeros(p)
    block = max(256, min(n_terms, (1 << 22) // max(p, 1)))
    for lo in range(1, n_terms + 1, block):
        hi = min(lo + block, n_terms + 1)
        if dd:
            lh, ll = LOG_TABLE.slices(lo, hi)
            lw = lh + ll
            ph = reduce_phase(t_ref, lh, ll)[None, :] + dt * lw[None, :]
        else:
            lw = np.log(np.arange(lo, hi, dtype=float))
            ph = t * lw[None, :]
        mag = np.exp(-sig * lw[None, :])
        cos = np.cos(ph)
        sin = np.sin(ph)
        term = mag * cos - 1j * (mag * sin)
        s0 += term.sum(axis=1)
        a0 += mag.sum(axis=1)
        wmag = mag * lw[None, :]
        a1 += wmag.sum(axis=1)
        if order:
            s1 -= (term * lw[None, :]).sum(axis=1)
            a2 += (wmag * lw[None, :]).sum(axis=1)
    return s0, s1, a0, a1, a2


def _scalar_pow(s: np.ndarray, n: int, mode: str):
    """n^{-s} for a batch of s, with double-double phase when requested."""
    if mode == "double_double":
        lh, ll = LOG_TABLE.at(n)
        ph = reduce_phase(s.imag, lh, ll)
        logn = lh + ll
    else:
        logn = math.log(n)
        ph = s.imag * logn
    mag = np.exp(-s.real * logn)
    return mag * np.cos(ph) - 1j * mag * np.sin(ph), logn


def zeta_em_batch(
    s: np.ndarray,
    derivative_order: int = 0,
    target_abs_err: float = 1e-10,
    mode: str = "auto",
    allow_floor: bool = False,
):
    """Evaluate zeta (or zeta') at every point of `s` with certified errors.

    Returns (values, abs_errors, provenance).  All points share one cutoff
    and correction order chosen from the worst point of the batch; the
    reported error bounds are per-point.  With ``allow_floor`` the rounding
    floor may exceed the target (the bound stays honest); otherwise
    PrecisionExhausted is raised when the target cannot be met.
    """
    s = np.asarray(s, dtype=complex)
    if s.ndim == 0:
        s = s.reshape(1)
    if derivative_order not in (0, 1):
        raise PreconditionError("derivative_order must be 0 or 1")
    if target_abs_err <= 0:
        raise PreconditionError("target_abs_err must be positive")
    sigma = s.real
    if np.any(sigma <= -1.0):
        raise PreconditionError("supported continuation range is Re s > -1")
    if np.any(np.abs(s - 1.0) < 1e-12):
        raise PoleError("zeta has a pole at s = 1")

    sigma_min = float(sigma.min())
    s_abs = np.abs(s)
    s_abs_max = float(s_abs.max())
    t_max = float(np.abs(s.imag).max())
    strategy, n_cut, m_order = _choose_params(
        round(sigma_min, 12), round(s_abs_max + 1e-9, 6), target_abs_err, derivative_order
    )
    if sigma_min > 1.0:
        a_est = 1.0 + 1.0 / (sigma_min - 1.0)
    else:
        a_est = n_cut ** (1.0 - sigma_min) / max(1e-3, 1.0 - sigma_min)
    mode = _resolve_mode(mode, t_max, target_abs_err, n_cut, a_est)
    t_ref = float(s.imag[0])

    if strategy == "dirichlet":
        s0, s1, a0, a1, a2 = _sum_powers(s, n_cut, mode, derivative_order, t_ref)
        a = sigma - 1.0
        trunc0 = n_cut ** (1.0 - sigma) / a
        trunc = (
            n_cut ** (1.0 - sigma) * (math.log(n_cut) / a + 1.0 / a**2)
            if derivative_order
            else trunc0
        )
        value = s1 if derivative_order else s0
        abs_sum = a1 if derivative_order else a0
        phase_w = a2 if derivative_order else a1
    else:
        s0, s1, a0, a1, a2 = _sum_powers(s, n_cut - 1, mode, derivative_order, t_ref)
        npow, logn = _scalar_pow(s, n_cut, mode)
        x = npow * float(n_cut)  # N^{1-s}
        sm1 = s - 1.0
        i_term = x / sm1
        half = npow / 2.0
        value0 = s0 + i_term + half
        abs_extra = np.abs(i_term) + np.abs(half)
        if derivative_order:
            i_d = -x * (logn / sm1 + 1.0 / sm1**2)
            half_d = -logn * npow / 2.0
            value1 = s1 + i_d + half_d
            abs_extra_d = np.abs(i_d) + np.abs(half_d)
        prod = np.ones_like(s)
        dprod = np.zeros_like(s)
        j = 0
        for k in range(1, m_order + 1):
            while j <= 2 * k - 2:
                f = (s + j) / n_cut
                dprod = dprod * f + prod / n_cut
                prod = prod * f
                j += 1
            gk = _bernoulli_over_fact(k)
            t_k = gk * prod * npow
            value0 = value0 + t_k
            abs_extra = abs_extra + np.abs(t_k)
            if derivative_order:
                t_kd = gk * (dprod - prod * logn) * npow
                value1 = value1 + t_kd
                abs_extra_d = abs_extra_d + np.abs(t_kd)
        rem0, rem1 = _em_tail_bounds(sigma, s_abs, n_cut, m_order)
        if derivative_order:
            value = value1
            trunc = rem1
            abs_sum = a1 + abs_extra_d
            phase_w = a2 + abs_extra_d * logn
        else:
            value = value0
            trunc = rem0
            abs_sum = a0 + abs_extra
            phase_w = a1 + abs_extra * logn

    rounding = C_SUM * abs_sum
    if mode == "double":
        rounding = rounding + C_PHASE * np.abs(s.imag) * phase_w
    else:
        # Only the per-point offset from the reference height goes through
        # plain-double phase arithmetic.
        rounding = rounding + C_PHASE * np.abs(s.imag - t_ref) * phase_w
    abs_err = np.asarray(trunc + rounding, dtype=float)
    if not allow_floor and float(abs_err.max()) > target_abs_err:
        raise PrecisionExhausted(
            f"achievable error {float(abs_err.max()):.3e} exceeds target "
            f"{target_abs_err:.3e} (rounding floor at working precision)",
            best_error=float(abs_err.max()),
        )
    prov = {
        "strategy": strategy,
        "cutoff": n_cut,
        "order": m_order,
        "mode": mode,
        "derivative_order": derivative_order,
    }
    return value, abs_err, prov


def zeta_em(
    s: complex,
    derivative_order: int = 0,
    target_abs_err: float = 1e-12,
    mode: str = "auto",
) -> EvalResult:
    """zeta(s) or zeta'(s) with a certified absolute error <= target.

    Supported domain: Re s > -1, s != 1.  Raises PrecisionExhausted when the
    target is below the working-precision floor rather than returning a
    silently optimistic bound.
    """
    values, errs, prov = zeta_em_batch(
        np.array([s], dtype=complex), derivative_order, target_abs_err, mode
    )
    return EvalResult(complex(values[0]), float(errs[0]), prov)


def log_zeta_series(
    s: complex,
    target_abs_err: float = 1e-12,
    mode: str = "auto",
    min_sigma_margin: float = 0.5,
) -> EvalResult:
    """Principal-branch log zeta(s) from the prime-power Dirichlet series.

    Requires Re s >= 1 + min_sigma_margin so the integral tail bound
    sum_{n>N} n^{-Re s} applies at a useful rate.  The imaginary part of the
    result is below pi in modulus for Re s >= 1.5, so exp of the result is
    exactly zeta(s): this is the branch anchored to 0 at Re s -> infinity.
    """
    s = complex(s)
    sigma = s.real
    if sigma < 1.0 + min_sigma_margin:
        raise PreconditionError(
            f"log_zeta_series needs Re s >= {1 + min_sigma_margin}, got {sigma}"
        )
    a = sigma - 1.0
    n_cut = max(4, int(math.exp(math.log(2.0 / (target_abs_err * a)) / a)) + 1)
    if n_cut > N_CAP:
        raise PrecisionExhausted(
            f"log-zeta tail needs cutoff {n_cut} > {N_CAP} at Re s = {sigma}",
            best_error=float(N_CAP ** (1.0 - sigma) / a),
        )
    table = default_table(max(n_cut, 64))
    t = s.imag
    mode = _resolve_mode(mode, abs(t), target_abs_err, n_cut, 1.0)
    dd = mode == "double_double"
    if dd:
        LOG_TABLE.ensure(n_cut)
    total = 0.0 + 0.0j
    abs_sum = 0.0
    phase_w = 0.0
    primes = table.primes
    k = 1
    while 2**k <= n_cut:
        p_k = primes[primes <= int(n_cut ** (1.0 / k) + 1e-9)].astype(np.int64)
        p_k = p_k[p_k**k <= n_cut]
        if p_k.size == 0:
            break
        n_arr = p_k**k
        if dd:
            lh, ll = LOG_TABLE.gather(n_arr)
            ph = reduce_phase(t, lh, ll)
            logn = lh + ll
        else:
            logn = np.log(n_arr.astype(float))
            ph = t * logn
        mag = np.exp(-sigma * logn) / k
        total += complex(np.sum(mag * np.cos(ph)), -np.sum(mag * np.sin(ph)))
        abs_sum += float(np.sum(mag))
        phase_w += float(np.sum(mag * logn))
        k += 1
    tail = n_cut ** (1.0 - sigma) / a
    err = tail + C_SUM * abs_sum
    if not dd:
        err += C_PHASE * abs(t) * phase_w
    prov = {"strategy": "prime-power-series", "cutoff": n_cut, "mode": mode}
    return EvalResult(total, float(err), prov)


def _log_branch_step(w_prev: complex, v: complex) -> complex:
    """Branch of log(v) nearest in imaginary part to w_prev."""
    base = cmath_log(v)
    k = round((w_prev.imag - base.imag) / (2.0 * math.pi))
    return complex(base.real, base.imag + 2.0 * math.pi * k)


def cmath_log(v: complex) -> complex:
    return complex(math.log(abs(v)), math.atan2(v.imag, v.real))


def log_zeta_tracked(
    sigma: float,
    t: float,
    target_abs_err: float = 1e-10,
    mode: str = "auto",
    anchor_sigma: float = 6.0,
    max_halvings: int = 40,
) -> EvalResult:
    """log zeta(sigma + it) on the branch continued from the series anchor.

    Walks the horizontal segment from (anchor_sigma, t) to (sigma, t),
    halving the step until each move changes log zeta by less than pi/2 so
    the branch choice is unambiguous.  A zero of zeta on or near the path
    (|zeta| < 1e-8) raises BranchObstruction carrying the location.
    """
    if t < 1.0:
        raise PreconditionError(f"log_zeta_tracked requires t >= 1, got {t}")
    if sigma <= 0.5:
        raise PreconditionError(f"log_zeta_tracked requires sigma > 1/2, got {sigma}")
    if sigma >= 1.5 and sigma >= anchor_sigma:
        return log_zeta_series(complex(sigma, t), target_abs_err, mode)

    anchor = log_zeta_series(complex(anchor_sigma, t), target_abs_err / 2, mode)
    w = anchor.value
    steps = 0

    def eval_point(sig: float) -> EvalResult:
        return zeta_em(complex(sig, t), 0, max(1e-13, target_abs_err / 8), mode)

    def advance(sig_a: float, w_a: complex, sig_b: float, depth: int) -> complex:
        nonlocal steps
        r = eval_point(sig_b)
        steps += 1
        if abs(r.value) < ZERO_FLOOR:
            raise BranchObstruction(
                f"zeta modulus {abs(r.value):.2e} below threshold on tracking path",
                location=complex(sig_b, t),
                modulus=abs(r.value),
            )
        w_b = _log_branch_step(w_a, r.value)
        if abs(w_b - w_a) < math.pi / 2:
            return w_b
        if depth >= max_halvings:
            raise ConvergenceError(
                f"branch tracking step at sigma={sig_b} did not stabilize"
            )
        mid = 0.5 * (sig_a + sig_b)
        w_m = advance(sig_a, w_a, mid, depth + 1)
        return advance(mid, w_m, sig_b, depth + 1)

    sig_now = anchor_sigma
    n_coarse = max(4, int(abs(anchor_sigma - sigma) / 0.5) + 1)
    grid = np.linspace(anchor_sigma, sigma, n_coarse + 1)[1:]
    for sig_next in grid:
        w = advance(sig_now, w, float(sig_next), 0)
        sig_now = float(sig_next)

    final = eval_point(sigma)
    ratio = final.abs_error / max(abs(final.value) - final.abs_error, 1e-300)
    err = ratio + 1e-15
    prov = {
        "strategy": "branch-tracking",
        "anchor_sigma": anchor_sigma,
        "steps": steps,
        "anchor_error": anchor.abs_error,
    }
    return EvalResult(w, float(err), prov)
