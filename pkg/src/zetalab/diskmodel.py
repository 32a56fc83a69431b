"""Certified local polynomial models of zeta on disks about 4 + it.

The inequality audits evaluate zeta (and its tracked logarithm) thousands of
times on disks of radius ~3.5 around 4 + it.  A direct Euler-Maclaurin call
needs Theta(t) terms per point, which is hopeless inside quadratures at
t ~ 1e6.  Instead each audited height builds one Taylor model:

* sample zeta at P points of a circle of radius R_s > r_use (one batched
  Euler-Maclaurin evaluation),
* recover Taylor coefficients by FFT,
* certify the model with explicit aliasing + truncation + sample-error
  bounds, using a rigorous triangle-inequality majorant M on a slightly
  larger circle R_maj.

Every downstream evaluation inside |z| <= r_use is then a ~200-term
polynomial at certified accuracy, and the derivative series comes for free.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import BranchObstruction, ConvergenceError, PreconditionError
from .nevanlinna import DiskSpec, FunctionHandle, PointList
from .zeta import (
    EvalResult,
    _bernoulli_over_fact,
    _choose_params,
    _em_tail_bounds,
    log_zeta_series,
    zeta_em_batch,
    ZERO_FLOOR,
)

POLYVAL = np.polynomial.polynomial.polyval


def zeta_abs_bound(center: complex, radius: float) -> float:
    """Rigorous upper bound for |zeta| on the circle |s - center| = radius.

    Triangle inequality applied to the Euler-Maclaurin expansion with the
    worst sigma and |s| on the circle; crude (an order of magnitude high is
    normal) but fully certified, which is all the Taylor-model tail needs.
    """
    sigma_min = center.real - radius
    if sigma_min <= -1.0:
        raise PreconditionError("majorant circle leaves the supported range Re s > -1")
    dist_pole = abs(center - 1.0) - radius
    if dist_pole <= 0:
        raise PreconditionError("majorant circle touches the pole at s = 1")
    s_abs_max = abs(center) + radius
    _, n, m = _choose_params(round(sigma_min, 12), round(s_abs_max + 1e-9, 6), 0.5, 0)
    narr = np.arange(1, n, dtype=float)
    main = float(np.sum(narr ** (-sigma_min)))
    bound = main + n ** (1.0 - sigma_min) / dist_pole + n ** (-sigma_min) / 2.0
    prod = 1.0
    j = 0
    for k in range(1, m + 1):
        while j <= 2 * k - 2:
            prod *= (s_abs_max + j) / n
            j += 1
        bound += abs(_bernoulli_over_fact(k)) * prod * n ** (-sigma_min)
    rem0, _ = _em_tail_bounds(sigma_min, s_abs_max, n, m)
    return bound + float(rem0)


class ZetaDiskModel:
    """Polynomial surrogate for z -> zeta(z + 4 + it) on |z| <= r_use."""

    def __init__(
        self,
        t: float,
        r_use: float = 3.5,
        samples: int | None = None,
        mode: str = "auto",
        sample_target: float = 1e-12,
    ):
        if samples is None:
            # Above ~2e4 the sample cost dominates and the aliasing term is
            # negligible next to the rounding floor, so half the nodes do.
            samples = 512 if abs(t) > 2.0e4 else 1024
        center = complex(4.0, t)
        dist_pole = abs(center - 1.0)
        r_maj = min(4.9, 0.95 * dist_pole)
        # Sampling well inside the majorant circle kills aliasing and keeps
        # sigma_min (hence the rounding floor sum_n n^{-sigma_min}) moderate.
        r_s = r_maj - 0.7
        if r_use > r_s - 0.6:
            raise PreconditionError(
                f"r_use={r_use} too large for a certified model at t={t} "
                f"(sampling radius {r_s:.3f})"
            )
        self.t = float(t)
        self.center = center
        self.r_use = float(r_use)
        self.r_s = r_s
        self.r_maj = r_maj
        self.samples = int(samples)

        phi = 2.0 * math.pi * np.arange(samples) / samples
        s_nodes = center + r_s * np.exp(1j * phi)
        # Requesting truncation far below the floating-point floor only
        # buys terms, not accuracy; relax the target to the floor estimate.
        sig_min = center.real - r_s
        _, n_est, _ = _choose_params(
            round(sig_min, 12), round(abs(center) + r_s + 1e-9, 6), sample_target, 0
        )
        if sig_min < 1.0:
            floor_est = 1.5e-14 * n_est ** (1.0 - sig_min) / (1.0 - sig_min)
            sample_target = max(sample_target, floor_est / 2.0)
        vals, errs, prov = zeta_em_batch(
            s_nodes, 0, sample_target, mode=mode, allow_floor=True
        )
        self.sample_error = float(np.max(errs))
        self.sample_provenance = prov

        coef_full = np.fft.fft(vals) / samples
        self.m_maj = zeta_abs_bound(center, r_maj)

        # Aliasing: computed coefficient k picks up a_{k+jP} R_s^{jP}.
        u = (r_s / r_maj) ** samples
        self.alias_w = u / (1.0 - u)

        k_best, err_best = None, math.inf
        for k_try in range(32, samples // 2, 16):
            e = self._value_error_for(k_try, self.r_use)
            if e < err_best:
                k_best, err_best = k_try, e
        self.degree = k_best
        self.coef = coef_full[: self.degree] * self.r_s ** (-np.arange(self.degree))
        self.dcoef = self.coef[1:] * np.arange(1, self.degree)
        self._abs_coef = np.abs(self.coef)
        self.cert_value = err_best
        self.cert_deriv = self._deriv_error_for(self.degree, self.r_use)
        self._log_cache: dict = {}

    # -- certified bounds ---------------------------------------------------
    def _value_error_for(self, degree: int, r) -> float:
        x = np.minimum(np.asarray(r, dtype=float), self.r_use) / self.r_maj
        geo = 1.0 / (1.0 - x)
        alias = self.m_maj * self.alias_w * geo
        trunc = self.m_maj * x**degree * geo
        samp = self.sample_error / (1.0 - np.asarray(r) / self.r_s)
        return alias + trunc + samp

    def _deriv_error_for(self, degree: int, r) -> float:
        x = np.minimum(np.asarray(r, dtype=float), self.r_use) / self.r_maj
        geo2 = 1.0 / (1.0 - x) ** 2
        alias = self.m_maj * self.alias_w / self.r_maj * geo2
        trunc = (
            self.m_maj
            / self.r_maj
            * x ** (degree - 1)
            * (degree * (1.0 - x) + x)
            * geo2
        )
        samp = (self.sample_error / self.r_s) / (1.0 - np.asarray(r) / self.r_s) ** 2
        return alias + trunc + samp

    def value_error(self, r) -> np.ndarray:
        base = self._value_error_for(self.degree, r)
        round_term = 5e-15 * np.polynomial.polynomial.polyval(
            np.minimum(np.abs(r), self.r_use), self._abs_coef
        )
        return base + round_term

    def deriv_error(self, r) -> np.ndarray:
        return self._deriv_error_for(self.degree, r) + 5e-15 * self.degree**2

    # -- evaluation ----------------------------------------------------------
    def _check_inside(self, z: np.ndarray):
        r = np.abs(z)
        if np.any(r > self.r_use * (1.0 + 1e-9)):
            raise PreconditionError(
                f"model for t={self.t} evaluated at |z|={float(np.max(r)):.4f} "
                f"> r_use={self.r_use}"
            )
        return r

    def values(self, z: np.ndarray):
        z = np.asarray(z, dtype=complex)
        r = self._check_inside(z)
        return POLYVAL(z, self.coef), self.value_error(r)

    def derivs(self, z: np.ndarray):
        z = np.asarray(z, dtype=complex)
        r = self._check_inside(z)
        vals = POLYVAL(z, self.dcoef)
        errs = np.broadcast_to(self.deriv_error(r), vals.shape).copy()
        return vals, errs

    # -- handles --------------------------------------------------------------
    def handle(self, radius: float | None = None) -> FunctionHandle:
        """FunctionHandle for z -> zeta(z + 4 + it) on |z| <= radius."""
        rad = self.r_use if radius is None else min(radius, self.r_use)

        def ev(z, _target):
            return self.values(z)

        def dv(z, _target):
            return self.derivs(z)

        return FunctionHandle(
            evaluator=ev,
            domain=DiskSpec(0j, rad),
            derivative=dv,
            declared_poles=PointList([]),
            label=f"zeta-shift[t={self.t:g}]",
        )

    def log_handle(self, radius: float | None = None) -> FunctionHandle:
        """Tracked log zeta(z + 4 + it): single-valued on a zero-free disk.

        Callers must have verified the disk is zero-free (the audits do this
        with a winding count and convert failures into findings); tracking
        itself raises BranchObstruction if it walks into |zeta| < 1e-8."""
        rad = self.r_use if radius is None else min(radius, self.r_use)

        def ev(z, _target):
            return self.log_values(z)

        def dv(z, _target):
            v, e = self.values(z)
            d, de = self.derivs(z)
            av = np.abs(v)
            safe = np.maximum(av - e, 1e-300)
            val = d / v
            err = de / safe + np.abs(d) * e / (safe * np.maximum(av, 1e-300))
            return val, err

        return FunctionHandle(
            evaluator=ev,
            domain=DiskSpec(0j, rad),
            derivative=dv,
            declared_poles=PointList([]),
            label=f"log-zeta-shift[t={self.t:g}]",
        )

    # -- tracked logarithm -----------------------------------------------------
    def _anchor(self):
        if "anchor" not in self._log_cache:
            z_a = complex(min(2.0, 0.9 * self.r_use), 0.0)
            w_a = log_zeta_series(self.center + z_a, 1e-12)
            self._log_cache["anchor"] = (z_a, w_a.value, w_a.abs_error)
        return self._log_cache["anchor"]

    def log_values(self, z: np.ndarray):
        """Branch of log zeta continued from the series anchor along segments.

        The disk is simply connected; on a zero-free disk the continuation is
        path independent, so straight segments from the anchor define the
        same single-valued branch everywhere."""
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        z_a, w_a, a_err = self._anchor()
        steps = 24
        while True:
            tau = np.linspace(0.0, 1.0, steps + 1).reshape(-1, 1)
            path = z_a + tau * (flat[None, :] - z_a)
            vals, errs = self.values(path.reshape(-1))
            vals = vals.reshape(steps + 1, -1)
            errs = errs.reshape(steps + 1, -1)
            amod = np.abs(vals)
            if amod.min() < ZERO_FLOOR:
                k, i = np.unravel_index(int(np.argmin(amod)), amod.shape)
                raise BranchObstruction(
                    f"zeta modulus {amod[k, i]:.2e} below threshold while tracking",
                    location=complex(path[k, i]),
                    modulus=float(amod[k, i]),
                )
            w = np.empty_like(vals)
            w[0] = w_a
            ok = True
            base = np.log(np.abs(vals)) + 1j * np.angle(vals)
            for k in range(1, steps + 1):
                shift = np.round((w[k - 1].imag - base[k].imag) / (2.0 * math.pi))
                w[k] = base[k] + 2j * math.pi * shift
                if np.max(np.abs(w[k] - w[k - 1])) >= math.pi / 2:
                    ok = False
                    break
            if ok:
                final_err = errs[-1] / np.maximum(amod[-1] - errs[-1], 1e-300)
                return w[-1].reshape(z.shape), (final_err + a_err + 1e-15).reshape(
                    z.shape
                )
            steps *= 2
            if steps > 3072:
                raise ConvergenceError("branch tracking inside the disk did not settle")
