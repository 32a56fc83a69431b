"""Ready-made FunctionHandles: elementary test functions and zeta shifts."""

from __future__ import annotations

import math

import numpy as np

from .diskmodel import ZetaDiskModel
from .errors import PreconditionError
from .nevanlinna import DiskSpec, FunctionHandle, PointList

REL_EPS = 5e-15  # error model for exactly-evaluable callables


def callable_handle(
    fn,
    domain: DiskSpec,
    dfn=None,
    rel_err: float = REL_EPS,
    declared_poles: PointList | None = None,
    label: str = "",
) -> FunctionHandle:
    """Wrap a vectorized numpy-compatible callable with a relative error model."""

    def ev(z, _target):
        v = np.asarray(fn(z), dtype=complex)
        return v, rel_err * (np.abs(v) + 1.0)

    dv = None
    if dfn is not None:

        def dv(z, _target):  # noqa: F811
            d = np.asarray(dfn(z), dtype=complex)
            return d, rel_err * (np.abs(d) + 1.0)

    return FunctionHandle(ev, domain, dv, declared_poles, label)


def const_handle(c: complex, radius: float = 100.0) -> FunctionHandle:
    return callable_handle(
        lambda z: np.full_like(np.asarray(z, dtype=complex), c),
        DiskSpec(0j, radius),
        dfn=lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
        declared_poles=PointList([]),
        label=f"const[{c}]",
    )


def exp_handle(scale: complex = 1.0, radius: float = 50.0) -> FunctionHandle:
    return callable_handle(
        lambda z: scale * np.exp(z),
        DiskSpec(0j, radius),
        dfn=lambda z: scale * np.exp(z),
        declared_poles=PointList([]),
        label=f"{scale}*exp" if scale != 1.0 else "exp",
    )


def poly_from_roots(
    roots, lead: complex = 1.0, radius: float = 50.0, label: str = ""
) -> FunctionHandle:
    """Polynomial in product form with the exact product-rule derivative."""
    roots = [complex(r) for r in roots]
    deg = len(roots)

    def fn(z):
        z = np.asarray(z, dtype=complex)
        v = np.full(z.shape, complex(lead))
        for r in roots:
            v = v * (z - r)
        return v

    def dfn(z):
        z = np.asarray(z, dtype=complex)
        # d/dz prod (z - r_i) = sum_i prod_{j != i} (z - r_j), stable at roots.
        total = np.zeros(z.shape, dtype=complex)
        for i in range(deg):
            term = np.full(z.shape, complex(lead))
            for j, r in enumerate(roots):
                if j != i:
                    term = term * (z - r)
            total += term
        return total

    return FunctionHandle(
        evaluator=lambda z, t: (fn(z), REL_EPS * (deg + 1) * (np.abs(fn(z)) + 1.0)),
        domain=DiskSpec(0j, radius),
        derivative=lambda z, t: (dfn(z), REL_EPS * (deg + 1) * (np.abs(dfn(z)) + 1.0)),
        declared_poles=PointList([]),
        label=label or f"poly[deg={deg}]",
    )


def rational_handle(
    zeros, poles, scale: complex = 1.0, radius: float = 50.0, label: str = ""
) -> FunctionHandle:
    """scale * prod(z - a) / prod(z - b) with declared pole divisor."""
    zeros = [complex(a) for a in zeros]
    poles = [complex(b) for b in poles]

    def fn(z):
        z = np.asarray(z, dtype=complex)
        num = np.full(z.shape, complex(scale))
        for a in zeros:
            num = num * (z - a)
        den = np.ones(z.shape, dtype=complex)
        for b in poles:
            den = den * (z - b)
        return num / den

    def dfn(z):
        # Logarithmic derivative away from zeros; at a zero fall back to the
        # product-rule numerator derivative over the denominator.
        z = np.asarray(z, dtype=complex)
        v = fn(z)
        out = np.zeros(z.shape, dtype=complex)
        logd = np.zeros(z.shape, dtype=complex)
        near_zero = np.zeros(z.shape, dtype=bool)
        for a in zeros:
            d = z - a
            near = np.abs(d) < 1e-8
            near_zero |= near
            logd += np.where(near, 0.0, 1.0 / np.where(near, 1.0, d))
        for b in poles:
            logd -= 1.0 / (z - b)
        out = v * logd
        if near_zero.any():
            idx = np.flatnonzero(near_zero)
            for i in idx:
                zz = complex(z.flat[i])
                total = 0.0 + 0.0j
                for k in range(len(zeros)):
                    term = complex(scale)
                    for j, a in enumerate(zeros):
                        if j != k:
                            term *= zz - a
                    total += term
                den = 1.0 + 0.0j
                for b in poles:
                    den *= zz - b
                out.flat[i] = total / den
        return out

    n = len(zeros) + len(poles) + 1
    return FunctionHandle(
        evaluator=lambda z, t: (fn(z), REL_EPS * n * (np.abs(fn(z)) + 1.0)),
        domain=DiskSpec(0j, radius),
        derivative=lambda z, t: (dfn(z), 1e-12 * (np.abs(dfn(z)) + 1.0)),
        declared_poles=PointList.from_points([(b, 1) for b in poles]),
        label=label or f"rational[{len(zeros)}/{len(poles)}]",
    )


_MODEL_CACHE: dict = {}


def zeta_disk_model(t: float, r_use: float = 3.5, mode: str = "auto") -> ZetaDiskModel:
    """Shared per-height model cache (models are immutable once built)."""
    key = (round(float(t), 9), round(float(r_use), 9), mode)
    if key not in _MODEL_CACHE:
        if len(_MODEL_CACHE) > 64:
            _MODEL_CACHE.clear()
        _MODEL_CACHE[key] = ZetaDiskModel(float(t), r_use=r_use, mode=mode)
    return _MODEL_CACHE[key]


def zeta_shift_handle(t: float, radius: float = 3.5, mode: str = "auto") -> FunctionHandle:
    """z -> zeta(z + 4 + it) on |z| <= radius, backed by a certified model."""
    if radius > 3.55:
        raise PreconditionError("zeta shift handles support radius <= 3.55")
    return zeta_disk_model(t, max(radius, 3.5), mode).handle(radius)


def log_zeta_shift_handle(
    t: float, radius: float = 3.5, mode: str = "auto"
) -> FunctionHandle:
    """z -> tracked log zeta(z + 4 + it); single-valued on a zero-free disk."""
    if radius > 3.55:
        raise PreconditionError("log zeta shift handles support radius <= 3.55")
    return zeta_disk_model(t, max(radius, 3.5), mode).log_handle(radius)
