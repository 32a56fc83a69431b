"""Value-distribution functionals m, N, T for black-box analytic functions.

Circle integrals use the trapezoidal rule on the periodic parametrization
(spectrally accurate for analytic integrands) with node doubling as the
error estimator.  Divisors are passed in explicitly as PointLists; finding
them is the zero locator's job.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .arith import log_plus
from .errors import DivisorOnCircle, PreconditionError
from .zeta import EvalResult

# f'/(f-a) quadrature and log-circle-average share these budgets.
MIN_NODES = 64
MAX_NODES = 1 << 16
TINY_REL = 1e-12  # |f| below TINY_REL * scale flags a near-singular node
SMT_CONSTANT = 2328.0


@dataclass(frozen=True)
class DiskSpec:
    """A closed disk |z - center| <= radius."""

    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise PreconditionError(f"disk radius must be positive, got {self.radius}")

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return abs(z - self.center) <= self.radius * (1.0 + slack)

    def shrink(self, factor: float) -> "DiskSpec":
        return DiskSpec(self.center, self.radius * factor)


@dataclass
class PointList:
    """Zeros or poles with multiplicities, locations absolute."""

    entries: list  # list[tuple[complex, int]]

    def __post_init__(self):
        for loc, mult in self.entries:
            if mult < 1 or mult != int(mult):
                raise PreconditionError(f"multiplicity must be a positive integer, got {mult}")

    @classmethod
    def from_points(cls, points, merge_tol: float = 1e-8) -> "PointList":
        """Merge raw (location, multiplicity) pairs closer than merge_tol."""
        merged: list = []
        for loc, mult in points:
            for i, (mloc, mmult) in enumerate(merged):
                if abs(loc - mloc) < merge_tol:
                    merged[i] = (mloc, mmult + mult)
                    break
            else:
                merged.append((complex(loc), int(mult)))
        merged.sort(key=lambda e: (round(e[0].real, 12), round(e[0].imag, 12)))
        return cls(merged)

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def within(self, radius: float, center: complex = 0j) -> "PointList":
        return PointList([(p, m) for p, m in self.entries if abs(p - center) <= radius])

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


# evaluator signature: (points: complex ndarray, target_abs_err) -> (values, abs_errors)
BatchEval = Callable[[np.ndarray, float], tuple]


@dataclass
class FunctionHandle:
    """Black-box evaluator with per-call error bounds over a disk domain."""

    evaluator: BatchEval
    domain: DiskSpec
    derivative: Optional[BatchEval] = None
    declared_poles: Optional[PointList] = None  # None: unknown; empty: pole-free
    label: str = ""

    def eval(self, z: np.ndarray, target: float = 1e-12):
        vals, errs = self.evaluator(np.asarray(z, dtype=complex), target)
        return np.asarray(vals, dtype=complex), np.asarray(errs, dtype=float)

    def eval_scalar(self, z: complex, target: float = 1e-12) -> EvalResult:
        vals, errs = self.eval(np.array([z], dtype=complex), target)
        return EvalResult(complex(vals[0]), float(errs[0]), {"label": self.label})

    def deriv(self, z: np.ndarray, target: float = 1e-12):
        z = np.asarray(z, dtype=complex)
        if self.derivative is not None:
            vals, errs = self.derivative(z, target)
            return np.asarray(vals, dtype=complex), np.asarray(errs, dtype=float)
        # Central finite difference; adequate for winding counts where only
        # the argument of f'/(f-a) matters.
        h = 1e-6 * max(self.domain.radius, 1.0)
        vp, ep = self.eval(z + h, target)
        vm, em = self.eval(z - h, target)
        d = (vp - vm) / (2 * h)
        err = (ep + em) / (2 * h) + 1e-9 * (np.abs(d) + 1.0)
        return d, err

    @property
    def has_derivative(self) -> bool:
        return self.derivative is not None


@dataclass(frozen=True)
class CharacteristicReport:
    """(r, m, N, T) for one function and radius, with quadrature error."""

    r: float
    m: float
    N: float
    T: float
    quad_error: float
    n_at_zero: int


@dataclass
class LemmaVerdict:
    """One executable check: computed quantity vs claimed bound.

    margin = bound - computed; the check passes when the margin is
    nonnegative beyond the combined numerical error.
    """

    lemma_id: str
    inputs: dict
    computed: float
    bound: float
    margin: float
    passed: bool
    error_estimate: float
    provenance: dict = field(default_factory=dict)

    @classmethod
    def build(cls, lemma_id, inputs, computed, bound, error_estimate, provenance=None):
        margin = bound - computed
        return cls(
            lemma_id=lemma_id,
            inputs=dict(inputs),
            computed=float(computed),
            bound=float(bound),
            margin=float(margin),
            passed=bool(margin >= -abs(error_estimate)),
            error_estimate=float(error_estimate),
            provenance=dict(provenance or {}),
        )

    def to_json(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "inputs": {k: _jsonable(v) for k, v in sorted(self.inputs.items())},
            "computed": self.computed,
            "bound": self.bound,
            "margin": self.margin,
            "pass": self.passed,
            "error_estimate": self.error_estimate,
            "provenance": {k: _jsonable(v) for k, v in sorted(self.provenance.items())},
        }


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in sorted(v.items())}
    return v


def circle_nodes(center: complex, radius: float, count: int) -> np.ndarray:
    phi = 2.0 * math.pi * np.arange(count) / count
    return center + radius * np.exp(1j * phi)


def _interleave(old: np.ndarray, new: np.ndarray) -> np.ndarray:
    out = np.empty(old.size * 2, dtype=old.dtype)
    out[0::2] = old
    out[1::2] = new
    return out


class _CircleAverager:
    """Node-doubling trapezoid average of g(|f|) over a centered circle."""

    def __init__(self, f: FunctionHandle, radius: float, target: float, center: complex = 0j):
        self.f = f
        self.radius = radius
        self.center = center
        self.target = target
        self.vals = None
        self.errs = None
        self.count = 0

    def _extend(self):
        if self.vals is None:
            self.count = MIN_NODES
            z = circle_nodes(self.center, self.radius, self.count)
            self.vals, self.errs = self.f.eval(z, self.target / 8)
        else:
            phi = 2.0 * math.pi * (np.arange(self.count) + 0.5) / self.count
            z = self.center + self.radius * np.exp(1j * phi)
            nv, ne = self.f.eval(z, self.target / 8)
            self.vals = _interleave(self.vals, nv)
            self.errs = _interleave(self.errs, ne)
            self.count *= 2

    def run(self, integrand):
        """integrand maps |f| values to quadrature samples; returns
        (average, quad_error, converged)."""
        self._extend()
        prev = float(np.mean(integrand(np.abs(self.vals))))
        while True:
            self._extend()
            cur = float(np.mean(integrand(np.abs(self.vals))))
            est = abs(cur - prev)
            if est <= self.target / 2 and self.count >= 4 * MIN_NODES:
                return cur, est, True
            if self.count >= MAX_NODES:
                return cur, est, False
            prev = cur

    def eval_error_term(self, floor_mask_above_one: bool) -> float:
        """Propagated evaluator error: mean of err/|f| over active nodes."""
        av = np.abs(self.vals)
        safe = np.maximum(av - self.errs, 1e-300)
        contrib = self.errs / safe
        if floor_mask_above_one:
            contrib = np.where(av + self.errs >= 1.0, contrib, 0.0)
        return float(np.mean(contrib))


def proximity_m(f: FunctionHandle, r: float, target_err: float = 1e-9):
    """m(r, f): circle average of log+|f|, with an a-posteriori error bound.

    Node count doubles until successive trapezoid estimates agree to the
    target; the log+ kink makes this O(h^2) rather than spectral, which the
    doubling estimate captures.  Returns (value, quad_error); when the node
    cap is hit the best estimate is returned with the achieved error.
    """
    if r <= 0:
        raise PreconditionError("radius must be positive")
    if not f.domain.contains(f.domain.center + r, 1e-12):
        raise PreconditionError(f"circle of radius {r} leaves the function domain")
    avg = _CircleAverager(f, r, target_err)
    value, est, _converged = avg.run(lambda a: np.log(np.maximum(a, 1.0)))
    quad_error = est + avg.eval_error_term(floor_mask_above_one=True)
    return value, quad_error


def counting_N(divisor: PointList, n_at_zero: int, r: float) -> float:
    """N(r, .) in closed form: sum mult*log(r/|a|) + n(0)*log(r)."""
    if n_at_zero < 0:
        raise PreconditionError("n_at_zero must be nonnegative")
    total = n_at_zero * math.log(r)
    for loc, mult in divisor:
        modulus = abs(loc)
        if modulus > r * (1.0 + 1e-12):
            raise PreconditionError(
                f"divisor point at modulus {modulus} exceeds radius {r}"
            )
        if modulus < 1e-300:
            raise PreconditionError("origin point must be passed as n_at_zero")
        total += mult * math.log(r / min(modulus, r))
    return total


def _poles_for(f: FunctionHandle, r: float):
    """Poles of f inside radius r: declared when complete, else located on 1/f."""
    if f.declared_poles is not None:
        inside = f.declared_poles.within(r)
        origin = [m for p, m in inside if abs(p) < 1e-12]
        rest = PointList([(p, m) for p, m in inside if abs(p) >= 1e-12])
        return rest, (origin[0] if origin else 0)
    from .zeros import locate_a_points  # deferred: zeros imports this module

    recip = reciprocal_handle(f)
    pts = locate_a_points(recip, 0.0, DiskSpec(0j, r))
    origin = [m for p, m in pts if abs(p) < 1e-12]
    rest = PointList([(p, m) for p, m in pts if abs(p) >= 1e-12])
    return rest, (origin[0] if origin else 0)


def reciprocal_handle(f: FunctionHandle) -> FunctionHandle:
    """1/f as a FunctionHandle with propagated error bounds."""

    def ev(z, target):
        v, e = f.eval(z, target)
        av = np.abs(v)
        safe = np.maximum(av * np.maximum(av - e, 1e-300), 1e-300)
        return 1.0 / v, e / safe

    dv = None
    if f.derivative is not None:

        def dv(z, target):  # noqa: F811
            v, e = f.eval(z, target)
            d, de = f.deriv(z, target)
            av = np.maximum(np.abs(v), 1e-150)
            val = -d / (v * v)
            err = de / av**2 + 2 * np.abs(d) * e / av**3
            return val, err

    return FunctionHandle(
        evaluator=ev,
        domain=f.domain,
        derivative=dv,
        declared_poles=None,
        label=f"1/({f.label})" if f.label else "reciprocal",
    )


def characteristic_T(
    f: FunctionHandle, r: float, target_err: float = 1e-9
) -> CharacteristicReport:
    """T(r, f) = m(r, f) + N(r, f) with the pole divisor located or declared."""
    m_val, quad_err = proximity_m(f, r, target_err)
    poles, n0 = _poles_for(f, r)
    n_val = counting_N(poles, n0, r)
    return CharacteristicReport(
        r=r, m=m_val, N=n_val, T=m_val + n_val, quad_error=quad_err, n_at_zero=n0
    )


def _circle_extremum(
    f: FunctionHandle,
    center: complex,
    r: float,
    key,
    nodes: int = 1 << 12,
    refine_tol: float = 1e-10,
    target: float = 1e-12,
) -> float:
    """Lower-bound-certified maximum of key(f) on the circle.

    Dense sampling plus golden-section refinement around the best node."""
    z = circle_nodes(center, r, nodes)
    vals, _ = f.eval(z, target)
    g = key(vals)
    j = int(np.argmax(g))
    best = float(g[j])
    h = 2.0 * math.pi / nodes
    lo = (j - 1) * h
    hi = (j + 1) * h

    gr = (math.sqrt(5.0) - 1.0) / 2.0

    def sample(phi):
        zz = np.array([center + r * cmath.exp(1j * phi)])
        v, _ = f.eval(zz, target)
        return float(key(v)[0])

    a, b = lo, hi
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc, fd = sample(c), sample(d)
    while (b - a) > refine_tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = sample(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = sample(d)
    return max(best, fc, fd)


def max_modulus(
    f: FunctionHandle, r: float, nodes: int = 1 << 12, refine_tol: float = 1e-10
) -> float:
    """M(r, f): maximum of |f| on the circle |z|=r (certified from below)."""
    if not f.domain.contains(f.domain.center + r, 1e-12):
        raise PreconditionError(f"circle of radius {r} leaves the function domain")
    return _circle_extremum(f, 0j, r, np.abs, nodes=nodes, refine_tol=refine_tol)


def _adaptive_log_abs(f, rho, phi_a, phi_b, tol, depth=0):
    """Adaptive Simpson of log|f(rho e^{i phi})| across a near-singular arc."""

    def g(phi):
        v, _ = f.eval(np.array([rho * cmath.exp(1j * phi)]), tol)
        a = abs(v[0])
        return math.log(max(a, 1e-300))

    def simpson(a, b, fa, fm, fb):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, d):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = g(lm), g(rm)
        left = simpson(a, m, fa, flm, fm)
        right = simpson(m, b, fm, frm, fb)
        if d > 42 or abs(left + right - whole) < 15 * tol:
            return left + right
        return rec(a, m, fa, flm, fm, left, d + 1) + rec(m, b, fm, frm, fb, right, d + 1)

    fa, fb = g(phi_a), g(phi_b)
    m = 0.5 * (phi_a + phi_b)
    fm = g(m)
    return rec(phi_a, phi_b, fa, fm, fb, simpson(phi_a, phi_b, fa, fm, fb), 0)


def circle_average_log_abs(f: FunctionHandle, rho: float, target: float = 1e-9):
    """(1/2pi) integral of log|f| over the rho-circle with singular-arc rescue.

    Near-zero nodes (integrable log singularities) are detected and their
    arcs re-integrated adaptively; a genuine zero within 1e-9 of the circle
    should have been rejected upstream.
    """
    avg = _CircleAverager(f, rho, target)
    value, est, _ = avg.run(lambda a: np.log(np.maximum(a, 1e-300)))
    scale = float(np.max(np.abs(avg.vals))) or 1.0
    tiny = np.flatnonzero(np.abs(avg.vals) < TINY_REL * scale)
    if tiny.size:
        count = avg.count
        h = 2.0 * math.pi / count
        for j in tiny.tolist():
            phi_j = 2.0 * math.pi * j / count
            arc = _adaptive_log_abs(f, rho, phi_j - h, phi_j + h, target / 4)
            old = h * (
                0.5 * math.log(max(abs(avg.vals[(j - 1) % count]), 1e-300))
                + math.log(max(abs(avg.vals[j]), 1e-300))
                + 0.5 * math.log(max(abs(avg.vals[(j + 1) % count]), 1e-300))
            )
            value += (arc - old) / (2.0 * math.pi)
    quad_error = est + avg.eval_error_term(floor_mask_above_one=False)
    return value, quad_error


def jensen_residual(
    f: FunctionHandle,
    rho: float,
    zeros: PointList,
    poles: PointList,
    f_at_0: complex,
    target_err: float = 1e-9,
) -> float:
    """Absolute defect of the zero/pole counting identity on the rho-circle.

    residual = | log|f(0)| - (circle average of log|f|
                - sum log(rho/|a|) + sum log(rho/|b|)) |

    Preconditions: f(0) is neither zero nor pole, the divisors are complete
    inside |z| < rho, and no divisor point sits on the circle."""
    if abs(f_at_0) < 1e-300:
        raise PreconditionError("f(0) must be nonzero")
    for group in (zeros, poles):
        for loc, _ in group:
            if abs(abs(loc) - rho) < 1e-9 * max(rho, 1.0):
                raise DivisorOnCircle(
                    f"divisor point at |z|={abs(loc)} lies on the integration circle"
                )
            if abs(loc) > rho:
                raise PreconditionError("divisor must lie inside the circle")
    avg, _quad = circle_average_log_abs(f, rho, target_err)
    s_zero = sum(m * math.log(rho / abs(a)) for a, m in zeros)
    s_pole = sum(m * math.log(rho / abs(b)) for b, m in poles)
    return abs(math.log(abs(f_at_0)) - (avg - s_zero + s_pole))


def lemma1_check(
    f: FunctionHandle, r: float, rho: float, target_err: float = 1e-8
) -> LemmaVerdict:
    """Two-sided growth comparison for analytic f:

        T(r) <= log+ M(r) <= ((rho+r)/(rho-r)) T(rho),  0 < r < rho.

    The middle term uses the refined (lower-bound-certified) maximum; its
    refinement tolerance is part of the reported error estimate."""
    if not (0 < r < rho):
        raise PreconditionError("need 0 < r < rho")
    if not f.domain.contains(f.domain.center + rho, 1e-12):
        raise PreconditionError("rho-circle leaves the function domain")
    t_r = characteristic_T(f, r, target_err)
    t_rho = characteristic_T(f, rho, target_err)
    m_max = max_modulus(f, r)
    log_m = log_plus(m_max)
    factor = (rho + r) / (rho - r)
    violation = max(t_r.T - log_m, log_m - factor * t_rho.T)
    err = t_r.quad_error + factor * t_rho.quad_error + 1e-10
    return LemmaVerdict.build(
        lemma_id="growth-comparison",
        inputs={"r": r, "rho": rho, "label": f.label},
        computed=violation,
        bound=0.0,
        error_estimate=err,
        provenance={
            "T_r": t_r.T,
            "T_rho": t_rho.T,
            "log_plus_M": log_m,
            "factor": factor,
            "max_refine_tol": 1e-10,
        },
    )


def borel_caratheodory_check(
    f: FunctionHandle,
    z0: complex,
    R: float,
    r: float,
    samples: int = 256,
) -> LemmaVerdict:
    """Real-part-to-modulus bound on the smaller disk:

        |f(z) - f(z0)| <= (2r/(R-r)) (A(R) - Re f(z0)),  |z - z0| <= r,

    with A(R) the maximum of Re f on the R-disk.  A(R) is estimated from
    below, which only tightens the claimed bound, so a positive margin is
    trustworthy."""
    if not (0 < r < R):
        raise PreconditionError("need 0 < r < R")
    if not f.domain.contains(z0 + R * (1 + 1e-12)):
        raise PreconditionError("R-disk leaves the function domain")
    a_r = _circle_extremum(f, z0, R, lambda v: v.real)
    f0 = f.eval_scalar(z0)
    rhs = (2.0 * r / (R - r)) * (a_r - f0.value.real)

    # Low-discrepancy spiral over the closed r-disk plus its boundary circle.
    k = np.arange(samples)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    radii = r * np.sqrt((k + 0.5) / samples)
    angles = 2.0 * math.pi * np.mod(k * golden, 1.0)
    pts = z0 + radii * np.exp(1j * angles)
    pts = np.concatenate([pts, circle_nodes(z0, r, max(64, samples))])
    vals, errs = f.eval(pts, 1e-12)
    lhs = np.abs(vals - f0.value)
    worst = int(np.argmax(lhs))
    err = float(errs[worst]) + f0.abs_error * (1.0 + 2.0 * r / (R - r))
    return LemmaVerdict.build(
        lemma_id="real-part-bound",
        inputs={"z0": z0, "R": R, "r": r, "samples": samples, "label": f.label},
        computed=float(lhs[worst]),
        bound=float(rhs),
        error_estimate=err,
        provenance={"A_R": a_r, "f0": f0.value, "argmax": complex(pts[worst])},
    )


def smt_check(
    f: FunctionHandle, R: float, r: float, target_err: float = 1e-6
) -> LemmaVerdict:
    """Second-main-theorem inequality with explicit constants:

        T(r,f) < 2{N(R,1/f) + N(R,f) + N(R,1/(f-1))}
                 + 4 log+|f(0)| + 2 log+ 1/(R|f'(0)|)
                 + 24 log(R/(R-r)) + 2328

    for meromorphic f with f(0) not in {0, 1, inf} and f'(0) != 0.  The three
    counting divisors come from the argument-principle locator."""
    from .zeros import locate_a_points

    if not (0 < r < R):
        raise PreconditionError("need 0 < r < R")
    if not f.domain.contains(f.domain.center + R * (1 + 1e-9)):
        raise PreconditionError("closed R-disk must lie strictly inside the domain")
    f0 = f.eval_scalar(0j)
    if abs(f0.value) < 1e-9:
        raise PreconditionError("f(0) = 0 excluded by hypothesis")
    if abs(f0.value - 1.0) < 1e-9:
        raise PreconditionError("f(0) = 1 excluded by hypothesis")
    if f.declared_poles is not None:
        for p, _ in f.declared_poles:
            if abs(p) < 1e-9:
                raise PreconditionError("f(0) = infinity excluded by hypothesis")
    d0 = f.deriv(np.array([0j]), 1e-12)
    fp0 = complex(d0[0][0])
    if abs(fp0) < 1e-9:
        raise PreconditionError("f'(0) = 0 excluded by hypothesis")

    disk = DiskSpec(0j, R)
    zeros = locate_a_points(f, 0.0, disk)
    ones = locate_a_points(f, 1.0, disk)
    poles, n0_pole = _poles_for(f, R)
    if n0_pole:
        raise PreconditionError("f(0) = infinity excluded by hypothesis")

    n_zeros = counting_N(zeros, 0, R)
    n_poles = counting_N(poles, 0, R)
    n_ones = counting_N(ones, 0, R)
    t_r = characteristic_T(f, r, target_err)
    rhs = (
        2.0 * (n_zeros + n_poles + n_ones)
        + 4.0 * log_plus(abs(f0.value))
        + 2.0 * log_plus(1.0 / (R * abs(fp0)))
        + 24.0 * math.log(R / (R - r))
        + SMT_CONSTANT
    )
    err = t_r.quad_error + 4.0 * f0.abs_error / max(abs(f0.value), 1e-9) + 1e-9
    return LemmaVerdict.build(
        lemma_id="second-main-theorem",
        inputs={"R": R, "r": r, "label": f.label},
        computed=t_r.T,
        bound=rhs,
        error_estimate=err,
        provenance={
            "N_zeros": n_zeros,
            "N_poles": n_poles,
            "N_ones": n_ones,
            "f0": f0.value,
            "fp0": fp0,
            "T_quad_error": t_r.quad_error,
            "additive_constant": SMT_CONSTANT,
        },
    )
