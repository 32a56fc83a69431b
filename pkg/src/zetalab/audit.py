"""Executable audits of an explicit inequality chain for the zeta function.

The chain starts from unconditional bounds on the sigma = 4 line, feeds them
through a real-part-to-modulus disk bound and a zero-counting identity, and
ends at |zeta(sigma+it)| <= c8 (log t)^{c6} for sigma >= 1/2 + 4*delta,
t >= 16, conditional on zeta being zero-free right of the critical line.

Nothing here assumes that zero-freeness: every disk operation on log zeta
first counts zeta zeros in the slightly larger disk by winding number and
converts any hit into a structured "rh-obstruction" finding instead of a
crash.

The constants c1..c8 are kept in a ledger where each value is produced by
evaluating its own stored formula string, so re-derivation is reproducible
by construction.  c8 = exp(c7) overflows any float (c7 is of order 1e6);
the ledger stores it as inf and carries log_c8 = c7, and the final
inequality is audited in log form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchObstruction, Finding, PreconditionError
from .handles import zeta_disk_model
from .nevanlinna import (
    DiskSpec,
    LemmaVerdict,
    PointList,
    _circle_extremum,
    characteristic_T,
    circle_average_log_abs,
    counting_N,
    max_modulus,
)
from .zeros import locate_a_points, winding_count_jittered
from .zeta import log_zeta_series, zeta_em_batch
from .arith import log_plus

# Audited strip bounds on the sigma = 4 line (the chain's unconditional base).
STRIP4_LOG_LOWER = 0.0426
STRIP4_LOG_UPPER = 0.0824
STRIP4_DIST1_LOWER = 0.0426
STRIP4_MOD_LOWER = 0.917
STRIP4_MOD_UPPER = 1.0824
STRIP4_DERIV_LOWER = 0.012

NON_REPRODUCIBILITY_NOTE = (
    "The final inequality chain is audited pointwise at finite heights only. "
    "Its advertised asymptotic consequence (a contradiction with an "
    "Omega-type lower bound along an unbounded sequence of heights) is not "
    "reproducible at any finite scale: the derived constants are so large "
    "(log c8 is of order 1e6) that the audited bound cannot conflict with "
    "any computation at desk-scale t. This tool therefore reports margins "
    "and their trends, never a verdict on the asymptotic claim."
)


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@dataclass
class ConstantsLedger:
    """delta and c1..c8, each value produced by its stored formula.

    Formulas are evaluated in order in a namespace containing the earlier
    constants, log, and an overflow-tolerant exp, so `self_check` can verify
    that re-evaluation reproduces every stored value."""

    delta: float
    values: dict = field(default_factory=dict)  # name -> float
    formulas: dict = field(default_factory=dict)  # name -> expression string
    radii: dict = field(default_factory=dict)

    ORDER = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "log_c8")

    def __getattr__(self, name):
        values = object.__getattribute__(self, "values")
        if name in values:
            return values[name]
        raise AttributeError(name)

    def _namespace(self, upto: str | None = None) -> dict:
        ns = {"log": math.log, "exp": _safe_exp, "delta": self.delta, "inf": math.inf}
        for name in self.ORDER:
            if name == upto:
                break
            if name in self.values:
                ns[name] = self.values[name]
        return ns

    def self_check(self) -> float:
        """Largest discrepancy between stored values and formula re-evaluation."""
        worst = 0.0
        for name in self.ORDER:
            recomputed = eval(self.formulas[name], {"__builtins__": {}}, self._namespace(name))
            stored = self.values[name]
            if math.isinf(stored) and math.isinf(recomputed):
                continue
            scale = max(1.0, abs(stored))
            worst = max(worst, abs(recomputed - stored) / scale)
        return worst

    def to_json(self) -> dict:
        vals = {
            k: (repr(v) if math.isinf(v) else v) for k, v in sorted(self.values.items())
        }
        return {
            "delta": self.delta,
            "values": vals,
            "formulas": {k: self.formulas[k] for k in sorted(self.formulas)},
            "radii": {k: self.radii[k] for k in sorted(self.radii)},
        }


def default_radii(delta: float = 0.01) -> dict:
    """The chain's disk radii, all of the form 7/2 - k*delta."""
    return {
        "exclusion": 3.5 - delta,  # zero-free verification disk
        "bc_outer": 3.5 - delta,  # real-part bound, outer radius
        "bc_inner": 3.5 - 2 * delta,  # real-part bound, inner radius
        "counting": 3.5 - 2 * delta,  # zero-counting circle
        "char": 3.5 - 3 * delta,  # characteristic-function radius
        "growth": 3.5 - 4 * delta,  # growth-comparison inner radius
    }


def derive_constants(
    c1: float = 3.0, delta: float = 0.01, radii: dict | None = None
) -> ConstantsLedger:
    """Propagate the explicit constants c2..c8 from c1 and the radii.

    With the default radii the propagation uses the rounded disk factor
    7/delta = 700 (the exact 2r/(R-r) is 696, and the slack is absorbed
    because A(R) - Re f(0) >= 0); with overridden radii the exact factors
    are embedded as literals."""
    if c1 <= 0:
        raise PreconditionError("c1 must be positive")
    use_default = radii is None
    rr = default_radii(delta) if use_default else dict(radii)

    ledger = ConstantsLedger(delta=delta, radii=rr)
    f = ledger.formulas

    f["c1"] = repr(float(c1))
    if use_default:
        f["c2"] = "(7/delta) * (1/2)"
        f["c3"] = f"(7/delta) * (log(c1) + {STRIP4_LOG_UPPER}) + {STRIP4_LOG_UPPER}"
    else:
        bc = 2.0 * rr["bc_inner"] / (rr["bc_outer"] - rr["bc_inner"])
        f["c2"] = f"{bc!r} * (1/2)"
        f["c3"] = f"{bc!r} * (log(c1) + {STRIP4_LOG_UPPER}) + {STRIP4_LOG_UPPER}"
    f["c4"] = f"log(c2 + c3/log(16)) - log({STRIP4_LOG_LOWER})"
    r_cnt, r_chr = rr["counting"], rr["char"]
    f["c5"] = (
        f"2*c4 + 4*log({STRIP4_MOD_UPPER}) "
        f"+ 2*log(1/({r_cnt!r}*{STRIP4_DERIV_LOWER})) "
        f"+ 24*log({r_cnt!r}/({r_cnt!r} - {r_chr!r})) + 2328"
    )
    growth = (rr["char"] + rr["growth"]) / (rr["char"] - rr["growth"])
    if use_default:
        f["c6"] = "2 * (7 - 7*delta)/delta"
        f["c7"] = "((7 - 7*delta)/delta) * c5"
    else:
        f["c6"] = f"2 * {growth!r}"
        f["c7"] = f"{growth!r} * c5"
    f["c8"] = "exp(c7)"
    f["log_c8"] = "c7"

    for name in ConstantsLedger.ORDER:
        ledger.values[name] = float(
            eval(f[name], {"__builtins__": {}}, ledger._namespace(name))
        )
    return ledger


# ---------------------------------------------------------------------------
# tail comparison between a monotone sum and its integral
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailCheckResult:
    """Sum-minus-integral limit for a nonincreasing nonnegative function.

    alpha_estimate is D(xi_max) where D(xi) = sum_{a<=n<=xi} f(n) -
    integral_a^xi f; the deviation |D(xi) - alpha| must stay within
    f(xi - 1) for every integer xi in [a+1, xi_max]."""

    alpha_estimate: float
    alpha_range: tuple
    max_deviation: float
    xi_max: int
    deviation_margin: float  # min over xi of f(xi-1) - |D(xi) - alpha|

    @property
    def alpha_inside(self) -> bool:
        lo, hi = self.alpha_range
        return lo - 1e-12 <= self.alpha_estimate <= hi + 1e-12


def audit_lemma4(f, antiderivative, a: float, xi_max: int) -> TailCheckResult:
    """Check the tail law for a monotone decreasing f with an integral oracle.

    f and antiderivative are vectorizable callables on floats.  Raises on a
    detected non-monotone sample."""
    n0 = math.ceil(a)
    if xi_max < n0 + 1:
        raise PreconditionError("xi_max must allow at least one step past a")
    n = np.arange(n0, xi_max + 1, dtype=float)
    fv = np.asarray(f(n), dtype=float)
    if np.any(fv < -1e-300):
        raise PreconditionError("f must be nonnegative")
    if np.any(np.diff(fv) > 1e-12 * np.maximum(1.0, fv[:-1])):
        raise PreconditionError("f must be nonincreasing on the sampled range")
    partial = np.cumsum(fv)
    integral = np.asarray(antiderivative(n), dtype=float) - float(antiderivative(a))
    d = partial - integral
    alpha = float(d[-1])
    f_a = float(f(np.array([float(a)]))[0])
    mask = n >= n0 + 1
    dev = np.abs(d[mask] - alpha)
    allowed = np.asarray(f(n[mask] - 1.0), dtype=float)
    return TailCheckResult(
        alpha_estimate=alpha,
        alpha_range=(0.0, f_a),
        max_deviation=float(np.max(dev)) if dev.size else 0.0,
        xi_max=int(xi_max),
        deviation_margin=float(np.min(allowed - dev)) if dev.size else f_a,
    )


def lemma4_verdict(result: TailCheckResult, label: str) -> LemmaVerdict:
    containment = max(
        result.alpha_range[0] - result.alpha_estimate,
        result.alpha_estimate - result.alpha_range[1],
    )
    violation = max(containment, -result.deviation_margin)
    return LemmaVerdict.build(
        lemma_id="lemma4",
        inputs={"function": label, "xi_max": result.xi_max},
        computed=violation,
        bound=0.0,
        error_estimate=1e-9,
        provenance={
            "alpha_estimate": result.alpha_estimate,
            "alpha_range": list(result.alpha_range),
            "max_deviation": result.max_deviation,
            "deviation_margin": result.deviation_margin,
        },
    )


# ---------------------------------------------------------------------------
# sigma = 4 line bounds (unconditional)
# ---------------------------------------------------------------------------


def audit_lemma5(t: float, target: float = 1e-10, mode: str = "auto") -> list:
    """Four unconditional bounds at s = 4 + it, any real t.

    |log zeta| in [0.0426, 0.0824]; |zeta - 1| >= 0.0426;
    |zeta| in [0.917, 1.0824]; |zeta'| >= 0.012.
    Verdicts use the violation convention: computed is the (signed) amount
    by which the quantity leaves its interval, bound is 0."""
    s = complex(4.0, t)
    lz = log_zeta_series(s, target, mode=mode)
    vals, errs, _ = zeta_em_batch(np.array([s]), 0, target, mode=mode)
    dvals, derrs, _ = zeta_em_batch(np.array([s]), 1, target, mode=mode)
    z, ze = complex(vals[0]), float(errs[0])
    dz, dze = complex(dvals[0]), float(derrs[0])

    def verdict(sub, value, lower, upper, err, extra):
        violation = max(
            (lower - value) if lower is not None else -math.inf,
            (value - upper) if upper is not None else -math.inf,
        )
        prov = {"value": value, "lower": lower, "upper": upper}
        prov.update(extra)
        return LemmaVerdict.build(
            lemma_id=f"lemma5.{sub}",
            inputs={"t": t},
            computed=violation,
            bound=0.0,
            error_estimate=err,
            provenance=prov,
        )

    return [
        verdict(1, abs(lz.value), STRIP4_LOG_LOWER, STRIP4_LOG_UPPER, lz.abs_error, {}),
        verdict(2, abs(z - 1.0), STRIP4_DIST1_LOWER, None, ze, {}),
        verdict(3, abs(z), STRIP4_MOD_LOWER, STRIP4_MOD_UPPER, ze, {}),
        verdict(4, abs(dz), STRIP4_DERIV_LOWER, None, dze, {}),
    ]


# ---------------------------------------------------------------------------
# empirical growth constant on vertical lines
# ---------------------------------------------------------------------------


def audit_lemma6(
    sigma_samples, t_samples, c1: float, target: float = 1e-8, mode: str = "auto"
):
    """Empirical check of |zeta(sigma+it)| <= c1 |t|^(1/2) on a sample grid.

    Returns (verdict, empirical_c1) where empirical_c1 is the largest
    sampled ratio.  This bound is only sampled, never proven, which is why
    c1 stays configurable."""
    sigma_samples = [float(x) for x in sigma_samples]
    t_samples = [float(x) for x in t_samples]
    for sg in sigma_samples:
        if sg < 0.5:
            raise PreconditionError(f"sigma={sg} below 1/2")
    for tv in t_samples:
        if abs(tv) < 2.0:
            raise PreconditionError(f"|t|={abs(tv)} below 2")
    empirical = 0.0
    arg = None
    for tv in t_samples:
        sarr = np.array([complex(sg, tv) for sg in sigma_samples])
        vals, _errs, _ = zeta_em_batch(sarr, 0, target, mode=mode, allow_floor=True)
        ratios = np.abs(vals) / math.sqrt(abs(tv))
        j = int(np.argmax(ratios))
        if float(ratios[j]) > empirical:
            empirical = float(ratios[j])
            arg = (sigma_samples[j], tv)
    verdict = LemmaVerdict.build(
        lemma_id="lemma6",
        inputs={
            "sigma_count": len(sigma_samples),
            "t_count": len(t_samples),
            "c1": c1,
        },
        computed=empirical,
        bound=c1,
        error_estimate=target,
        provenance={"argmax_sigma": arg[0], "argmax_t": arg[1]},
    )
    return verdict, empirical


# ---------------------------------------------------------------------------
# conditional disk audits
# ---------------------------------------------------------------------------


def zero_free_check(t: float, ledger: ConstantsLedger, mode: str = "auto"):
    """Count zeta zeros in |z| <= exclusion radius about 4 + it.

    Returns (ok, finding): a positive count becomes an rh-obstruction
    finding; a stubborn boundary situation becomes a boundary-obstruction
    finding.  The audited chain requires ok."""
    radius = ledger.radii["exclusion"]
    model = zeta_disk_model(t)
    f = model.handle(min(radius * 1.002, model.r_use))
    try:
        w = winding_count_jittered(f, 0.0, DiskSpec(0j, radius))
    except Exception as exc:  # boundary pinched by a zero: report, don't crash
        return False, Finding(
            kind="boundary-obstruction",
            t=t,
            detail=f"zero-exclusion winding failed: {exc}",
        )
    if w.count != 0:
        return False, Finding(
            kind="rh-obstruction",
            t=t,
            detail=(
                f"{w.count} zeta zero(s) inside |z| <= {radius} about 4+it; "
                "the conditional chain does not apply at this height"
            ),
            data={"count": w.count, "radius": radius},
        )
    return True, None


def audit_lemma8(t: float, ledger: ConstantsLedger, mode: str = "auto"):
    """Disk bound |log zeta(sigma+it)| <= c2 log t + c3.

    Measures the maximum of |log zeta(z+4+it)| over the inner circle and
    over the horizontal segment sigma in [1/2+2*delta, 4] at height t (the
    disk only covers heights within its radius of t; the segment is the
    fixed-height slice actually claimed).  Returns (verdict_or_None,
    findings)."""
    if t < 16.0:
        raise PreconditionError(f"conditional audits need t >= 16, got {t}")
    ok, finding = zero_free_check(t, ledger, mode)
    if not ok:
        return None, [finding]
    delta = ledger.delta
    r_in = ledger.radii["bc_inner"]
    model = zeta_disk_model(t, mode=mode)
    try:
        logf = model.log_handle(min(r_in * 1.002, model.r_use))
        circle_max = _circle_extremum(logf, 0j, r_in, np.abs, nodes=1 << 10)
        sigma_lo = 0.5 + 2 * delta
        seg = np.linspace(sigma_lo - 4.0, 0.0, 257).astype(complex)
        seg_vals, seg_errs = logf.eval(seg, 1e-10)
        seg_max = float(np.max(np.abs(seg_vals)))
        err = float(np.max(seg_errs)) + 1e-9
    except BranchObstruction as exc:
        return None, [
            Finding(
                kind="branch-obstruction",
                t=t,
                detail=str(exc),
                location=exc.location,
            )
        ]
    computed = max(circle_max, seg_max)
    bound = ledger.c2 * math.log(t) + ledger.c3
    verdict = LemmaVerdict.build(
        lemma_id="lemma8",
        inputs={"t": t, "r_inner": r_in, "sigma_low": 0.5 + 2 * delta},
        computed=computed,
        bound=bound,
        error_estimate=err,
        provenance={
            "circle_max": circle_max,
            "segment_max": seg_max,
            "model_certified_error": model.cert_value,
        },
    )
    return verdict, []


def audit_lemma9(t: float, ledger: ConstantsLedger, mode: str = "auto"):
    """Zero-counting bound N(rho, 1/(zeta(z+4+it) - 1)) <= log log t + c4.

    Also recomputes the counting identity for the tracked log (the bound's
    actual mechanism) and reports both counting functions separately: points
    with zeta = 1 reached on a non-principal branch are zeros of zeta - 1
    but not of the tracked log, so their relation is reported, not assumed."""
    if t < 16.0:
        raise PreconditionError(f"conditional audits need t >= 16, got {t}")
    ok, finding = zero_free_check(t, ledger, mode)
    if not ok:
        return None, [finding]
    rho = ledger.radii["counting"]
    model = zeta_disk_model(t, mode=mode)
    f = model.handle(min(rho * 1.004, model.r_use))
    try:
        ones = locate_a_points(f, 1.0, DiskSpec(0j, rho), tol=1e-9)
    except BranchObstruction as exc:
        return None, [Finding(kind="boundary-obstruction", t=t, detail=str(exc))]
    ones_in = ones.within(rho * (1.0 - 1e-12))
    n_ones = counting_N(ones_in, 0, rho)
    bound = math.log(math.log(t)) + ledger.c4

    provenance = {"one_points": ones_in.total(), "N_one_points": n_ones}
    findings = []
    try:
        logf = model.log_handle(min(rho * 1.004, model.r_use))
        log_zeros = locate_a_points(logf, 0.0, DiskSpec(0j, rho), tol=1e-9)
        n_logz = counting_N(log_zeros, 0, rho)
        anchor = log_zeta_series(complex(4.0, t), 1e-11)
        avg, quad = circle_average_log_abs(logf, rho, 1e-9)
        jensen_lhs = math.log(abs(anchor.value))
        jensen_rhs = avg - sum(m * math.log(rho / abs(p)) for p, m in log_zeros)
        circle_max = _circle_extremum(logf, 0j, rho, np.abs, nodes=1 << 10)
        local_bound = math.log(circle_max) - math.log(abs(anchor.value))
        provenance.update(
            {
                "N_log_zeros": n_logz,
                "log_zero_count": log_zeros.total(),
                "jensen_lhs": jensen_lhs,
                "jensen_rhs": jensen_rhs,
                "jensen_residual": abs(jensen_lhs - jensen_rhs),
                "jensen_quad_error": quad,
                "measured_local_bound": local_bound,
                "chain_soundness_margin": local_bound - n_logz,
            }
        )
    except BranchObstruction as exc:
        findings.append(Finding(kind="branch-obstruction", t=t, detail=str(exc)))

    verdict = LemmaVerdict.build(
        lemma_id="lemma9",
        inputs={"t": t, "rho": rho},
        computed=n_ones,
        bound=bound,
        error_estimate=1e-7,
        provenance=provenance,
    )
    return verdict, findings


def audit_theorem(
    t: float, ledger: ConstantsLedger, sigma_grid=None, mode: str = "auto"
):
    """Final chain: characteristic bound, max-modulus bound, direct bound.

    (i)   T(r_char, zeta(z+4+it)) <= 2 log log t + c5
    (ii)  log+ max |zeta| on |z| = r_growth <= c6 log log t + c7
    (iii) log |zeta(sigma+it)| <= log_c8 + c6 log log t on the sigma grid
          (the direct bound |zeta| <= c8 (log t)^{c6} audited in log form:
          c8 itself overflows doubles).
    Returns (verdicts, findings)."""
    if t < 16.0:
        raise PreconditionError(f"conditional audits need t >= 16, got {t}")
    delta = ledger.delta
    if sigma_grid is None:
        sigma_grid = [0.5 + 4 * delta, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0]
    sigma_grid = [float(x) for x in sigma_grid]
    for sg in sigma_grid:
        if sg < 0.5 + 4 * delta - 1e-12 or sg > 4.0:
            raise PreconditionError(
                f"sigma={sg} outside [{0.5 + 4 * delta}, 4] audited range"
            )
    ok, finding = zero_free_check(t, ledger, mode)
    if not ok:
        return [], [finding]

    loglog = math.log(math.log(t))
    model = zeta_disk_model(t, mode=mode)
    r_char = ledger.radii["char"]
    r_growth = ledger.radii["growth"]
    f = model.handle(min(r_char * 1.004, model.r_use))

    t_rep = characteristic_T(f, r_char, 1e-8)
    v1 = LemmaVerdict.build(
        lemma_id="theorem.characteristic",
        inputs={"t": t, "r": r_char},
        computed=t_rep.T,
        bound=2.0 * loglog + ledger.c5,
        error_estimate=t_rep.quad_error,
        provenance={"m": t_rep.m, "N_poles": t_rep.N},
    )

    m_max = max_modulus(f, r_growth)
    v2 = LemmaVerdict.build(
        lemma_id="theorem.log-max",
        inputs={"t": t, "r": r_growth},
        computed=log_plus(m_max),
        bound=ledger.c6 * loglog + ledger.c7,
        error_estimate=float(model.value_error(r_growth)) / max(m_max, 1e-9) + 1e-10,
        provenance={"max_modulus": m_max},
    )

    pts = np.array([complex(sg - 4.0, 0.0) for sg in sigma_grid])
    vals, errs = model.values(pts)
    logs = np.log(np.maximum(np.abs(vals), 1e-300))
    j = int(np.argmax(logs))
    v3 = LemmaVerdict.build(
        lemma_id="theorem.direct",
        inputs={"t": t, "sigma_grid": sigma_grid},
        computed=float(logs[j]),
        bound=ledger.log_c8 + ledger.c6 * loglog,
        error_estimate=float(errs[j]) / max(float(np.abs(vals[j])), 1e-12),
        provenance={
            "argmax_sigma": sigma_grid[j],
            "log_domain": "bound is log(c8 (log t)^c6); c8 overflows floats",
            "per_sigma_log_modulus": [float(x) for x in logs],
        },
    )
    return [v1, v2, v3], []


def audit_chain(t: float, ledger: ConstantsLedger, sigma_grid=None, mode: str = "auto"):
    """Run the conditional audits at one height; shares the per-height model.

    Returns (verdicts, findings); a finding suppresses the affected verdicts
    rather than failing them."""
    verdicts, findings = [], []
    v8, f8 = audit_lemma8(t, ledger, mode)
    findings.extend(f8)
    if v8 is not None:
        verdicts.append(v8)
    v9, f9 = audit_lemma9(t, ledger, mode)
    findings.extend(f9)
    if v9 is not None:
        verdicts.append(v9)
    vts, ft = audit_theorem(t, ledger, sigma_grid, mode)
    findings.extend(ft)
    verdicts.extend(vts)
    return verdicts, findings
