"""Argument-principle zero counting and location.

winding_count integrates f'/(f-a) around a circle by the trapezoidal rule,
doubling nodes until the raw integral sits within snap distance of an
integer and the boundary phase is sampled finely enough that no step can
hide a full turn.

locate_a_points first tries the moment route: the same contour yields the
power sums sum_i y_i^p of the enclosed a-points (centered), Newton's
identities turn them into a monic polynomial, and its roots seed
multiplicity-aware Newton polishing.  This works entirely on the original
circle, so it respects tight evaluator domains.  If the moment seeds fail
verification the locator falls back to a seven-disk cover subdivision
(which needs some room around the disk) and finally reports failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryObstruction, ConvergenceError, PreconditionError
from .nevanlinna import DiskSpec, FunctionHandle, PointList, circle_nodes, _interleave

SNAP = 0.25
BOUNDARY_REL_TOL = 1e-9
CLUSTER_TOL = 1e-8
JITTER_STEPS = (0.0, 1e-4, -1e-4, 3e-4, -3e-4, 1e-3, -1e-3)
MIN_WINDING_NODES = 64
MAX_WINDING_NODES = 1 << 16
MOMENT_CAP = 48  # moment route handles at most this many enclosed points


@dataclass(frozen=True)
class WindingResult:
    """Integer count of a-points inside a disk, with the raw-integral defect."""

    count: int
    contour_error: float
    disk: DiskSpec
    nodes: int
    min_boundary: float


def _phase_winding(w: np.ndarray) -> tuple[float, float]:
    """Total argument change / 2pi along the closed sampled loop.

    Returns (turns, max_step).  Exact integer when the loop closes; the max
    per-step increment diagnoses undersampling."""
    ang = np.angle(w)
    steps = np.diff(np.concatenate([ang, ang[:1]]))
    steps = np.mod(steps + math.pi, 2.0 * math.pi) - math.pi
    return float(steps.sum() / (2.0 * math.pi)), float(np.max(np.abs(steps)))


def _declared_poles_inside(f: FunctionHandle, disk: DiskSpec):
    """(total multiplicity, entries) of declared poles strictly inside the disk.

    The raw contour integral of f'/(f-a) counts a-points MINUS poles; when
    the pole divisor is declared it is added back exactly.  Handles with
    declared_poles=None are treated as analytic (the caller's contract)."""
    if f.declared_poles is None:
        return 0, []
    inside = []
    for b, m in f.declared_poles:
        d = abs(b - disk.center)
        if abs(d - disk.radius) < 1e-9 * max(disk.radius, 1.0):
            raise BoundaryObstruction(
                f"declared pole at {b} sits on the contour", min_modulus=0.0, node=b
            )
        if d < disk.radius:
            inside.append((b, m))
    return sum(m for _, m in inside), inside


class _Contour:
    """Doubling trapezoid sampler of f and f' on a circle."""

    def __init__(self, f: FunctionHandle, a: complex, disk: DiskSpec, target: float):
        self.f, self.a, self.disk, self.target = f, a, disk, target
        self.count = 0
        self.z = None
        self.w = None
        self.d = None

    def extend(self):
        if self.count == 0:
            self.count = MIN_WINDING_NODES
            self.z = circle_nodes(self.disk.center, self.disk.radius, self.count)
            v, _ = self.f.eval(self.z, self.target)
            self.w = v - self.a
            if self.f.has_derivative or True:
                self.d, _ = self.f.deriv(self.z, self.target)
        else:
            phi = 2.0 * math.pi * (np.arange(self.count) + 0.5) / self.count
            z_new = self.disk.center + self.disk.radius * np.exp(1j * phi)
            v, _ = self.f.eval(z_new, self.target)
            d_new, _ = self.f.deriv(z_new, self.target)
            self.z = _interleave(self.z, z_new)
            self.w = _interleave(self.w, v - self.a)
            self.d = _interleave(self.d, d_new)
            self.count *= 2

    def boundary_check(self):
        scale = float(np.max(np.abs(self.w)))
        min_b = float(np.min(np.abs(self.w)))
        if min_b <= BOUNDARY_REL_TOL * max(scale, 1e-300):
            j = int(np.argmin(np.abs(self.w)))
            raise BoundaryObstruction(
                f"|f - a| = {min_b:.3e} on the contour (scale {scale:.3e})",
                min_modulus=min_b,
                node=complex(self.z[j]),
            )
        return min_b

    def raw_moment(self, p: int) -> complex:
        y = self.z - self.disk.center
        return complex(np.mean(y ** (p + 1) * self.d / self.w))


def winding_count(
    f: FunctionHandle,
    a: complex,
    disk: DiskSpec,
    target: float = 1e-12,
    max_nodes: int = MAX_WINDING_NODES,
) -> WindingResult:
    """Number of a-points of f (with multiplicity) inside the disk.

    Raises BoundaryObstruction when an a-point sits too close to the
    boundary circle, and ConvergenceError when the node budget is exhausted
    before the raw integral snaps to an integer (caller should subdivide)."""
    if not f.domain.contains(disk.center) or not f.domain.contains(
        disk.center + disk.radius * (1 + 1e-12)
    ):
        raise PreconditionError("winding disk leaves the function domain")
    poles_in, _ = _declared_poles_inside(f, disk)
    c = _Contour(f, a, disk, target)
    c.extend()
    prev_round = None
    while True:
        min_b = c.boundary_check()
        turns, max_step = _phase_winding(c.w)
        raw = c.raw_moment(0)
        contour_error = abs(raw - round(raw.real))
        snapped = int(round(raw.real))
        stable = prev_round is not None and snapped == prev_round
        if (
            contour_error <= SNAP
            and max_step < math.pi / 2
            and stable
            and abs(turns - snapped) <= SNAP
        ):
            count = snapped + poles_in
            if count < 0:
                raise ConvergenceError(
                    f"corrected count {count} negative: pole divisor inconsistent"
                )
            return WindingResult(
                count=count,
                contour_error=float(contour_error),
                disk=disk,
                nodes=c.count,
                min_boundary=min_b,
            )
        prev_round = snapped
        if c.count >= max_nodes:
            raise ConvergenceError(
                f"winding integral did not stabilize at {c.count} nodes "
                f"(raw {raw.real:.3f}); subdivide the region",
                best_value=raw.real,
            )
        c.extend()


def winding_count_jittered(
    f: FunctionHandle, a: complex, disk: DiskSpec, target: float = 1e-12
) -> WindingResult:
    """winding_count with the standard radius-jitter retry ladder.

    The returned WindingResult reports the adjusted disk actually used."""
    last: Exception | None = None
    for rel in JITTER_STEPS:
        d = DiskSpec(disk.center, disk.radius * (1.0 + rel))
        if not f.domain.contains(d.center + d.radius * (1 + 1e-12)):
            continue
        try:
            return winding_count(f, a, d, target)
        except BoundaryObstruction as exc:
            last = exc
    raise last if last is not None else BoundaryObstruction(
        "no jitter step fits the domain", min_modulus=0.0
    )


def _moment_seeds(f: FunctionHandle, a: complex, disk: DiskSpec) -> tuple:
    """Power-sum contour moments -> monic polynomial roots as seeds.

    Raw moments give sums over a-points minus poles; the declared pole
    divisor is added back exactly before Newton's identities.  Returns
    (WindingResult, seeds ndarray of roots in absolute coordinates)."""
    poles_in, pole_entries = _declared_poles_inside(f, disk)
    c = _Contour(f, a, disk, 1e-12)
    c.extend()
    prev = None
    while True:
        min_b = c.boundary_check()
        turns, max_step = _phase_winding(c.w)
        raw = c.raw_moment(0)
        snapped = int(round(raw.real))
        ok_count = (
            abs(raw - snapped) <= SNAP
            and max_step < math.pi / 2
            and prev is not None
            and prev[0] == snapped
        )
        if ok_count:
            m = snapped + poles_in
            if m < 0:
                raise ConvergenceError("corrected count negative: pole divisor inconsistent")
            if m == 0:
                return (
                    WindingResult(0, abs(raw - snapped), disk, c.count, min_b),
                    np.array([], dtype=complex),
                )
            if m > MOMENT_CAP:
                raise ConvergenceError(f"{m} points exceed the moment-route cap")
            mom = np.array([c.raw_moment(p) for p in range(1, m + 1)])
            if prev is not None and prev[1] is not None and len(prev[1]) == m:
                scale = disk.radius ** np.arange(1, m + 1)
                if float(np.max(np.abs(mom - prev[1]) / scale)) < 1e-9 * max(m, 1):
                    mom_c = mom.copy()
                    for b, mult in pole_entries:
                        y = b - disk.center
                        mom_c += mult * y ** np.arange(1, m + 1)
                    # Newton's identities: power sums -> elementary symmetric.
                    e = [1.0 + 0.0j]
                    for k in range(1, m + 1):
                        acc = 0.0 + 0.0j
                        for i in range(1, k + 1):
                            acc += (-1) ** (i - 1) * e[k - i] * mom_c[i - 1]
                        e.append(acc / k)
                    coeffs = [1.0 + 0.0j]
                    for k in range(1, m + 1):
                        coeffs.append((-1) ** k * e[k])
                    seeds = np.roots(np.array(coeffs)) + disk.center
                    return (
                        WindingResult(m, abs(raw - snapped), disk, c.count, min_b),
                        seeds,
                    )
            prev = (snapped, mom)
        else:
            prev = (snapped, None)
        if c.count >= MAX_WINDING_NODES:
            raise ConvergenceError("contour moments did not stabilize")
        c.extend()


def _newton(f: FunctionHandle, a: complex, x0: complex, mult: int, max_iter: int = 100):
    """Multiplicity-aware Newton; returns (x, step, residual, dmod) or None."""
    x = complex(x0)
    step = math.inf
    for _ in range(max_iter):
        v, _e = f.eval(np.array([x]), 1e-13)
        d, _ = f.deriv(np.array([x]), 1e-13)
        fv = complex(v[0]) - a
        dv = complex(d[0])
        if abs(dv) < 1e-300:
            return None
        delta = mult * fv / dv
        nx = x - delta
        if not f.domain.contains(nx, 0.0):
            return None
        step = abs(delta)
        x = nx
        if step < 1e-14 * (1.0 + abs(x)):
            break
    v, e = f.eval(np.array([x]), 1e-13)
    d, _ = f.deriv(np.array([x]), 1e-13)
    return x, step, abs(complex(v[0]) - a), abs(complex(d[0]))


def _locate_by_moments(
    f: FunctionHandle, a: complex, disk: DiskSpec, tol: float
) -> PointList | None:
    total, seeds = _moment_seeds_jittered(f, a, disk)
    if total.count == 0:
        return PointList([])
    inner = total.disk
    cluster_floor = max(tol, CLUSTER_TOL)

    polished = []
    for s in seeds:
        res = _newton(f, a, s, 1)
        if res is None:
            return None
        x, step, resid, dmod = res
        uncertainty = step + resid / max(dmod, 1e-300)
        polished.append((x, uncertainty))

    # Group seeds that converged to the same point; multiple roots stall at
    # ~sqrt-eps distances, so the grouping radius follows the uncertainty.
    groups: list = []
    for x, u in polished:
        for g in groups:
            if abs(x - g["loc"]) < max(cluster_floor, 10.0 * max(u, g["unc"]), 1e-7):
                g["members"] += 1
                g["unc"] = max(g["unc"], u)
                break
        else:
            groups.append({"loc": x, "unc": u, "members": 1})

    claims = []
    for g in groups:
        m = g["members"]
        loc = g["loc"]
        if m > 1:
            res = _newton(f, a, loc, m)
            if res is not None and res[1] < 1e-10 * (1.0 + abs(res[0])):
                loc = res[0]
            elif g["unc"] > 1e-5 * (1.0 + abs(loc)):
                return None
        if not inner.contains(loc, 1e-9):
            return None
        v, e = f.eval(np.array([loc]), 1e-13)
        d, _ = f.deriv(np.array([loc]), 1e-13)
        resid = abs(complex(v[0]) - a)
        dscale = max(abs(complex(d[0])), 1e-12)
        if resid > max(tol * dscale, 4.0 * float(e[0]) + 1e-12):
            return None
        claims.append((loc, m))

    if sum(m for _, m in claims) != total.count:
        return None
    return PointList.from_points(claims, merge_tol=cluster_floor)


def _moment_seeds_jittered(f, a, disk):
    last = None
    for rel in JITTER_STEPS:
        d = DiskSpec(disk.center, disk.radius * (1.0 + rel))
        if not f.domain.contains(d.center + d.radius * (1 + 1e-12)):
            continue
        try:
            return _moment_seeds(f, a, d)
        except BoundaryObstruction as exc:
            last = exc
    raise last if last is not None else BoundaryObstruction(
        "no jitter step fits the domain", min_modulus=0.0
    )


def _seven_cover(disk: DiskSpec) -> list:
    """Seven closed disks of 0.54 r covering the closed disk of radius r."""
    r = disk.radius
    subs = [DiskSpec(disk.center, 0.54 * r)]
    for k in range(6):
        ang = math.pi * (2 * k + 1) / 6.0
        subs.append(
            DiskSpec(disk.center + 0.85 * r * complex(math.cos(ang), math.sin(ang)), 0.54 * r)
        )
    return subs


def _recurse_cells(f, a, cell, count_hint, cluster_floor, tol, max_depth, depth, budget):
    """Depth-first subdivision; yields ("point", location, mult) or ("unresolved",...).

    `budget` is a single-element list of remaining winding evaluations; it
    keeps a pathological recursion from running away."""
    if count_hint is not None:
        cnt = count_hint
    else:
        if budget[0] <= 0:
            return [("unresolved", cell.center, 0)]
        budget[0] -= 1
        try:
            cnt = winding_count_jittered(f, a, cell).count
        except (BoundaryObstruction, ConvergenceError, PreconditionError):
            return [("unresolved", cell.center, 0)]
    if cnt == 0:
        return []
    res = _newton(f, a, cell.center, cnt)
    if res is not None:
        x, step, resid, dmod = res
        if (
            abs(x - cell.center) <= 1.25 * cell.radius
            and resid <= max(tol * max(dmod, 1e-12), 1e-12)
        ):
            return [("point", x, cnt)]
    if cell.radius <= cluster_floor or depth >= max_depth:
        return [("point", cell.center, cnt)]
    out = []
    for sub in _seven_cover(cell):
        out.extend(
            _recurse_cells(f, a, sub, None, cluster_floor, tol, max_depth, depth + 1, budget)
        )
    return out


def _merge_claims(raw, cluster_floor):
    """Deduplicate rediscoveries from overlapping sibling disks.

    Newton polishes the same root to the same coordinates from any cell, so
    claims closer than the cluster floor are one root (keep the larger
    multiplicity)."""
    claims: list = []
    for kind, p, m in raw:
        if kind == "unresolved":
            return None
        for i, (q, qm) in enumerate(claims):
            if abs(p - q) < cluster_floor:
                if m > qm:
                    claims[i] = (p, m)
                break
        else:
            claims.append((p, m))
    return claims


def locate_a_points(
    f: FunctionHandle,
    a: complex,
    disk: DiskSpec,
    tol: float = 1e-9,
    max_depth: int = 40,
) -> PointList:
    """All a-points of f in the disk; multiplicities sum to the winding count.

    Clusters tighter than the tolerance are reported as one location carrying
    the cluster's total multiplicity.  Deterministic for fixed inputs."""
    try:
        result = _locate_by_moments(f, a, disk, tol)
        if result is not None:
            return result
    except ConvergenceError:
        pass

    total = winding_count_jittered(f, a, disk)
    if total.count == 0:
        return PointList([])
    cluster_floor = max(tol, CLUSTER_TOL)
    raw = _recurse_cells(
        f, a, total.disk, total.count, cluster_floor, tol, max_depth, 0, [4000]
    )
    claims = _merge_claims(raw, cluster_floor)
    if claims is not None and sum(m for _, m in claims) == total.count:
        return PointList.from_points(claims, merge_tol=cluster_floor)
    raise ConvergenceError(
        f"located multiplicities do not account for the winding count "
        f"{total.count} in {disk}"
    )
