"""Shared oracles and random suites for the test modules.

Oracles here are deliberately independent of the library code paths they
check: brute-force partial sums with bracketing tails, the accelerated
alternating series for continuation cross-checks, and plain fine-grid
trapezoid quadrature."""

from __future__ import annotations

import math

import numpy as np

from zetalab.handles import poly_from_roots, rational_handle


def eta_alternating(s: complex, n: int = 64) -> complex:
    """Chebyshev-accelerated alternating sum of (-1)^k (k+1)^(-s).

    Converges like (3+sqrt(8))^(-n) for the alternating zeta series and
    extends to its analytic continuation (s = 0 included)."""
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    acc = 0.0 + 0.0j
    for k in range(n):
        c = b - c
        acc += c * complex(k + 1) ** (-s)
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0))
    return acc / d


def zeta_via_eta(s: complex, n: int = 64) -> complex:
    """zeta from the alternating series: eta(s) / (1 - 2^(1-s))."""
    return eta_alternating(s, n) / (1.0 - 2.0 ** complex(1.0 - s))


def direct_zeta_bracket(sigma: float, n_terms: int):
    """(lower, upper) bracket for zeta(sigma) from a partial sum.

    The tail of sum n^-sigma lies between the integrals from n_terms+1 and
    n_terms, evaluated in closed form."""
    partial = math.fsum((k ** -sigma for k in range(1, n_terms + 1)))
    lo = partial + (n_terms + 1) ** (1 - sigma) / (sigma - 1)
    hi = partial + n_terms ** (1 - sigma) / (sigma - 1)
    return lo, hi


def direct_zeta_deriv(s: complex, n_terms: int):
    """(-sum log n * n^-s, tail_bound) by brute-force summation."""
    ns = np.arange(2, n_terms + 1, dtype=float)
    terms = -np.log(ns) * ns ** (-complex(s))
    value = complex(np.sum(terms))
    sig = s.real
    a = sig - 1.0
    tail = n_terms ** (1.0 - sig) * (math.log(n_terms) / a + 1.0 / a**2)
    return value, tail


def trapezoid_log_plus(fn, r: float, nodes: int) -> float:
    """Independent fine-grid circle average of log+|fn| (plain trapezoid)."""
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    vals = fn(r * np.exp(1j * phi))
    return float(np.mean(np.log(np.maximum(np.abs(vals), 1.0))))


def trapezoid_log_abs(fn, r: float, nodes: int) -> float:
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    vals = fn(r * np.exp(1j * phi))
    return float(np.mean(np.log(np.abs(vals))))


def random_rational(rng, rho: float = 1.0, max_deg: int = 5, keep_origin_clear=True):
    """(handle, zeros, poles, scale): divisors off the rho-circle and origin."""
    while True:
        nz = int(rng.integers(0, max_deg + 1))
        npo = int(rng.integers(0, max_deg + 1))
        if nz + npo == 0:
            continue
        locs = []
        for _ in range(nz + npo):
            while True:
                rad = rng.uniform(0.05, 1.9) * rho
                if abs(rad - rho) > 0.08 * rho:
                    break
            ang = rng.uniform(0, 2 * math.pi)
            locs.append(rad * complex(math.cos(ang), math.sin(ang)))
        zeros, poles = locs[:nz], locs[nz:]
        scale = math.exp(rng.uniform(-1.0, 1.0)) * complex(
            math.cos(a := rng.uniform(0, 2 * math.pi)), math.sin(a)
        )
        h = rational_handle(zeros, poles, scale)
        if keep_origin_clear and min((abs(z) for z in locs), default=1.0) < 0.05:
            continue
        return h, zeros, poles, scale


def random_poly_with_roots(rng, disk_radius: float = 1.0, max_deg: int = 8):
    """(handle, inside_count): random polynomial from constructed roots.

    Roots avoid a band around the test circle so winding counts are exact by
    construction; repeated roots appear with positive probability."""
    deg = int(rng.integers(1, max_deg + 1))
    roots = []
    while len(roots) < deg:
        rad = rng.uniform(0.05, 2.0) * disk_radius
        if abs(rad - disk_radius) < 0.05 * disk_radius:
            continue
        ang = rng.uniform(0, 2 * math.pi)
        root = rad * complex(math.cos(ang), math.sin(ang))
        mult = 1
        if deg - len(roots) >= 2 and rng.uniform() < 0.2:
            mult = int(rng.integers(2, min(3, deg - len(roots)) + 1))
        roots.extend([root] * mult)
    inside = sum(1 for r in roots if abs(r) < disk_radius)
    return poly_from_roots(roots), roots, inside
