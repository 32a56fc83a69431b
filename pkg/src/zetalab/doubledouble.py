"""Error-free transformations and double-double helpers for long oscillatory sums.

The accuracy killer in sums like sum_n n^{-sigma} e^{-it log n} is the phase
t*log(n): in plain doubles its absolute rounding error grows like
|t| * log(n) * eps, which at t ~ 1e6 already costs ~1e-9 of a radian.  The
remedy used here is a table of log(n) held as an unevaluated double-double
(hi, lo) pair, exact products via Dekker splitting, and reduction of the
phase modulo 2*pi carried out in double-double before a single rounding to
double at the end.  The reduced phase is then accurate to a few ulps
independent of t.
"""

from __future__ import annotations

import math
import threading

import numpy as np
from mpmath import mp

_SPLITTER = 134217729.0  # 2**27 + 1

# 2*pi as an unevaluated double-double pair.
with mp.workdps(60):
    _TWO_PI_MP = 2 * mp.pi
TWO_PI_HI = float(_TWO_PI_MP)
TWO_PI_LO = float(_TWO_PI_MP - TWO_PI_HI)
INV_TWO_PI = 1.0 / (2.0 * math.pi)


def two_sum(a, b):
    """Knuth two-sum: s + e == a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def two_prod(a, b):
    """Dekker two-product: p + e == a * b exactly (no FMA required)."""
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def dd_add(xhi, xlo, yhi, ylo):
    """Double-double addition, accurate to ~1e-32 relative."""
    s, e = two_sum(xhi, yhi)
    e = e + (xlo + ylo)
    hi, lo = two_sum(s, e)
    return hi, lo


def reduce_phase(t, log_hi, log_lo):
    """Reduce t*(log_hi + log_lo) modulo 2*pi, returned as a double.

    Inputs may be scalars or numpy arrays (broadcast together).  The result
    lies within a few multiples of pi of zero and carries an absolute error
    of a few ulps of pi, independent of the size of t.
    """
    p, e = two_prod(t, log_hi)
    e = e + t * log_lo
    k = np.round((p + e) * INV_TWO_PI)
    m, me = two_prod(k, TWO_PI_HI)
    # p and m agree to within ~2*pi, so the subtraction is exact (Sterbenz).
    return (p - m) + (e - me - k * TWO_PI_LO)


class LogTable:
    """Growable table of log(n) as double-double pairs, n <= limit.

    Prime logarithms are seeded from mpmath at 40 digits; composite entries
    are assembled by peeling smallest prime factors with double-double
    additions, so every entry is accurate to ~1e-31 relative.
    """

    def __init__(self):
        self._limit = 0
        self._hi = np.zeros(1)
        self._lo = np.zeros(1)
        self._lock = threading.Lock()

    @property
    def limit(self) -> int:
        return self._limit

    def ensure(self, limit: int) -> None:
        if limit <= self._limit:
            return
        with self._lock:
            if limit <= self._limit:
                return
            self._build(max(limit, 2 * self._limit, 1024))

    def _build(self, limit: int) -> None:
        spf = np.zeros(limit + 1, dtype=np.int64)
        for i in range(2, int(math.isqrt(limit)) + 1):
            if spf[i] == 0:
                sl = spf[i * i :: i]
                sl[sl == 0] = i
        n = np.arange(limit + 1, dtype=np.int64)
        spf[2:][spf[2:] == 0] = n[2:][spf[2:] == 0]

        primes = np.flatnonzero((spf == n) & (n >= 2))
        plog_hi = np.zeros(limit + 1)
        plog_lo = np.zeros(limit + 1)
        with mp.workdps(40):
            for p in primes.tolist():
                v = mp.log(p)
                hi = float(v)
                plog_hi[p] = hi
                plog_lo[p] = float(v - hi)

        hi = np.zeros(limit + 1)
        lo = np.zeros(limit + 1)
        m = n.copy()
        m[:2] = 1
        active = m > 1
        while active.any():
            idx = np.flatnonzero(active)
            p = spf[m[idx]]
            hi[idx], lo[idx] = dd_add(hi[idx], lo[idx], plog_hi[p], plog_lo[p])
            m[idx] //= p
            active[idx] = m[idx] > 1

        self._hi, self._lo, self._limit = hi, lo, limit

    def slices(self, lo_n: int, hi_n: int):
        """(hi, lo) arrays for n in [lo_n, hi_n)."""
        self.ensure(hi_n - 1)
        return self._hi[lo_n:hi_n], self._lo[lo_n:hi_n]

    def gather(self, n_arr: np.ndarray):
        """(hi, lo) arrays for an arbitrary integer index array."""
        self.ensure(int(n_arr.max()))
        return self._hi[n_arr], self._lo[n_arr]

    def at(self, n: int):
        self.ensure(n)
        return self._hi[n], self._lo[n]


LOG_TABLE = LogTable()


def log_dd(n: int):
    """log(n) as a double-double pair from the shared table."""
    return LOG_TABLE.at(n)


def block_sum(parts: np.ndarray) -> complex:
    """Sum a 1-D complex array with compensated (Neumaier) accumulation."""
    s = 0.0
    c = 0.0
    si = 0.0
    ci = 0.0
    for v in parts:
        x = v.real
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        y = v.imag
        ti = si + y
        if abs(si) >= abs(y):
            ci += (si - ti) + y
        else:
            ci += (y - ti) + si
        si = ti
    return complex(s + c, si + ci)
